// dgen: command-line front end.

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "dgen/baseline.hpp"
#include "dgen/corpus.hpp"
#include "dgen/error.hpp"
#include "dgen/extract.hpp"
#include "dgen/generation.hpp"
#include "dgen/grct.hpp"
#include "dgen/humaneval.hpp"
#include "dgen/kernel.hpp"
#include "dgen/metrics.hpp"
#include "dgen/model_select.hpp"
#include "dgen/parse_bank.hpp"
#include "dgen/predictor.hpp"
#include "dgen/udtree.hpp"
#include "dgen/wire.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace dgen;

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return in;
}

// Human-readable output moves to stderr when JSON takes stdout.
std::ostream* g_text = &std::cout;
std::ostream& text_out() { return *g_text; }

// JSON documents go to `path` ("-" for stdout) when given.
void emit_json(const json& j, const std::string& path) {
  if (path.empty()) return;
  if (path == "-") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

json stats_json(const MeanSd& m) {
  return {{"mean", m.mean}, {"sd", m.sd}, {"min", m.min}, {"max", m.max}, {"n", m.n}};
}

std::string fmt_ms(const MeanSd& m) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(1) << m.mean << " +- " << m.sd;
  return s.str();
}

KernelParams kernel_params(double lambda, double mu) {
  KernelParams p{lambda, mu};
  p.validate();
  return p;
}

// A predictor plus the tokenizer that goes with it.
struct PredictorHandle {
  std::unique_ptr<Predictor> predictor;
  std::unique_ptr<Tokenizer> own_tokenizer;
  const Tokenizer* tokenizer = nullptr;
};

PredictorHandle open_predictor(const std::string& address) {
  PredictorHandle h;
  if (address.starts_with("mock:")) {
    h.predictor = std::make_unique<MockPredictor>(MockPredictor::from_file(address.substr(5)));
    h.own_tokenizer = std::make_unique<WhitespaceTokenizer>();
    h.tokenizer = h.own_tokenizer.get();
    return h;
  }
  auto remote = std::make_unique<wire::RemotePredictor>(wire::connect(address));
  h.tokenizer = remote.get();
  h.predictor = std::move(remote);
  return h;
}

struct Opts {
  std::uint64_t seed = kDefaultSeed;
  std::string json_out;
  std::string corpus;
  std::string split = "test";
  std::string train_corpus;
  std::string parses;
  std::string out;
  std::string released;
  std::string generated;
  std::string variant = "upmlm";
  std::string order = "sf";
  std::string predictor;
  std::string tokenizer;
  std::string responses;
  std::string judgments;
  std::string entropy_report;
  std::string a, b, conllu_a, conllu_b;
  std::string script;
  std::vector<std::string> reports;
  double lambda = 1.0;
  double mu = 1.0;
  double mu0 = 25.5;
  double threshold = 0.05;
  std::size_t k = 3;
  std::size_t max_len = kMaxDistractorTokens;
  std::size_t max_maskings = kMaxMaskings;
  std::size_t buckets = 5;
  std::size_t per_bucket = 9;
  bool population = false;
  bool lexicals = false;
  bool no_pad = false;
};

int cmd_stats(const Opts& o) {
  const Corpus c = load_corpus(o.corpus, parse_split(o.split));
  const StatsReport r = corpus_stats(c, o.population ? SdKind::population : SdKind::sample);
  text_out() << "split            " << o.split << '\n'
            << "texts            " << r.n_texts << '\n'
            << "MCQs             " << r.n_mcqs << '\n'
            << "distractors/MCQ  " << fmt_ms(r.distractor_count) << '\n'
            << "Len(T)           " << fmt_ms(r.text_length) << '\n'
            << "Len(A)           " << fmt_ms(r.key_length) << '\n'
            << "Len(D)           " << fmt_ms(r.distractor_length) << '\n'
            << "|Len(A)-Len(D)|  " << fmt_ms(r.key_distractor_diff) << '\n';
  emit_json({{"schema", "dgen.stats/1"},
             {"seed", o.seed},
             {"split", o.split},
             {"sd", o.population ? "population" : "sample"},
             {"n_texts", r.n_texts},
             {"n_mcqs", r.n_mcqs},
             {"distractor_count", stats_json(r.distractor_count)},
             {"text_length", stats_json(r.text_length)},
             {"key_length", stats_json(r.key_length)},
             {"distractor_length", stats_json(r.distractor_length)},
             {"key_distractor_diff", stats_json(r.key_distractor_diff)}},
            o.json_out);
  return 0;
}

int cmd_import(const Opts& o) {
  auto in = open_in(o.released);
  const ImportResult r = import_released(in, parse_split(o.split));
  save_corpus(o.out, r.corpus);
  text_out() << "imported " << r.corpus.texts().size() << " texts, " << r.corpus.mcqs().size() << " MCQs; "
            << r.dropped_offsets << " offsets dropped\n";
  return 0;
}

int cmd_baseline(const Opts& o) {
  const Corpus c = load_corpus(o.corpus, parse_split(o.split));
  const ParseBank bank = ParseBank::load_dir(o.parses);
  BaselineOptions bo;
  bo.k = o.k;
  bo.params = kernel_params(o.lambda, o.mu);
  bo.pad = !o.no_pad;
  const auto records = run_baseline(c, bank, bo);
  GeneratedSet set;
  set.header = {{"producer", "baseline"}, {"seed", o.seed}, {"k", o.k}};
  json details = json::array();
  for (const auto& r : records) {
    std::vector<std::string> ds;
    json sugg = json::array();
    for (const auto& s : r.suggestions) {
      ds.push_back(s.surface);
      sugg.push_back({{"surface", s.surface}, {"score", s.score}, {"sentence", s.source_sentence}, {"root", s.source_root}});
    }
    ds.resize(GeneratedSet::kSlots);
    set.add(r.mcq_id, std::move(ds));
    details.push_back({{"mcq_id", r.mcq_id}, {"suggestions", std::move(sugg)}});
  }
  auto out = open_out(o.out);
  write_generated(out, set);
  emit_json({{"schema", "dgen.baseline/1"}, {"seed", o.seed}, {"records", std::move(details)}}, o.json_out);
  text_out() << "baseline: " << records.size() << " MCQs -> " << o.out << '\n';
  return 0;
}

int cmd_extract(const Opts& o) {
  const Corpus c = load_corpus(o.corpus, parse_split(o.split));
  ExtractionConfig cfg;
  cfg.variant = parse_variant(o.variant);
  cfg.seed = o.seed;
  cfg.max_maskings = o.max_maskings;
  PredictorHandle h;
  WhitespaceTokenizer ws;
  const Tokenizer* tok = &ws;
  if (!o.tokenizer.empty()) {
    h = open_predictor(o.tokenizer);
    tok = h.tokenizer;
  }
  const auto examples = extract_corpus(c, *tok, cfg);
  auto out = open_out(o.out);
  write_examples(out, examples, cfg);
  text_out() << "extracted " << examples.size() << " " << to_string(cfg.variant) << " examples -> " << o.out << '\n';
  return 0;
}

int cmd_generate(const Opts& o) {
  const Corpus c = load_corpus(o.corpus, parse_split(o.split));
  PredictorHandle h = open_predictor(o.predictor);
  GenerationRun run;
  run.config.variant = parse_variant(o.variant);
  run.config.max_len = o.max_len;
  run.order = parse_order_mode(o.order);
  run.seed = o.seed;
  const auto records = run_generation(c, *h.predictor, *h.tokenizer, run);
  GeneratedSet set;
  set.header = {{"producer", "generate"},
                {"seed", o.seed},
                {"variant", to_string(run.config.variant)},
                {"order", to_string(run.order)}};
  json details = json::array();
  for (const auto& r : records) {
    set.add(r.mcq_id, r.distractors);
    json raw = json::array();
    for (const auto& g : r.raw) {
      json steps = json::array();
      for (const auto& s : g.steps) steps.push_back({{"position", s.position}, {"token", s.token}, {"p", s.p}});
      raw.push_back({{"tokens", g.tokens}, {"stop", to_string(g.stop)}, {"steps", std::move(steps)}});
    }
    details.push_back({{"mcq_id", r.mcq_id}, {"distractors", std::move(raw)}});
  }
  auto out = open_out(o.out);
  write_generated(out, set);
  emit_json({{"schema", "dgen.generation/1"}, {"seed", o.seed}, {"records", std::move(details)}}, o.json_out);
  text_out() << "generated " << records.size() << " MCQs -> " << o.out << '\n';
  return 0;
}

int cmd_metrics(const Opts& o) {
  const GeneratedSet gen = load_generated(o.generated);
  const Corpus c = load_corpus(o.corpus, parse_split(o.split));
  std::optional<Corpus> train;
  if (!o.train_corpus.empty()) train = load_corpus(o.train_corpus, Split::train);
  std::optional<ParseBank> bank;
  if (!o.parses.empty()) bank = ParseBank::load_dir(o.parses);
  EvalInputs in;
  in.corpus = &c;
  in.train = train ? &*train : nullptr;
  in.parses = bank ? &*bank : nullptr;
  in.params = kernel_params(o.lambda, o.mu);
  const MetricReport r = evaluate(gen, in);
  text_out() << format_report(r);
  json j = report_to_json(r);
  j["seed"] = o.seed;
  emit_json(j, o.json_out);
  return 0;
}

json entropy_json(const std::vector<humaneval::EntropyRow>& rows, const humaneval::LfDisSummary& lf) {
  json qs = json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    qs.push_back({{"mcq_id", r.mcq_id},
                  {"n", r.n},
                  {"p_key", r.p_key},
                  {"p_distractors", r.p_distractors},
                  {"entropy", r.entropy},
                  {"choices", r.choices},
                  {"lf_dis", lf.rows[i].flagged}});
  }
  return qs;
}

int cmd_students(const Opts& o) {
  auto in = open_in(o.responses);
  const auto rm = humaneval::read_responses(in, o.responses);
  const auto rows = humaneval::entropy_report(rm);
  const auto lf = humaneval::lf_dis(rm, o.threshold);
  const auto counts = humaneval::correct_counts(rm);
  const auto t = humaneval::one_sample_ttest(counts, o.mu0);
  json outliers = json::object();
  text_out() << std::fixed << std::setprecision(4);
  text_out() << "subjects " << rm.subjects().size() << ", MCQs " << rm.mcqs().size() << '\n';
  text_out() << "t(" << t.df << ") = " << t.t << ", p = " << std::scientific << t.p << std::fixed << ", r = " << t.r
            << " (mean " << t.mean << ", SE " << t.se << ", mu0 " << o.mu0 << ")\n";
  if (counts.size() >= 4) {
    for (const auto& [name, m] : {std::pair{"mild", 1.5}, std::pair{"extreme", 3.0}}) {
      const auto flags = humaneval::iqr_outliers(counts, m);
      json ids = json::array();
      for (std::size_t i = 0; i < flags.size(); ++i)
        if (flags[i]) ids.push_back(rm.subjects()[i]);
      text_out() << name << " outliers " << ids.size() << '\n';
      outliers[name] = std::move(ids);
    }
  }
  text_out() << "LF-DIS: MCQs losing >=1 " << lf.lose_any << ", losing all " << lf.lose_all << ", keeping all "
            << lf.keep_all << '\n';
  for (const auto& r : rows) text_out() << "  " << r.mcq_id << "  H=" << r.entropy << "  p_key=" << r.p_key << '\n';
  emit_json({{"schema", "dgen.humaneval.students/1"},
             {"seed", o.seed},
             {"mu0", o.mu0},
             {"threshold", o.threshold},
             {"questions", entropy_json(rows, lf)},
             {"lf_dis", {{"lose_any", lf.lose_any}, {"lose_all", lf.lose_all}, {"keep_all", lf.keep_all}}},
             {"ttest",
              {{"n", t.n}, {"mean", t.mean}, {"sd", t.sd}, {"se", t.se}, {"t", t.t}, {"df", t.df}, {"p", t.p}, {"r", t.r}}},
             {"outliers", std::move(outliers)}},
            o.json_out);
  return 0;
}

int cmd_teachers(const Opts& o) {
  auto in = open_in(o.judgments);
  const auto jm = humaneval::read_judgments(in, o.judgments);
  std::optional<humaneval::LfDisSummary> lf;
  if (!o.responses.empty()) {
    auto rin = open_in(o.responses);
    lf = humaneval::lf_dis(humaneval::read_responses(rin, o.responses), o.threshold);
  }
  const auto s = humaneval::acceptance_summary(jm, lf ? &*lf : nullptr);
  const auto g = humaneval::gamma_counts(jm);
  std::optional<double> gamma;
  if (g.concordant + g.discordant > 0 && jm.teachers().size() >= 2) gamma = humaneval::gamma_n(jm);
  text_out() << std::fixed << std::setprecision(2);
  text_out() << "teachers " << s.n_teachers << ", MCQs " << s.n_mcqs << '\n'
            << "mean accepted per MCQ per teacher " << s.mean_accepted << '\n'
            << "all teachers accept >=1       " << s.all_accept_any << " (" << s.pct(s.all_accept_any) << "%)\n"
            << "majority accepts >=1          " << s.majority_accept_any << " (" << s.pct(s.majority_accept_any) << "%)\n"
            << "majority accepts all          " << s.majority_accept_all << " (" << s.pct(s.majority_accept_all) << "%)\n"
            << "majority rejects all          " << s.majority_reject_all << " (" << s.pct(s.majority_reject_all) << "%)\n";
  text_out() << "gamma_N ";
  if (gamma) text_out() << *gamma;
  else text_out() << "undefined";
  text_out() << " (C=" << g.concordant << ", D=" << g.discordant << ")\n";
  json reasons = json::object();
  for (const auto& [k, v] : s.reasons) reasons[k] = v;
  json j = {{"schema", "dgen.humaneval.teachers/1"},
            {"seed", o.seed},
            {"n_teachers", s.n_teachers},
            {"n_mcqs", s.n_mcqs},
            {"mean_accepted", s.mean_accepted},
            {"all_accept_any", s.all_accept_any},
            {"majority_accept_any", s.majority_accept_any},
            {"all_accept_all", s.all_accept_all},
            {"all_reject_all", s.all_reject_all},
            {"majority_accept_all", s.majority_accept_all},
            {"majority_reject_all", s.majority_reject_all},
            {"rejection_reasons", std::move(reasons)},
            {"gamma_n", gamma ? json(*gamma) : json(nullptr)},
            {"concordant", g.concordant},
            {"discordant", g.discordant}};
  if (s.lf_cross) {
    json per = json::array();
    for (const auto& [key, n] : s.lf_cross->per_mcq)
      per.push_back({{"lf_accepted", key.first}, {"lf_rejected", key.second}, {"mcqs", n}});
    j["lf_cross"] = {{"items", s.lf_cross->counts}, {"per_mcq", std::move(per)}};
  }
  emit_json(j, o.json_out);
  return 0;
}

int cmd_sample(const Opts& o) {
  auto in = open_in(o.entropy_report);
  json rep;
  try {
    rep = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(o.entropy_report + ": " + e.what());
  }
  std::vector<std::pair<std::string, double>> ent;
  try {
    for (const auto& q : rep.at("questions")) ent.emplace_back(q.at("mcq_id").get<std::string>(), q.at("entropy").get<double>());
  } catch (const json::exception& e) {
    throw ParseError(o.entropy_report + ": " + e.what());
  }
  const auto s = humaneval::entropy_buckets(ent, o.buckets, o.per_bucket, o.seed);
  json buckets = json::array();
  for (std::size_t b = 0; b < s.sampled.size(); ++b) {
    buckets.push_back({{"size", s.buckets[b].size()}, {"sampled", s.sampled[b]}});
    text_out() << "bucket " << b + 1 << " (" << s.buckets[b].size() << "):";
    for (const auto& id : s.sampled[b]) text_out() << ' ' << id;
    text_out() << '\n';
  }
  emit_json({{"schema", "dgen.humaneval.sample/1"}, {"seed", o.seed}, {"buckets", std::move(buckets)}, {"ids", s.ids()}},
            o.json_out);
  return 0;
}

int cmd_model_select(const Opts& o) {
  std::vector<NamedReport> reports;
  for (const auto& spec : o.reports) {
    const auto eq = spec.find('=');
    const std::string name = eq == std::string::npos ? spec : spec.substr(0, eq);
    const std::string path = eq == std::string::npos ? spec : spec.substr(eq + 1);
    auto in = open_in(path);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(path + ": " + e.what());
    }
    reports.push_back({name, report_from_json(j)});
  }
  const Selection s = model_select(reports);
  text_out() << format_selection(s);
  json j = selection_to_json(s);
  j["seed"] = o.seed;
  emit_json(j, o.json_out);
  return 0;
}

GrctNode tree_arg(const std::string& bracketed, const std::string& conllu, bool lexicals) {
  if (!conllu.empty()) {
    auto in = open_in(conllu);
    const auto trees = parse_conllu(in, conllu);
    if (trees.empty()) throw ValidationError(conllu + " holds no sentence");
    return to_grct(trees.front(), lexicals);
  }
  return parse_bracketed(bracketed, lexicals);
}

int cmd_kernel(const Opts& o) {
  const KernelParams p = kernel_params(o.lambda, o.mu);
  const GrctNode a = tree_arg(o.a, o.conllu_a, o.lexicals);
  const GrctNode b = tree_arg(o.b, o.conllu_b, o.lexicals);
  const double k = ptk(a, b, p);
  const double n = ncptk(a, b, p);
  text_out() << std::setprecision(12) << "a      " << to_bracketed(a) << "\nb      " << to_bracketed(b) << "\nptk    " << k
            << "\nncptk  " << n << '\n';
  emit_json({{"schema", "dgen.kernel/1"},
             {"seed", o.seed},
             {"lambda", p.lambda},
             {"mu", p.mu},
             {"a", to_bracketed(a)},
             {"b", to_bracketed(b)},
             {"ptk", k},
             {"ncptk", n}},
            o.json_out);
  return 0;
}

int cmd_mock_serve(const Opts& o) {
  MockPredictor mock = MockPredictor::from_file(o.script);
  WhitespaceTokenizer tok;
  wire::FdChannel ch(0, 1, false);
  wire::serve(ch, mock, tok);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MCQ distractor generation and evaluation toolkit"};
  app.require_subcommand(1);
  Opts o;

  auto seed = [&](CLI::App* c) { c->add_option("--seed", o.seed, "random seed")->capture_default_str(); };
  auto json_opt = [&](CLI::App* c) { c->add_option("--json", o.json_out, "write the JSON report here (- for stdout)"); };
  auto split = [&](CLI::App* c) { c->add_option("--split", o.split, "train|dev|test")->capture_default_str(); };
  auto kernel = [&](CLI::App* c) {
    c->add_option("--lambda", o.lambda, "gap decay")->capture_default_str();
    c->add_option("--mu", o.mu, "depth decay")->capture_default_str();
  };

  auto* stats = app.add_subcommand("stats", "descriptive corpus statistics");
  stats->add_option("--corpus", o.corpus)->required();
  stats->add_flag("--population", o.population, "population SD instead of sample SD");
  split(stats), seed(stats), json_opt(stats);

  auto* imp = app.add_subcommand("import", "convert the released JSON layout to a corpus file");
  imp->add_option("--released", o.released)->required();
  imp->add_option("--out", o.out)->required();
  split(imp);

  auto* base = app.add_subcommand("baseline", "tree-kernel baseline distractors");
  base->add_option("--corpus", o.corpus)->required();
  base->add_option("--parses", o.parses, "directory with texts.conllu and phrases.conllu")->required();
  base->add_option("--out", o.out)->required();
  base->add_option("--k", o.k)->capture_default_str();
  base->add_flag("--no-pad", o.no_pad, "do not pad with empty suggestions");
  split(base), kernel(base), seed(base), json_opt(base);

  auto* ext = app.add_subcommand("extract", "training datapoints for the masked LM");
  ext->add_option("--corpus", o.corpus)->required();
  ext->add_option("--variant", o.variant, "l2r|upmlm")->capture_default_str();
  ext->add_option("--out", o.out)->required();
  ext->add_option("--max-maskings", o.max_maskings)->capture_default_str();
  ext->add_option("--tokenizer", o.tokenizer, "predictor address supplying the tokenizer (default: whitespace)");
  split(ext), seed(ext);

  auto* gen = app.add_subcommand("generate", "generate distractors against a predictor");
  gen->add_option("--corpus", o.corpus)->required();
  gen->add_option("--predictor", o.predictor, "tcp:HOST:PORT | unix:PATH | exec:CMD | mock:SCRIPT")->required();
  gen->add_option("--out", o.out)->required();
  gen->add_option("--variant", o.variant, "l2r|upmlm")->capture_default_str();
  gen->add_option("--order", o.order, "sf|lf|rnd")->capture_default_str();
  gen->add_option("--max-len", o.max_len)->capture_default_str();
  split(gen), seed(gen), json_opt(gen);

  auto* met = app.add_subcommand("metrics", "quantitative metrics of a generated set");
  met->add_option("--generated", o.generated)->required();
  met->add_option("--corpus", o.corpus)->required();
  met->add_option("--train-corpus", o.train_corpus);
  met->add_option("--parses", o.parses);
  split(met), kernel(met), seed(met), json_opt(met);

  auto* he = app.add_subcommand("humaneval", "human evaluation statistics");
  he->require_subcommand(1);
  auto* stu = he->add_subcommand("students", "entropy, LF-DIS, t-test and outliers");
  stu->add_option("--responses", o.responses)->required();
  stu->add_option("--mu0", o.mu0)->capture_default_str();
  stu->add_option("--threshold", o.threshold)->capture_default_str();
  seed(stu), json_opt(stu);
  auto* tea = he->add_subcommand("teachers", "acceptance summary and gamma_N");
  tea->add_option("--judgments", o.judgments)->required();
  tea->add_option("--responses", o.responses, "student responses for the LF-DIS cross-table");
  tea->add_option("--threshold", o.threshold)->capture_default_str();
  seed(tea), json_opt(tea);
  auto* smp = he->add_subcommand("sample", "entropy-bucket sample of MCQs");
  smp->add_option("--entropy-report", o.entropy_report)->required();
  smp->add_option("--buckets", o.buckets)->capture_default_str();
  smp->add_option("--per-bucket", o.per_bucket)->capture_default_str();
  seed(smp), json_opt(smp);

  auto* ms = app.add_subcommand("model-select", "win-count comparison of metric reports");
  ms->add_option("--report", o.reports, "NAME=metrics.json (repeatable)")->required();
  seed(ms), json_opt(ms);

  auto* ker = app.add_subcommand("kernel", "partial tree kernel between two trees");
  ker->add_option("--a", o.a, "bracketed GRCT");
  ker->add_option("--b", o.b, "bracketed GRCT");
  ker->add_option("--conllu-a", o.conllu_a, "first sentence of a CoNLL-U file");
  ker->add_option("--conllu-b", o.conllu_b);
  ker->add_flag("--lexicals", o.lexicals, "keep word nodes");
  kernel(ker), seed(ker), json_opt(ker);

  auto* mock = app.add_subcommand("mock-serve", "serve a scripted predictor over stdin/stdout");
  mock->add_option("--script", o.script)->required();

  CLI11_PARSE(app, argc, argv);
  if (o.json_out == "-") g_text = &std::cerr;

  try {
    if (*stats) return cmd_stats(o);
    if (*imp) return cmd_import(o);
    if (*base) return cmd_baseline(o);
    if (*ext) return cmd_extract(o);
    if (*gen) return cmd_generate(o);
    if (*met) return cmd_metrics(o);
    if (*stu) return cmd_students(o);
    if (*tea) return cmd_teachers(o);
    if (*smp) return cmd_sample(o);
    if (*ms) return cmd_model_select(o);
    if (*ker) return cmd_kernel(o);
    if (*mock) return cmd_mock_serve(o);
  } catch (const std::exception& e) {
    std::cerr << "dgen: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
