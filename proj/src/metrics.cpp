#include "dgen/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dgen/error.hpp"
#include "dgen/grct.hpp"
#include "dgen/text.hpp"

namespace dgen {

using json = nlohmann::ordered_json;

void GeneratedSet::add(std::string mcq_id, std::vector<std::string> distractors) {
  if (distractors.size() != kSlots)
    throw ValidationError("MCQ " + mcq_id + ": expected " + std::to_string(kSlots) + " generated distractors, got " +
                          std::to_string(distractors.size()));
  if (entries_.contains(mcq_id)) throw ValidationError("MCQ " + mcq_id + " generated twice");
  entries_.emplace(std::move(mcq_id), std::move(distractors));
}

const std::vector<std::string>* GeneratedSet::find(std::string_view mcq_id) const {
  auto it = entries_.find(mcq_id);
  return it == entries_.end() ? nullptr : &it->second;
}

void write_generated(std::ostream& out, const GeneratedSet& set) {
  json head;
  head["schema"] = "dgen.suggestions/1";
  for (const auto& [k, v] : set.header.items())
    if (k != "schema") head[k] = v;
  out << head.dump() << '\n';
  for (const auto& [id, ds] : set.entries()) out << json{{"mcq_id", id}, {"distractors", ds}}.dump() << '\n';
}

GeneratedSet read_generated(std::istream& in, std::string_view source) {
  GeneratedSet set;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = std::string(source) + ":" + std::to_string(lineno);
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(where + ": " + e.what());
    }
    if (rec.contains("schema")) {
      for (const auto& [k, v] : rec.items())
        if (k != "schema") set.header[k] = v;
      continue;
    }
    try {
      set.add(rec.at("mcq_id").get<std::string>(), rec.at("distractors").get<std::vector<std::string>>());
    } catch (const json::exception& e) {
      throw ParseError(where + ": " + e.what());
    } catch (const ValidationError& e) {
      throw ValidationError(where + ": " + e.what());
    }
  }
  return set;
}

GeneratedSet load_generated(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return read_generated(in, path.string());
}

namespace {

double pct(std::size_t k, std::size_t n) { return n == 0 ? 0.0 : 100.0 * static_cast<double>(k) / static_cast<double>(n); }

double round2(double v) { return std::round(v * 100.0) / 100.0; }

bool has_contiguous_repeat(std::string_view normalized) {
  const auto words = text::split_words(normalized);
  for (std::size_t i = 1; i < words.size(); ++i)
    if (words[i] == words[i - 1]) return true;
  return false;
}

// Substring search over a set of normalized texts.
struct TextIndex {
  std::vector<std::string> texts;
  bool any_contains(const std::string& needle) const {
    return std::any_of(texts.begin(), texts.end(),
                       [&](const std::string& t) { return t.find(needle) != std::string::npos; });
  }
};

struct Slot {
  std::string raw;   // special tokens stripped
  std::string norm;  // match form
  bool empty() const { return norm.empty(); }
};

}  // namespace

MetricReport evaluate(const GeneratedSet& generated, const EvalInputs& in) {
  if (in.corpus == nullptr) throw Error("evaluate needs a corpus");
  const Corpus& corpus = *in.corpus;
  in.params.validate();

  std::vector<std::string> missing;
  for (const auto& m : corpus.mcqs())
    if (generated.find(m.id) == nullptr) missing.push_back(m.id);
  std::vector<std::string> unknown;
  for (const auto& [id, _] : generated.entries())
    if (corpus.find_mcq(id) == nullptr) unknown.push_back(id);
  if (!missing.empty() || !unknown.empty()) {
    std::string msg;
    if (!missing.empty()) {
      msg += "MCQs missing from generated set:";
      for (const auto& id : missing) msg += " " + id;
    }
    if (!unknown.empty()) {
      if (!msg.empty()) msg += "; ";
      msg += "generated MCQs not in corpus:";
      for (const auto& id : unknown) msg += " " + id;
    }
    throw ValidationError(msg);
  }

  std::set<std::string, std::less<>> train_dis;
  TextIndex train_texts;
  if (in.train != nullptr) {
    for (const auto& m : in.train->mcqs())
      for (const auto& d : m.distractors) train_dis.insert(text::normalize_for_match(d.surface));
    for (const auto& t : in.train->texts()) train_texts.texts.push_back(text::normalize_for_match(t.body));
  }
  const bool have_train = in.train != nullptr;

  std::size_t refs_total = 0, refs_hit = 0;
  std::size_t c_ref = 0, c_in_text = 0, c_key = 0, c_any_same = 0, c_all_same = 0, c_rep = 0, c_empty = 0;
  std::size_t c_from_train = 0, c_cap = 0, c_is_train = 0, c_in_train = 0, c_train_not_own = 0;
  std::size_t c_all_in_text = 0, c_all_in_train = 0, c_all_train_dis = 0;
  std::vector<double> scores;
  NcptkStats ks;

  for (const auto& mcq : corpus.mcqs()) {
    const auto& gens = *generated.find(mcq.id);
    std::vector<Slot> slots;
    for (const auto& g : gens) {
      Slot s;
      s.raw = text::strip_special_tokens(g);
      s.norm = text::normalize_for_match(s.raw);
      slots.push_back(std::move(s));
    }
    const std::string own_text = text::normalize_for_match(corpus.text_of(mcq).body);
    const std::string key_norm = text::normalize_for_match(mcq.key.surface);
    auto in_own = [&](const Slot& s) { return !s.empty() && own_text.find(s.norm) != std::string::npos; };
    auto in_train_text = [&](const Slot& s) { return !s.empty() && train_texts.any_contains(s.norm); };
    auto is_train_dis = [&](const Slot& s) { return !s.empty() && train_dis.contains(s.norm); };

    bool any_ref = false;
    for (const auto& d : mcq.distractors) {
      const std::string rn = text::normalize_for_match(d.surface);
      ++refs_total;
      const bool hit = std::any_of(slots.begin(), slots.end(), [&](const Slot& s) { return !s.empty() && s.norm == rn; });
      if (hit) {
        ++refs_hit;
        any_ref = true;
      }
    }
    c_ref += any_ref;

    const auto any = [&](auto pred) { return std::any_of(slots.begin(), slots.end(), pred); };
    const auto all = [&](auto pred) { return std::all_of(slots.begin(), slots.end(), pred); };

    c_in_text += any(in_own);
    c_all_in_text += all(in_own);
    c_key += any([&](const Slot& s) { return !s.empty() && s.norm == key_norm; });
    c_rep += any([](const Slot& s) { return has_contiguous_repeat(s.norm); });
    c_empty += any([](const Slot& s) { return s.empty(); });

    // empty slots never count as identical to each other
    bool any_same = false;
    for (std::size_t i = 0; i < slots.size(); ++i)
      for (std::size_t j = i + 1; j < slots.size(); ++j)
        if (!slots[i].empty() && slots[i].norm == slots[j].norm) any_same = true;
    c_any_same += any_same;
    c_all_same += !slots.empty() && all([&](const Slot& s) { return !s.empty() && s.norm == slots.front().norm; });

    const auto key_case = text::leading_case(mcq.key.surface);
    c_cap += any([&](const Slot& s) { return !s.empty() && text::leading_case(s.raw) != key_case; });

    if (have_train) {
      c_from_train += any([&](const Slot& s) { return is_train_dis(s) && !in_own(s); });
      c_is_train += any(is_train_dis);
      c_in_train += any(in_train_text);
      c_train_not_own += any([&](const Slot& s) { return in_train_text(s) && !in_own(s); });
      c_all_in_train += all(in_train_text);
      c_all_train_dis += all(is_train_dis);
    }

    if (in.parses != nullptr) {
      const DepTree* key_tree = in.parses->phrase(text::collapse_whitespace(mcq.key.surface));
      if (key_tree == nullptr) {
        ++ks.keys_unparseable;
        continue;
      }
      const NormalizedKernel kernel(to_grct(*key_tree, false), in.params);
      for (const auto& s : slots) {
        const DepTree* t = s.empty() ? nullptr : in.parses->phrase(text::collapse_whitespace(s.raw));
        if (t == nullptr) {
          ++ks.unparseable;
          continue;
        }
        scores.push_back(kernel(to_grct(*t, false)));
      }
    }
  }

  const std::size_t n = corpus.mcqs().size();
  MetricReport r;
  r.n_mcqs = n;
  r.dis_recall = pct(refs_hit, refs_total);
  r.any_dis_ref_match = pct(c_ref, n);
  r.any_dis_in_text = pct(c_in_text, n);
  r.key_in_dis = pct(c_key, n);
  r.any_same_dis = pct(c_any_same, n);
  r.all_same_dis = pct(c_all_same, n);
  r.any_dis_rep = pct(c_rep, n);
  r.any_dis_empty = pct(c_empty, n);
  r.any_dis_cap_diff = pct(c_cap, n);
  r.all_dis_in_text = pct(c_all_in_text, n);
  if (have_train) {
    r.any_dis_from_train_dis = pct(c_from_train, n);
    r.any_dis_is_train_dis = pct(c_is_train, n);
    r.any_dis_in_any_train_text = pct(c_in_train, n);
    r.any_dis_in_train_text_not_own = pct(c_train_not_own, n);
    r.all_dis_in_train_text = pct(c_all_in_train, n);
    r.all_dis_are_train_dis = pct(c_all_train_dis, n);
  }

  if (!scores.empty()) {
    // sorted first so the statistics do not depend on input order
    std::sort(scores.begin(), scores.end());
    ks.pairs = scores.size();
    double sum = 0.0;
    for (double v : scores) sum += v;
    ks.mean = sum / static_cast<double>(scores.size());
    const std::size_t m = scores.size() / 2;
    ks.median = scores.size() % 2 == 1 ? scores[m] : (scores[m - 1] + scores[m]) / 2.0;
    std::map<long, std::size_t> bins;
    for (double v : scores) ++bins[std::lround(v * 100.0)];
    auto best = bins.begin();
    for (auto it = bins.begin(); it != bins.end(); ++it)
      if (it->second >= best->second) best = it;  // ties go to the larger value
    ks.mode = static_cast<double>(best->first) / 100.0;
    ks.mode_share = pct(best->second, scores.size());
  }
  r.ncptk = ks;
  return r;
}

std::vector<MetricRow> metric_rows(const MetricReport& r) {
  std::vector<MetricRow> rows = {
      {"dis_recall", "DisRecall", r.dis_recall, {}, Better::higher},
      {"any_dis_ref_match", "AnyDisRefMatch", r.any_dis_ref_match, {}, Better::higher},
      {"any_dis_in_text", "AnyDisInText", r.any_dis_in_text, {}, Better::higher},
      {"key_in_dis", "KeyInDis", r.key_in_dis, {}, Better::lower},
      {"any_same_dis", "AnySameDis", r.any_same_dis, {}, Better::lower},
      {"all_same_dis", "AllSameDis", r.all_same_dis, {}, Better::lower},
      {"any_dis_rep", "AnyDisRep", r.any_dis_rep, {}, Better::lower},
      {"any_dis_empty", "AnyDisEmpty", r.any_dis_empty, {}, Better::lower},
      {"any_dis_from_train_dis", "AnyDisFromTrainDis", r.any_dis_from_train_dis, {}, Better::lower},
      {"mean_ncptk", "MeanNCPTK", r.ncptk.mean, {}, Better::higher, false},
      {"median_ncptk", "MedianNCPTK", r.ncptk.median, {}, Better::higher, false},
      {"mode_ncptk", "ModeNCPTK", r.ncptk.mode, r.ncptk.mode_share, Better::higher, false},
  };
  const std::vector<MetricRow> extra = {
      {"any_dis_cap_diff", "AnyDisCapDiff", r.any_dis_cap_diff, {}, Better::lower, true, false},
      {"any_dis_is_train_dis", "AnyDisIsTrainDis", r.any_dis_is_train_dis, {}, Better::lower, true, false},
      {"any_dis_in_any_train_text", "AnyDisInAnyTrainText", r.any_dis_in_any_train_text, {}, Better::lower, true, false},
      {"any_dis_in_train_text_not_own", "AnyDisInTrainTextNotOwn", r.any_dis_in_train_text_not_own, {},
       Better::lower, true, false},
      {"all_dis_in_text", "AllDisInText", r.all_dis_in_text, {}, Better::higher, true, false},
      {"all_dis_in_train_text", "AllDisInTrainText", r.all_dis_in_train_text, {}, Better::lower, true, false},
      {"all_dis_are_train_dis", "AllDisAreTrainDis", r.all_dis_are_train_dis, {}, Better::lower, true, false},
  };
  rows.insert(rows.end(), extra.begin(), extra.end());
  return rows;
}

namespace {

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> get_opt(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<double>();
}

}  // namespace

nlohmann::json report_to_json(const MetricReport& r) {
  json metrics = json::object();
  for (const auto& row : metric_rows(r)) {
    metrics[row.key] = opt(row.value);
    if (row.key == "mode_ncptk") metrics["mode_ncptk_share"] = opt(row.share);
  }
  json j;
  j["schema"] = kMetricsSchema;
  j["n_mcqs"] = r.n_mcqs;
  j["metrics"] = std::move(metrics);
  j["ncptk"] = {{"pairs", r.ncptk.pairs},
                {"unparseable", r.ncptk.unparseable},
                {"keys_unparseable", r.ncptk.keys_unparseable}};
  return nlohmann::json::parse(j.dump());
}

MetricReport report_from_json(const nlohmann::json& j) {
  MetricReport r;
  try {
    if (j.value("schema", std::string()) != kMetricsSchema)
      throw ParseError("not a metric report (schema " + j.value("schema", std::string("?")) + ")");
    const auto& m = j.at("metrics");
    r.n_mcqs = j.value("n_mcqs", std::size_t{0});
    r.dis_recall = get_opt(m, "dis_recall");
    r.any_dis_ref_match = get_opt(m, "any_dis_ref_match");
    r.any_dis_in_text = get_opt(m, "any_dis_in_text");
    r.key_in_dis = get_opt(m, "key_in_dis");
    r.any_same_dis = get_opt(m, "any_same_dis");
    r.all_same_dis = get_opt(m, "all_same_dis");
    r.any_dis_rep = get_opt(m, "any_dis_rep");
    r.any_dis_empty = get_opt(m, "any_dis_empty");
    r.any_dis_from_train_dis = get_opt(m, "any_dis_from_train_dis");
    r.ncptk.mean = get_opt(m, "mean_ncptk");
    r.ncptk.median = get_opt(m, "median_ncptk");
    r.ncptk.mode = get_opt(m, "mode_ncptk");
    r.ncptk.mode_share = get_opt(m, "mode_ncptk_share");
    r.any_dis_cap_diff = get_opt(m, "any_dis_cap_diff");
    r.any_dis_is_train_dis = get_opt(m, "any_dis_is_train_dis");
    r.any_dis_in_any_train_text = get_opt(m, "any_dis_in_any_train_text");
    r.any_dis_in_train_text_not_own = get_opt(m, "any_dis_in_train_text_not_own");
    r.all_dis_in_text = get_opt(m, "all_dis_in_text");
    r.all_dis_in_train_text = get_opt(m, "all_dis_in_train_text");
    r.all_dis_are_train_dis = get_opt(m, "all_dis_are_train_dis");
    if (auto it = j.find("ncptk"); it != j.end()) {
      r.ncptk.pairs = it->value("pairs", std::size_t{0});
      r.ncptk.unparseable = it->value("unparseable", std::size_t{0});
      r.ncptk.keys_unparseable = it->value("keys_unparseable", std::size_t{0});
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed metric report: ") + e.what());
  }
  return r;
}

std::string format_report(const MetricReport& r) {
  const auto rows = metric_rows(r);
  std::size_t width = 0;
  for (const auto& row : rows) width = std::max(width, row.label.size() + 4);
  std::ostringstream out;
  out << std::fixed;
  bool extra_started = false;
  for (const auto& row : rows) {
    if (!row.main && !extra_started) {
      out << "-- supplementary\n";
      extra_started = true;
    }
    out << std::left << std::setw(static_cast<int>(width)) << (row.label + (row.better == Better::higher ? " +" : " -"));
    if (!row.value) {
      out << "NA";
    } else if (row.percent) {
      out << std::setprecision(2) << *row.value << '%';
    } else {
      out << std::setprecision(2) << round2(*row.value);
      if (row.share) out << " (" << std::setprecision(2) << *row.share << "%)";
    }
    out << '\n';
  }
  out << "MCQs " << r.n_mcqs << ", kernel pairs " << r.ncptk.pairs << ", unparseable distractors "
      << r.ncptk.unparseable << ", unparseable keys " << r.ncptk.keys_unparseable << '\n';
  return out.str();
}

}  // namespace dgen
