#include "dgen/corpus.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include <nlohmann/json.hpp>

#include "dgen/error.hpp"
#include "dgen/text.hpp"

namespace dgen {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string_view to_string(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::dev: return "dev";
    case Split::test: return "test";
  }
  return "train";
}

Split parse_split(std::string_view s) {
  if (s == "train" || s == "training") return Split::train;
  if (s == "dev" || s == "development") return Split::dev;
  if (s == "test") return Split::test;
  throw ValidationError("unknown split tag '" + std::string(s) + "'");
}

Corpus::Corpus(Split split, std::vector<TextDoc> texts, std::vector<Mcq> mcqs)
    : split_(split), texts_(std::move(texts)), mcqs_(std::move(mcqs)) {
  index_and_validate();
}

void Corpus::index_and_validate() {
  for (std::size_t i = 0; i < texts_.size(); ++i) {
    const auto& t = texts_[i];
    if (t.body.empty()) throw ValidationError("text '" + t.id + "' has an empty body");
    if (!text_index_.emplace(t.id, i).second) throw ValidationError("duplicate text id '" + t.id + "'");
  }
  for (std::size_t i = 0; i < mcqs_.size(); ++i) {
    const auto& m = mcqs_[i];
    if (!mcq_index_.emplace(m.id, i).second) throw ValidationError("duplicate MCQ id '" + m.id + "'");
    auto it = text_index_.find(m.text_id);
    if (it == text_index_.end())
      throw ValidationError("MCQ '" + m.id + "' references unknown text '" + m.text_id + "'");
    const std::string& body = texts_[it->second].body;

    auto check_span = [&](const AnswerSpan& s, SpanKind expected) {
      if (s.kind != expected) throw ValidationError("MCQ '" + m.id + "' has a choice with the wrong kind");
      if (s.surface.empty()) throw ValidationError("MCQ '" + m.id + "' has an empty choice surface");
      if (!s.start) return;
      const auto sub = text::codepoint_substr(body, *s.start, text::codepoint_count(s.surface));
      if (!sub || *sub != s.surface)
        throw ValidationError("MCQ '" + m.id + "': choice '" + s.surface + "' does not match the text at offset " +
                              std::to_string(*s.start));
    };
    check_span(m.key, SpanKind::key);
    for (const auto& d : m.distractors) check_span(d, SpanKind::distractor);
  }
}

const TextDoc& Corpus::text(std::string_view id) const {
  auto it = text_index_.find(id);
  if (it == text_index_.end()) throw ValidationError("unknown text id '" + std::string(id) + "'");
  return texts_[it->second];
}

const Mcq* Corpus::find_mcq(std::string_view id) const {
  auto it = mcq_index_.find(id);
  return it == mcq_index_.end() ? nullptr : &mcqs_[it->second];
}

namespace {

std::string record_context(std::string_view source, std::size_t line) {
  return std::string(source) + ":" + std::to_string(line);
}

const json& require(const json& obj, const char* field, std::string_view ctx) {
  auto it = obj.find(field);
  if (it == obj.end()) throw ParseError(std::string(ctx) + ": missing field '" + field + "'");
  return *it;
}

std::string require_string(const json& obj, const char* field, std::string_view ctx) {
  const json& v = require(obj, field, ctx);
  if (!v.is_string()) throw ParseError(std::string(ctx) + ": field '" + field + "' must be a string");
  return v.get<std::string>();
}

AnswerSpan parse_choice(const json& c, std::string_view ctx) {
  if (!c.is_object()) throw ParseError(std::string(ctx) + ": choice must be an object");
  AnswerSpan span;
  span.surface = require_string(c, "surface", ctx);
  const std::string kind = require_string(c, "kind", ctx);
  if (kind == "key") {
    span.kind = SpanKind::key;
  } else if (kind == "distractor") {
    span.kind = SpanKind::distractor;
  } else {
    throw ParseError(std::string(ctx) + ": unknown choice kind '" + kind + "'");
  }
  if (auto it = c.find("start"); it != c.end() && !it->is_null()) {
    if (!it->is_number_unsigned()) throw ParseError(std::string(ctx) + ": 'start' must be a non-negative integer");
    span.start = it->get<std::size_t>();
  }
  return span;
}

}  // namespace

Corpus read_corpus(std::istream& in, Split split, std::string_view source) {
  std::vector<TextDoc> texts;
  std::vector<Mcq> mcqs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string ctx = record_context(source, lineno);
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(ctx + ": invalid JSON (" + e.what() + ")");
    }
    if (!rec.is_object()) throw ParseError(ctx + ": record must be a JSON object");
    const std::string kind = require_string(rec, "kind", ctx);
    if (kind == "text") {
      texts.push_back({require_string(rec, "id", ctx), require_string(rec, "body", ctx)});
    } else if (kind == "mcq") {
      Mcq m;
      m.id = require_string(rec, "id", ctx);
      m.text_id = require_string(rec, "text_id", ctx);
      m.stem = require_string(rec, "stem", ctx);
      const json& choices = require(rec, "choices", ctx);
      if (!choices.is_array()) throw ParseError(ctx + ": 'choices' must be an array");
      bool have_key = false;
      for (const auto& c : choices) {
        AnswerSpan span = parse_choice(c, ctx);
        if (span.kind == SpanKind::key) {
          if (have_key) throw ValidationError("MCQ '" + m.id + "' has more than one key");
          m.key = std::move(span);
          have_key = true;
        } else {
          m.distractors.push_back(std::move(span));
        }
      }
      if (!have_key) throw ValidationError("MCQ '" + m.id + "' has no key");
      mcqs.push_back(std::move(m));
    } else {
      throw ParseError(ctx + ": unknown record kind '" + kind + "'");
    }
  }
  return Corpus(split, std::move(texts), std::move(mcqs));
}

Corpus load_corpus(const std::filesystem::path& path, Split split) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open corpus file " + path.string());
  return read_corpus(in, split, path.string());
}

namespace {

ordered_json choice_json(const AnswerSpan& s) {
  ordered_json c;
  c["surface"] = s.surface;
  c["start"] = s.start ? ordered_json(*s.start) : ordered_json(nullptr);
  c["kind"] = s.kind == SpanKind::key ? "key" : "distractor";
  return c;
}

}  // namespace

void write_corpus(std::ostream& out, const Corpus& corpus) {
  for (const auto& t : corpus.texts()) {
    ordered_json rec;
    rec["kind"] = "text";
    rec["id"] = t.id;
    rec["body"] = t.body;
    out << rec.dump() << '\n';
  }
  for (const auto& m : corpus.mcqs()) {
    ordered_json rec;
    rec["kind"] = "mcq";
    rec["id"] = m.id;
    rec["text_id"] = m.text_id;
    rec["stem"] = m.stem;
    ordered_json choices = ordered_json::array();
    choices.push_back(choice_json(m.key));
    for (const auto& d : m.distractors) choices.push_back(choice_json(d));
    rec["choices"] = std::move(choices);
    out << rec.dump() << '\n';
  }
}

void save_corpus(const std::filesystem::path& path, const Corpus& corpus) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write corpus file " + path.string());
  write_corpus(out, corpus);
}

void check_disjoint(const std::vector<const Corpus*>& splits) {
  std::map<std::string, Split> owner;
  for (const Corpus* c : splits) {
    for (const auto& t : c->texts()) {
      auto [it, inserted] = owner.emplace(t.id, c->split());
      if (!inserted && it->second != c->split())
        throw ValidationError("text '" + t.id + "' appears in both " + std::string(to_string(it->second)) +
                              " and " + std::string(to_string(c->split())));
    }
  }
}

ImportResult import_released(std::istream& in, Split split) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("released file: invalid JSON (") + e.what() + ")");
  }
  const json* records = &doc;
  if (doc.is_object()) {
    auto it = doc.find("data");
    if (it == doc.end()) throw ParseError("released file: expected a list or an object with 'data'");
    records = &*it;
  }
  if (!records->is_array()) throw ParseError("released file: 'data' must be a list");

  ImportResult result;
  std::vector<TextDoc> texts;
  std::vector<Mcq> mcqs;
  std::map<std::string, std::string> text_ids;
  const std::string prefix(to_string(split));

  std::size_t idx = 0;
  for (const auto& r : *records) {
    const std::string ctx = "released record " + std::to_string(idx);
    const std::string context = require_string(r, "context", ctx);
    auto [it, fresh] = text_ids.emplace(context, prefix + "-t" + std::to_string(texts.size()));
    if (fresh) texts.push_back({it->second, context});

    Mcq m;
    m.id = prefix + "-q" + std::to_string(idx);
    m.text_id = it->second;
    m.stem = require_string(r, "question", ctx);
    bool have_key = false;
    const json& choices = require(r, "choices", ctx);
    if (!choices.is_array()) throw ParseError(ctx + ": 'choices' must be a list");
    for (const auto& c : choices) {
      AnswerSpan s;
      s.surface = require_string(c, "text", ctx);
      const std::string type = require_string(c, "type", ctx);
      s.kind = type == "Correct answer" ? SpanKind::key : SpanKind::distractor;
      if (auto st = c.find("start"); st != c.end() && st->is_number_integer() && st->get<long long>() >= 0) {
        const auto start = st->get<std::size_t>();
        const auto sub = text::codepoint_substr(context, start, text::codepoint_count(s.surface));
        if (sub && *sub == s.surface) {
          s.start = start;
        } else {
          ++result.dropped_offsets;
        }
      }
      if (s.kind == SpanKind::key) {
        if (have_key) throw ValidationError("MCQ '" + m.id + "' has more than one key");
        m.key = std::move(s);
        have_key = true;
      } else {
        m.distractors.push_back(std::move(s));
      }
    }
    if (!have_key) throw ValidationError("MCQ '" + m.id + "' has no key");
    mcqs.push_back(std::move(m));
    ++idx;
  }
  result.corpus = Corpus(split, std::move(texts), std::move(mcqs));
  return result;
}

MeanSd mean_sd(const std::vector<double>& values, SdKind kind) {
  MeanSd r;
  r.n = values.size();
  if (values.empty()) return r;
  double sum = 0.0;
  r.min = values.front();
  r.max = values.front();
  for (double v : values) {
    sum += v;
    r.min = std::min(r.min, v);
    r.max = std::max(r.max, v);
  }
  r.mean = sum / static_cast<double>(r.n);
  double ss = 0.0;
  for (double v : values) ss += (v - r.mean) * (v - r.mean);
  const std::size_t denom = kind == SdKind::sample ? r.n - 1 : r.n;
  r.sd = denom == 0 ? 0.0 : std::sqrt(ss / static_cast<double>(denom));
  return r;
}

StatsReport corpus_stats(const Corpus& corpus, SdKind kind) {
  if (corpus.mcqs().empty() || corpus.texts().empty()) throw ValidationError("corpus_stats: empty corpus");
  StatsReport r;
  r.n_texts = corpus.texts().size();
  r.n_mcqs = corpus.mcqs().size();

  std::vector<double> text_len;
  for (const auto& t : corpus.texts()) text_len.push_back(static_cast<double>(text::word_count(t.body)));

  std::vector<double> n_dis, key_len, dis_len, diff;
  for (const auto& m : corpus.mcqs()) {
    n_dis.push_back(static_cast<double>(m.distractors.size()));
    const auto kl = static_cast<double>(text::word_count(m.key.surface));
    key_len.push_back(kl);
    for (const auto& d : m.distractors) {
      const auto dl = static_cast<double>(text::word_count(d.surface));
      dis_len.push_back(dl);
      diff.push_back(std::abs(kl - dl));
    }
  }
  r.distractor_count = mean_sd(n_dis, kind);
  r.text_length = mean_sd(text_len, kind);
  r.key_length = mean_sd(key_len, kind);
  r.distractor_length = mean_sd(dis_len, kind);
  r.key_distractor_diff = mean_sd(diff, kind);
  return r;
}

}  // namespace dgen
