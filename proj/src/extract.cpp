#include "dgen/extract.hpp"

#include <istream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "dgen/error.hpp"

namespace dgen {

using ordered_json = nlohmann::ordered_json;

std::string_view to_string(Variant v) { return v == Variant::l2r ? "l2r" : "upmlm"; }

Variant parse_variant(std::string_view s) {
  if (s == "l2r") return Variant::l2r;
  if (s == "upmlm" || s == "u-pmlm") return Variant::upmlm;
  throw ValidationError("unknown variant '" + std::string(s) + "'");
}

void ExtractionConfig::validate() const {
  if (max_maskings < 1) throw ValidationError("max_maskings must be >= 1");
  if (context_limit < 1) throw ValidationError("context_limit must be >= 1");
}

TokenSeq build_context(std::span<const Token> text, std::span<const Token> stem, std::span<const Token> key,
                       std::size_t limit) {
  if (stem.empty()) throw ValidationError("build_context: empty stem");
  if (key.empty()) throw ValidationError("build_context: empty key");
  TokenSeq ctx;
  ctx.reserve(std::min(limit, text.size()) + stem.size() + key.size() + 3);
  ctx.push_back(kCls);
  ctx.insert(ctx.end(), text.begin(), text.begin() + static_cast<std::ptrdiff_t>(std::min(limit, text.size())));
  ctx.push_back(kSep);
  ctx.insert(ctx.end(), stem.begin(), stem.end());
  ctx.push_back(kSep);
  ctx.insert(ctx.end(), key.begin(), key.end());
  return ctx;
}

TokenSeq mcq_context(const Mcq& mcq, const Corpus& corpus, const Tokenizer& tok, std::size_t limit) {
  const TokenSeq text = tok.tokenize(corpus.text_of(mcq).body);
  const TokenSeq stem = tok.tokenize(mcq.stem);
  const TokenSeq key = tok.tokenize(mcq.key.surface);
  try {
    return build_context(text, stem, key, limit);
  } catch (const ValidationError& e) {
    throw ValidationError("MCQ '" + mcq.id + "': " + e.what());
  }
}

namespace {

std::vector<TokenSeq> tokenized_distractors(const Mcq& mcq, const Tokenizer& tok) {
  std::vector<TokenSeq> out;
  for (const auto& d : mcq.distractors) {
    out.push_back(tok.tokenize(d.surface));
    if (out.back().empty()) throw ValidationError("MCQ '" + mcq.id + "': distractor tokenizes to nothing");
  }
  return out;
}

void check_length(const Mcq& mcq, const TokenSeq& seq) {
  if (seq.size() > kMaxSequence)
    throw ValidationError("MCQ '" + mcq.id + "': sequence of " + std::to_string(seq.size()) +
                          " tokens exceeds the " + std::to_string(kMaxSequence) + "-token limit");
}

}  // namespace

std::vector<TrainingExample> extract_l2r(const Mcq& mcq, const Corpus& corpus, const Tokenizer& tok,
                                         const ExtractionConfig& cfg) {
  cfg.validate();
  TokenSeq prefix = mcq_context(mcq, corpus, tok, cfg.context_limit);
  prefix.push_back(kSep);
  std::vector<TrainingExample> out;
  for (const auto& dis : tokenized_distractors(mcq, tok)) {
    for (std::size_t i = 0; i <= dis.size(); ++i) {
      TrainingExample ex;
      ex.mcq_id = mcq.id;
      ex.input = prefix;
      ex.input.insert(ex.input.end(), dis.begin(), dis.begin() + static_cast<std::ptrdiff_t>(i));
      ex.input.push_back(kMask);
      check_length(mcq, ex.input);
      ex.targets.push_back({ex.input.size() - 1, i < dis.size() ? dis[i] : kSep});
      out.push_back(std::move(ex));
    }
    prefix.insert(prefix.end(), dis.begin(), dis.end());
    prefix.push_back(kSep);
  }
  return out;
}

std::vector<TrainingExample> extract_upmlm(const Mcq& mcq, const Corpus& corpus, const Tokenizer& tok,
                                           const ExtractionConfig& cfg, UniformSource& rng) {
  cfg.validate();
  TokenSeq prefix = mcq_context(mcq, corpus, tok, cfg.context_limit);
  prefix.push_back(kSep);
  std::vector<TrainingExample> out;
  for (const auto& dis : tokenized_distractors(mcq, tok)) {
    const std::size_t draws = std::min(dis.size(), cfg.max_maskings);
    for (std::size_t d = 0; d < draws; ++d) {
      const double r = rng.next_uniform();
      TrainingExample ex;
      ex.mcq_id = mcq.id;
      ex.input = prefix;
      for (const auto& t : dis) {
        // u < r holds for every u in [0, 1) when r == 1
        if (rng.next_uniform() < r) {
          ex.targets.push_back({ex.input.size(), t});
          ex.input.push_back(kMask);
        } else {
          ex.input.push_back(t);
        }
      }
      if (ex.targets.empty()) continue;
      check_length(mcq, ex.input);
      out.push_back(std::move(ex));
    }
    prefix.insert(prefix.end(), dis.begin(), dis.end());
    prefix.push_back(kSep);
  }
  return out;
}

std::vector<TrainingExample> extract_corpus(const Corpus& corpus, const Tokenizer& tok, const ExtractionConfig& cfg) {
  std::vector<TrainingExample> all;
  for (const auto& mcq : corpus.mcqs()) {
    std::vector<TrainingExample> part;
    if (cfg.variant == Variant::l2r) {
      part = extract_l2r(mcq, corpus, tok, cfg);
    } else {
      Rng rng(derive_seed(cfg.seed, mcq.id));
      part = extract_upmlm(mcq, corpus, tok, cfg, rng);
    }
    all.insert(all.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  return all;
}

void write_examples(std::ostream& out, const std::vector<TrainingExample>& examples, const ExtractionConfig& cfg) {
  ordered_json header;
  header["schema"] = "dgen.training_examples/1";
  header["variant"] = to_string(cfg.variant);
  header["seed"] = cfg.seed;
  header["max_maskings"] = cfg.max_maskings;
  header["context_limit"] = cfg.context_limit;
  header["count"] = examples.size();
  out << header.dump() << '\n';
  for (const auto& ex : examples) {
    ordered_json rec;
    rec["mcq_id"] = ex.mcq_id;
    rec["input"] = ex.input;
    ordered_json positions = ordered_json::array();
    ordered_json targets = ordered_json::array();
    for (const auto& t : ex.targets) {
      positions.push_back(t.position);
      targets.push_back(t.token);
    }
    rec["mask_positions"] = std::move(positions);
    rec["targets"] = std::move(targets);
    out << rec.dump() << '\n';
  }
}

std::vector<TrainingExample> read_examples(std::istream& in) {
  std::vector<TrainingExample> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    ordered_json rec;
    try {
      rec = ordered_json::parse(line);
    } catch (const ordered_json::parse_error& e) {
      throw ParseError("examples line " + std::to_string(lineno) + ": " + e.what());
    }
    if (rec.contains("schema")) continue;
    try {
      TrainingExample ex;
      ex.mcq_id = rec.at("mcq_id").get<std::string>();
      ex.input = rec.at("input").get<TokenSeq>();
      const auto positions = rec.at("mask_positions").get<std::vector<std::size_t>>();
      const auto targets = rec.at("targets").get<std::vector<Token>>();
      if (positions.size() != targets.size())
        throw ParseError("examples line " + std::to_string(lineno) + ": positions and targets differ in length");
      for (std::size_t i = 0; i < positions.size(); ++i) {
        if (positions[i] >= ex.input.size() || ex.input[positions[i]] != kMask)
          throw ParseError("examples line " + std::to_string(lineno) + ": target position is not a [MASK]");
        ex.targets.push_back({positions[i], targets[i]});
      }
      out.push_back(std::move(ex));
    } catch (const ordered_json::exception& e) {
      throw ParseError("examples line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace dgen
