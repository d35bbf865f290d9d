#include "dgen/generation.hpp"

#include <algorithm>

#include "dgen/error.hpp"
#include "dgen/rng.hpp"

namespace dgen {

std::string_view to_string(OrderMode m) {
  switch (m) {
    case OrderMode::sf: return "sf";
    case OrderMode::lf: return "lf";
    case OrderMode::rnd: return "rnd";
  }
  return "sf";
}

OrderMode parse_order_mode(std::string_view s) {
  if (s == "sf" || s == "SF") return OrderMode::sf;
  if (s == "lf" || s == "LF") return OrderMode::lf;
  if (s == "rnd" || s == "RND") return OrderMode::rnd;
  throw ValidationError("unknown order mode '" + std::string(s) + "'");
}

std::string_view to_string(StopReason r) {
  switch (r) {
    case StopReason::sep: return "sep";
    case StopReason::length: return "length";
    case StopReason::planned: return "planned";
  }
  return "planned";
}

void GenConfig::validate() const {
  if (max_len < 1) throw ValidationError("max_len must be >= 1");
  if (n_distractors < 1) throw ValidationError("n_distractors must be >= 1");
}

std::vector<std::size_t> plan_lengths(const Mcq& mcq, const Tokenizer& tok, std::size_t n) {
  const std::size_t key_len = std::max<std::size_t>(1, tok.tokenize(mcq.key.surface).size());
  std::vector<std::size_t> out;
  for (const auto& d : mcq.distractors) {
    if (out.size() + 1 >= n) break;
    out.push_back(std::max<std::size_t>(1, tok.tokenize(d.surface).size()));
  }
  if (out.empty()) {
    // no references: lengths around the key's
    for (std::size_t i = 0; i < n; ++i) {
      const long delta = static_cast<long>(i % 3) - 1;
      out.push_back(static_cast<std::size_t>(std::max<long>(1, static_cast<long>(key_len) + delta)));
    }
    return out;
  }
  out.push_back(key_len);
  for (std::size_t i = 0; out.size() < n; ++i) {
    const long delta = static_cast<long>(i % 3) - 1;
    out.push_back(static_cast<std::size_t>(std::max<long>(1, static_cast<long>(key_len) + delta)));
  }
  return out;
}

std::vector<std::size_t> order_lengths(std::vector<std::size_t> lengths, OrderMode mode, std::uint64_t seed) {
  switch (mode) {
    case OrderMode::sf: std::stable_sort(lengths.begin(), lengths.end()); break;
    case OrderMode::lf: std::stable_sort(lengths.begin(), lengths.end(), std::greater<>()); break;
    case OrderMode::rnd: {
      Rng rng(seed);
      rng.shuffle(lengths);
      break;
    }
  }
  return lengths;
}

namespace {

PredictorReply ask(Predictor& predictor, PredictorQuery q) {
  if (q.tokens.size() > kMaxSequence)
    throw ValidationError("generation context of " + std::to_string(q.tokens.size()) + " tokens exceeds " +
                          std::to_string(kMaxSequence));
  PredictorReply r = predictor.predict(q);
  r.validate(q);
  return r;
}

}  // namespace

std::vector<GeneratedDistractor> generate_l2r(const TokenSeq& ctx, Predictor& predictor, const GenConfig& cfg) {
  cfg.validate();
  TokenSeq base = ctx;
  base.push_back(kSep);
  std::vector<GeneratedDistractor> out;
  for (std::size_t d = 0; d < cfg.n_distractors; ++d) {
    GeneratedDistractor gen;
    gen.stop = StopReason::length;
    while (gen.tokens.size() < cfg.max_len) {
      PredictorQuery q;
      q.tokens = base;
      q.tokens.insert(q.tokens.end(), gen.tokens.begin(), gen.tokens.end());
      q.tokens.push_back(kMask);
      q.positions = {q.tokens.size() - 1};
      q.top_k = cfg.top_k;
      const std::size_t pos = q.positions.front();
      const PredictorReply r = ask(predictor, std::move(q));
      const Candidate& top = r.at(pos).candidates.front();
      gen.steps.push_back({pos, top.token, top.p});
      if (top.token == kSep) {
        gen.stop = StopReason::sep;
        break;
      }
      gen.tokens.push_back(top.token);
    }
    base.insert(base.end(), gen.tokens.begin(), gen.tokens.end());
    base.push_back(kSep);
    out.push_back(std::move(gen));
  }
  return out;
}

std::vector<GeneratedDistractor> generate_upmlm(const TokenSeq& ctx, Predictor& predictor,
                                                std::span<const std::size_t> lengths, const GenConfig& cfg) {
  cfg.validate();
  TokenSeq base = ctx;
  base.push_back(kSep);
  std::vector<GeneratedDistractor> out;
  for (const std::size_t len : lengths) {
    if (len == 0) throw ValidationError("planned distractor length must be positive");
    const std::size_t first = base.size();
    TokenSeq seq = base;
    seq.insert(seq.end(), len, kMask);
    GeneratedDistractor gen;
    gen.stop = StopReason::planned;
    for (std::size_t step = 0; step < len; ++step) {
      PredictorQuery q;
      q.tokens = seq;
      for (std::size_t i = first; i < first + len; ++i)
        if (seq[i] == kMask) q.positions.push_back(i);
      q.top_k = cfg.top_k;
      const PredictorReply r = ask(predictor, q);
      // most confident masked position; strict > keeps the leftmost on ties
      const PositionPrediction* best = nullptr;
      for (const auto& pp : r.predictions)
        if (best == nullptr || pp.candidates.front().p > best->candidates.front().p) best = &pp;
      const Candidate& top = best->candidates.front();
      seq[best->position] = top.token;
      gen.steps.push_back({best->position, top.token, top.p});
    }
    gen.tokens.assign(seq.begin() + static_cast<std::ptrdiff_t>(first), seq.end());
    base = std::move(seq);
    base.push_back(kSep);
    out.push_back(std::move(gen));
  }
  return out;
}

std::vector<GenerationRecord> run_generation(const Corpus& corpus, Predictor& predictor, const Tokenizer& tok,
                                             const GenerationRun& run) {
  run.config.validate();
  std::vector<GenerationRecord> records;
  for (const auto& mcq : corpus.mcqs()) {
    const TokenSeq ctx = mcq_context(mcq, corpus, tok, run.context_limit);
    GenerationRecord rec;
    rec.mcq_id = mcq.id;
    if (run.config.variant == Variant::l2r) {
      rec.raw = generate_l2r(ctx, predictor, run.config);
    } else {
      const auto lengths = order_lengths(plan_lengths(mcq, tok, run.config.n_distractors), run.order,
                                         derive_seed(run.seed, mcq.id));
      rec.raw = generate_upmlm(ctx, predictor, lengths, run.config);
    }
    for (const auto& g : rec.raw) rec.distractors.push_back(tok.detokenize(g.tokens));
    records.push_back(std::move(rec));
  }
  std::sort(records.begin(), records.end(),
            [](const GenerationRecord& a, const GenerationRecord& b) { return a.mcq_id < b.mcq_id; });
  return records;
}

}  // namespace dgen
