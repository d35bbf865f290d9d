#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dgen/corpus.hpp"
#include "dgen/extract.hpp"
#include "dgen/predictor.hpp"
#include "dgen/tokens.hpp"

namespace dgen {

enum class OrderMode { sf, lf, rnd };

std::string_view to_string(OrderMode m);
OrderMode parse_order_mode(std::string_view s);

inline constexpr std::size_t kMaxDistractorTokens = 20;
inline constexpr std::size_t kDistractorsPerMcq = 3;

struct GenConfig {
  Variant variant = Variant::upmlm;
  std::size_t max_len = kMaxDistractorTokens;
  std::size_t n_distractors = kDistractorsPerMcq;
  std::size_t top_k = 1;

  void validate() const;
};

enum class StopReason { sep, length, planned };

std::string_view to_string(StopReason r);

// One committed token: where, what, and the probability it was chosen with.
struct FillStep {
  std::size_t position = 0;
  Token token;
  double p = 0.0;
};

struct GeneratedDistractor {
  TokenSeq tokens;
  StopReason stop = StopReason::planned;
  std::vector<FillStep> steps;
};

// Reference distractor lengths (up to n-1 of them) plus the key length; with
// fewer references the remaining slots take key-1, key, key+1 in turn,
// clamped to >= 1.
std::vector<std::size_t> plan_lengths(const Mcq& mcq, const Tokenizer& tok, std::size_t n = kDistractorsPerMcq);

// SF ascending, LF descending (both stable), RND a seeded shuffle.
std::vector<std::size_t> order_lengths(std::vector<std::size_t> lengths, OrderMode mode, std::uint64_t seed);

// Left-to-right: append [MASK], commit the top candidate, repeat until
// [SEP] or max_len tokens. Earlier distractors stay in the context.
std::vector<GeneratedDistractor> generate_l2r(const TokenSeq& ctx, Predictor& predictor, const GenConfig& cfg);

// Arbitrary order: for each planned length L place L masks, then L times
// commit the top candidate of the most confident masked position (ties go
// to the leftmost). The controller closes each distractor with [SEP].
std::vector<GeneratedDistractor> generate_upmlm(const TokenSeq& ctx, Predictor& predictor,
                                                std::span<const std::size_t> lengths, const GenConfig& cfg);

struct GenerationRecord {
  std::string mcq_id;
  std::vector<std::string> distractors;
  std::vector<GeneratedDistractor> raw;
};

struct GenerationRun {
  GenConfig config;
  OrderMode order = OrderMode::sf;
  std::uint64_t seed = kDefaultSeed;
  std::size_t context_limit = kContextTextLimit;
};

// Generates for every MCQ; records sorted by MCQ id. RND ordering uses a
// stream derived from (seed, MCQ id).
std::vector<GenerationRecord> run_generation(const Corpus& corpus, Predictor& predictor, const Tokenizer& tok,
                                             const GenerationRun& run);

}  // namespace dgen
