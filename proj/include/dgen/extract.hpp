#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dgen/corpus.hpp"
#include "dgen/rng.hpp"
#include "dgen/tokens.hpp"

namespace dgen {

enum class Variant { l2r, upmlm };

std::string_view to_string(Variant v);
Variant parse_variant(std::string_view s);

inline constexpr std::size_t kContextTextLimit = 384;
inline constexpr std::size_t kMaxMaskings = 20;

struct ExtractionConfig {
  Variant variant = Variant::l2r;
  std::size_t max_maskings = kMaxMaskings;
  std::size_t context_limit = kContextTextLimit;
  std::uint64_t seed = kDefaultSeed;

  void validate() const;
};

struct MaskTarget {
  std::size_t position = 0;
  Token token;

  bool operator==(const MaskTarget&) const = default;
};

struct TrainingExample {
  std::string mcq_id;
  TokenSeq input;
  std::vector<MaskTarget> targets;

  bool operator==(const TrainingExample&) const = default;
};

// [CLS] + first `limit` text tokens + [SEP] + stem + [SEP] + key.
// Throws ValidationError on an empty stem or key.
TokenSeq build_context(std::span<const Token> text, std::span<const Token> stem, std::span<const Token> key,
                       std::size_t limit = kContextTextLimit);

// Context of one MCQ, tokenized.
TokenSeq mcq_context(const Mcq& mcq, const Corpus& corpus, const Tokenizer& tok, std::size_t limit);

// Teacher-forced left-to-right datapoints: one per distractor token plus one
// [SEP] target per distractor.
std::vector<TrainingExample> extract_l2r(const Mcq& mcq, const Corpus& corpus, const Tokenizer& tok,
                                         const ExtractionConfig& cfg);

// Probabilistic-masking datapoints: per distractor, min(len, max_maskings)
// draws of a ratio r ~ U(0,1), each token masked with probability r; draws
// that mask nothing are discarded.
std::vector<TrainingExample> extract_upmlm(const Mcq& mcq, const Corpus& corpus, const Tokenizer& tok,
                                           const ExtractionConfig& cfg, UniformSource& rng);

// Both variants over the corpus in corpus order; u-PMLM draws from a stream
// derived from (seed, MCQ id).
std::vector<TrainingExample> extract_corpus(const Corpus& corpus, const Tokenizer& tok, const ExtractionConfig& cfg);

// One JSON record per example after a header record carrying the schema and
// configuration.
void write_examples(std::ostream& out, const std::vector<TrainingExample>& examples, const ExtractionConfig& cfg);
std::vector<TrainingExample> read_examples(std::istream& in);

}  // namespace dgen
