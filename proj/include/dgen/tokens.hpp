#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dgen {

// Model tokens travel as strings; the sentinels below use BERT's spelling.
using Token = std::string;
using TokenSeq = std::vector<Token>;

inline const Token kCls = "[CLS]";
inline const Token kSep = "[SEP]";
inline const Token kMask = "[MASK]";

inline constexpr std::size_t kMaxSequence = 512;

class Tokenizer {
 public:
  virtual ~Tokenizer() = default;
  virtual TokenSeq tokenize(std::string_view text) const = 0;
  // Joins content tokens; sentinels are dropped.
  virtual std::string detokenize(std::span<const Token> tokens) const = 0;
};

// Whitespace tokenizer: one token per word, detokenized with single spaces.
class WhitespaceTokenizer final : public Tokenizer {
 public:
  TokenSeq tokenize(std::string_view text) const override;
  std::string detokenize(std::span<const Token> tokens) const override;
};

}  // namespace dgen
