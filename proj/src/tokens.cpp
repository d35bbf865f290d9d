#include "dgen/tokens.hpp"

#include "dgen/text.hpp"

namespace dgen {

TokenSeq WhitespaceTokenizer::tokenize(std::string_view text) const {
  TokenSeq out;
  for (auto w : text::split_words(text)) out.emplace_back(w);
  return out;
}

std::string WhitespaceTokenizer::detokenize(std::span<const Token> tokens) const {
  std::string out;
  for (const auto& t : tokens) {
    if (text::is_special_token(t)) continue;
    if (!out.empty()) out.push_back(' ');
    out += t;
  }
  return out;
}

}  // namespace dgen
