#include "dgen/text.hpp"

#include <stdexcept>

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

namespace dgen::text {

namespace {

// Decodes one code point at byte index i, advancing i. Ill-formed bytes
// decode to U+FFFD and advance by one.
UChar32 next_cp(std::string_view s, std::size_t& i) {
  int32_t idx = static_cast<int32_t>(i);
  const auto len = static_cast<int32_t>(s.size());
  UChar32 c = 0;
  U8_NEXT(reinterpret_cast<const uint8_t*>(s.data()), idx, len, c);
  i = static_cast<std::size_t>(idx);
  return c < 0 ? 0xFFFD : c;
}

bool is_space(UChar32 c) { return u_isUWhiteSpace(c) != 0; }

const icu::Normalizer2& nfc() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* n = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || n == nullptr) throw std::runtime_error("ICU NFC normalizer unavailable");
  return *n;
}

}  // namespace

std::vector<std::string_view> split_words(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  std::size_t start = std::string_view::npos;
  while (i < s.size()) {
    const std::size_t at = i;
    const UChar32 c = next_cp(s, i);
    if (is_space(c)) {
      if (start != std::string_view::npos) {
        out.push_back(s.substr(start, at - start));
        start = std::string_view::npos;
      }
    } else if (start == std::string_view::npos) {
      start = at;
    }
  }
  if (start != std::string_view::npos) out.push_back(s.substr(start));
  return out;
}

std::size_t word_count(std::string_view s) { return split_words(s).size(); }

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  for (auto w : split_words(s)) {
    if (!out.empty()) out.push_back(' ');
    out.append(w);
  }
  return out;
}

std::string normalize_for_match(std::string_view s) {
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString u = icu::UnicodeString::fromUTF8(icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
  icu::UnicodeString n = nfc().normalize(u, status);
  if (U_FAILURE(status)) throw std::runtime_error("NFC normalization failed");
  n.foldCase(U_FOLD_CASE_DEFAULT);
  // folding can denormalize (e.g. U+0130); renormalize
  n = nfc().normalize(n, status);
  if (U_FAILURE(status)) throw std::runtime_error("NFC normalization failed");
  std::string utf8;
  n.toUTF8String(utf8);
  return collapse_whitespace(utf8);
}

std::size_t codepoint_count(std::string_view s) {
  std::size_t n = 0;
  std::size_t i = 0;
  while (i < s.size()) {
    next_cp(s, i);
    ++n;
  }
  return n;
}

std::optional<std::size_t> byte_offset(std::string_view s, std::size_t cp_offset) {
  std::size_t i = 0;
  for (std::size_t k = 0; k < cp_offset; ++k) {
    if (i >= s.size()) return std::nullopt;
    next_cp(s, i);
  }
  return i;
}

std::optional<std::string_view> codepoint_substr(std::string_view s, std::size_t cp_start,
                                                 std::size_t cp_len) {
  const auto b = byte_offset(s, cp_start);
  if (!b) return std::nullopt;
  const auto rest = s.substr(*b);
  const auto e = byte_offset(rest, cp_len);
  if (!e) return std::nullopt;
  return rest.substr(0, *e);
}

CaseClass leading_case(std::string_view s) {
  if (s.empty()) return CaseClass::uncased;
  std::size_t i = 0;
  const UChar32 c = next_cp(s, i);
  if (u_isupper(c) || u_istitle(c)) return CaseClass::upper;
  if (u_islower(c)) return CaseClass::lower;
  return CaseClass::uncased;
}

bool is_special_token(std::string_view tok) {
  return tok == "[CLS]" || tok == "[SEP]" || tok == "[MASK]" || tok == "[PAD]" || tok == "[UNK]";
}

std::string strip_special_tokens(std::string_view s) {
  std::string out;
  for (auto w : split_words(s)) {
    if (is_special_token(w)) continue;
    if (!out.empty()) out.push_back(' ');
    out.append(w);
  }
  return out;
}

bool valid_utf8(std::string_view s) {
  int32_t i = 0;
  const auto len = static_cast<int32_t>(s.size());
  while (i < len) {
    UChar32 c = 0;
    U8_NEXT(reinterpret_cast<const uint8_t*>(s.data()), i, len, c);
    if (c < 0) return false;
  }
  return true;
}

}  // namespace dgen::text
