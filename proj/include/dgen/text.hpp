#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// UTF-8 text helpers shared by the corpus, metric and generation code.
namespace dgen::text {

// Maximal runs of non-whitespace code points (Unicode White_Space).
std::vector<std::string_view> split_words(std::string_view s);
std::size_t word_count(std::string_view s);

// Trims and collapses whitespace runs to a single ASCII space.
std::string collapse_whitespace(std::string_view s);

// NFC, full case folding and whitespace collapse. Two strings "match" iff
// their normalized forms are equal.
std::string normalize_for_match(std::string_view s);

std::size_t codepoint_count(std::string_view s);

// Byte offset of the code point at `cp_offset`; nullopt when out of range.
// `cp_offset == codepoint_count(s)` maps to s.size().
std::optional<std::size_t> byte_offset(std::string_view s, std::size_t cp_offset);

// Substring of `s` addressed in code points.
std::optional<std::string_view> codepoint_substr(std::string_view s, std::size_t cp_start,
                                                 std::size_t cp_len);

enum class CaseClass { upper, lower, uncased };

// Case class of the first code point (raw, no normalization).
CaseClass leading_case(std::string_view s);

// Model sentinels that never count as generated content.
bool is_special_token(std::string_view tok);

// Drops special tokens and collapses whitespace.
std::string strip_special_tokens(std::string_view s);

bool valid_utf8(std::string_view s);

}  // namespace dgen::text
