#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "dgen/corpus.hpp"

namespace fixture {

inline std::filesystem::path data(const std::string& name) { return std::filesystem::path(DGEN_TEST_DATA) / name; }

// Single-text corpus with one MCQ; offsets left unset.
inline dgen::Corpus one_mcq(const std::string& body, const std::string& stem, const std::string& key,
                            const std::vector<std::string>& distractors, const std::string& id = "q1") {
  dgen::Mcq m;
  m.id = id;
  m.text_id = "t1";
  m.stem = stem;
  m.key = {key, std::nullopt, dgen::SpanKind::key};
  for (const auto& d : distractors) m.distractors.push_back({d, std::nullopt, dgen::SpanKind::distractor});
  return dgen::Corpus(dgen::Split::test, {{"t1", body}}, {m});
}

}  // namespace fixture
