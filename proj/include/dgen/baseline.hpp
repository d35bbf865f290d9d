#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "dgen/corpus.hpp"
#include "dgen/kernel.hpp"
#include "dgen/parse_bank.hpp"
#include "dgen/udtree.hpp"

namespace dgen {

struct DistractorSuggestion {
  std::string surface;  // empty for padding
  double score = 0.0;
  int source_sentence = -1;
  int source_root = 0;

  bool padded() const { return surface.empty(); }
};

struct BaselineOptions {
  std::size_t k = 3;
  KernelParams params;
  bool pad = true;
  FeatMatch feat_match = FeatMatch::exact;
  // GR label given to a candidate subtree's root before scoring; empty keeps
  // the subtree's own deprel.
  std::string candidate_root_label = "root";
};

// Index of the sentence holding the key: by code point span overlap when
// both the key offset and sentence spans are known, otherwise the first
// sentence whose surface contains the key. -1 when none is found.
std::vector<int> key_sentences(const Mcq& mcq, std::span<const DepTree> sentences);

// Tree-kernel baseline: candidate subtrees from the non-key sentences whose
// root agrees with the key root in UPOS and features, ranked by NCPTK of the
// lexical-free GRCTs. Ties keep the earlier sentence, then the leftmost root.
std::vector<DistractorSuggestion> generate_baseline(const Mcq& mcq, std::span<const DepTree> sentences,
                                                    const DepTree* key_tree, const BaselineOptions& opts = {});

struct BaselineRecord {
  std::string mcq_id;
  std::vector<DistractorSuggestion> suggestions;
};

// Runs the baseline over every MCQ; records sorted by MCQ id.
std::vector<BaselineRecord> run_baseline(const Corpus& corpus, const ParseBank& parses,
                                         const BaselineOptions& opts = {});

}  // namespace dgen
