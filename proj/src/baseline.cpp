#include "dgen/baseline.hpp"

#include <algorithm>

#include "dgen/error.hpp"
#include "dgen/grct.hpp"
#include "dgen/text.hpp"

namespace dgen {

namespace {

std::string without_spaces(std::string_view s) {
  std::string out;
  for (auto w : text::split_words(s)) out.append(w);
  return out;
}

bool sentence_contains(const DepTree& sentence, std::string_view surface) {
  const std::string needle = text::normalize_for_match(surface);
  if (needle.empty()) return false;
  const std::string hay = text::normalize_for_match(sentence.text ? *sentence.text : sentence.surface());
  if (hay.find(needle) != std::string::npos) return true;
  // tokenized surfaces separate punctuation; compare with spacing removed
  return without_spaces(hay).find(without_spaces(needle)) != std::string::npos;
}

}  // namespace

std::vector<int> key_sentences(const Mcq& mcq, std::span<const DepTree> sentences) {
  std::vector<int> hits;
  const bool spans_known =
      mcq.key.start && !sentences.empty() &&
      std::all_of(sentences.begin(), sentences.end(), [](const DepTree& t) { return t.span.has_value(); });
  if (spans_known) {
    const CharSpan key{*mcq.key.start, *mcq.key.start + text::codepoint_count(mcq.key.surface)};
    for (std::size_t i = 0; i < sentences.size(); ++i)
      if (sentences[i].span->overlaps(key)) hits.push_back(static_cast<int>(i));
    if (!hits.empty()) return hits;
  }
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    if (sentence_contains(sentences[i], mcq.key.surface)) {
      hits.push_back(static_cast<int>(i));
      break;
    }
  }
  return hits;
}

std::vector<DistractorSuggestion> generate_baseline(const Mcq& mcq, std::span<const DepTree> sentences,
                                                    const DepTree* key_tree, const BaselineOptions& opts) {
  if (key_tree == nullptr) throw Error("baseline: key of MCQ '" + mcq.id + "' has no usable parse");
  opts.params.validate();

  std::vector<DistractorSuggestion> out;
  const std::vector<int> excluded = key_sentences(mcq, sentences);
  const UdToken& key_root = key_tree->token(key_tree->root());
  const NormalizedKernel score(to_grct(*key_tree, false), opts.params);

  for (std::size_t s = 0; s < sentences.size(); ++s) {
    if (std::find(excluded.begin(), excluded.end(), static_cast<int>(s)) != excluded.end()) continue;
    for (const auto& sub : subtrees_matching(sentences[s], key_root.upos, key_root.feats, opts.feat_match)) {
      DistractorSuggestion d;
      d.surface = subtree_text(sub);
      d.score = score(to_grct(sub, false, opts.candidate_root_label));
      d.source_sentence = static_cast<int>(s);
      d.source_root = sub.root_index;
      out.push_back(std::move(d));
    }
  }
  // candidates were collected in (sentence, root) order, so a stable sort
  // keeps that as the tie-break
  std::stable_sort(out.begin(), out.end(),
                   [](const DistractorSuggestion& a, const DistractorSuggestion& b) { return a.score > b.score; });
  if (out.size() > opts.k) out.resize(opts.k);
  if (opts.pad)
    while (out.size() < opts.k) out.push_back({});
  return out;
}

std::vector<BaselineRecord> run_baseline(const Corpus& corpus, const ParseBank& parses, const BaselineOptions& opts) {
  std::vector<BaselineRecord> records;
  records.reserve(corpus.mcqs().size());
  for (const auto& mcq : corpus.mcqs()) {
    const auto& sentences = parses.sentences(mcq.text_id);
    records.push_back({mcq.id, generate_baseline(mcq, sentences, parses.phrase(mcq.key.surface), opts)});
  }
  std::sort(records.begin(), records.end(),
            [](const BaselineRecord& a, const BaselineRecord& b) { return a.mcq_id < b.mcq_id; });
  return records;
}

}  // namespace dgen
