#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dgen {

enum class Split { train, dev, test };

std::string_view to_string(Split s);
Split parse_split(std::string_view s);

struct TextDoc {
  std::string id;
  std::string body;

  bool operator==(const TextDoc&) const = default;
};

enum class SpanKind { key, distractor };

// A key or distractor phrase. `start` is a code point offset into the base
// text; it is absent when annotators reformulated the phrase.
struct AnswerSpan {
  std::string surface;
  std::optional<std::size_t> start;
  SpanKind kind = SpanKind::distractor;

  bool operator==(const AnswerSpan&) const = default;
};

struct Mcq {
  std::string id;
  std::string text_id;
  std::string stem;
  AnswerSpan key;
  std::vector<AnswerSpan> distractors;

  bool operator==(const Mcq&) const = default;
};

class Corpus {
 public:
  Corpus() = default;
  Corpus(Split split, std::vector<TextDoc> texts, std::vector<Mcq> mcqs);

  Split split() const { return split_; }
  const std::vector<TextDoc>& texts() const { return texts_; }
  const std::vector<Mcq>& mcqs() const { return mcqs_; }

  // Throws ValidationError for unknown ids.
  const TextDoc& text(std::string_view id) const;
  const TextDoc& text_of(const Mcq& mcq) const { return text(mcq.text_id); }
  const Mcq* find_mcq(std::string_view id) const;

  bool operator==(const Corpus& o) const {
    return split_ == o.split_ && texts_ == o.texts_ && mcqs_ == o.mcqs_;
  }

 private:
  void index_and_validate();

  Split split_ = Split::train;
  std::vector<TextDoc> texts_;
  std::vector<Mcq> mcqs_;
  std::map<std::string, std::size_t, std::less<>> text_index_;
  std::map<std::string, std::size_t, std::less<>> mcq_index_;
};

// Line-delimited JSON corpus: {"kind":"text",...} and {"kind":"mcq",...}
// records. Errors name the line (ParseError) or the MCQ (ValidationError).
Corpus read_corpus(std::istream& in, Split split, std::string_view source = "<stream>");
Corpus load_corpus(const std::filesystem::path& path, Split split);

void write_corpus(std::ostream& out, const Corpus& corpus);
void save_corpus(const std::filesystem::path& path, const Corpus& corpus);

// Throws ValidationError when two splits share a text id.
void check_disjoint(const std::vector<const Corpus*>& splits);

// Adapter for the dataset's released JSON layout: a list (or {"data":[...]})
// of {"context", "question", "choices":[{"text","start","end","type"}]}
// records with type "Correct answer" or "Distractor". Identical contexts map
// to one TextDoc. Offsets that do not match the context are dropped and
// counted in `dropped_offsets`.
struct ImportResult {
  Corpus corpus;
  std::size_t dropped_offsets = 0;
};
ImportResult import_released(std::istream& in, Split split);

enum class SdKind { sample, population };

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::size_t n = 0;
};

MeanSd mean_sd(const std::vector<double>& values, SdKind kind);

// Lengths are whitespace word counts.
struct StatsReport {
  std::size_t n_texts = 0;
  std::size_t n_mcqs = 0;
  MeanSd distractor_count;
  MeanSd text_length;
  MeanSd key_length;
  MeanSd distractor_length;
  MeanSd key_distractor_diff;  // |Len(A) - Len(D)| over every (key, distractor) pair
};

StatsReport corpus_stats(const Corpus& corpus, SdKind kind = SdKind::sample);

}  // namespace dgen
