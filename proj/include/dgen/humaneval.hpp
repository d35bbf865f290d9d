#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dgen/rng.hpp"

namespace dgen::humaneval {

// Minimal RFC 4180 reader: quoted fields, doubled quotes, CRLF. The first
// row must equal `header`; rows are returned without it.
std::vector<std::vector<std::string>> read_csv(std::istream& in, const std::vector<std::string>& header,
                                               std::string_view source = "<csv>");

inline constexpr std::size_t kOptions = 4;  // key, d1, d2, d3

// Subjects x MCQs, cell = chosen option (0 key, 1..3 distractor slot).
class ResponseMatrix {
 public:
  ResponseMatrix(std::vector<std::string> subjects, std::vector<std::string> mcqs,
                 std::vector<std::vector<int>> cells);

  const std::vector<std::string>& subjects() const { return subjects_; }
  const std::vector<std::string>& mcqs() const { return mcqs_; }
  int at(std::size_t subject, std::size_t mcq) const { return cells_[subject][mcq]; }
  std::size_t mcq_index(std::string_view id) const;

 private:
  std::vector<std::string> subjects_;
  std::vector<std::string> mcqs_;
  std::vector<std::vector<int>> cells_;
};

// CSV `subject_id,mcq_id,choice`, choice in {key,d1,d2,d3}. Every subject
// must answer every MCQ exactly once.
ResponseMatrix read_responses(std::istream& in, std::string_view source = "<responses>");

// -p ln p - (1-p) ln (1-p), with 0 ln 0 = 0.
double binary_entropy(double p);

struct EntropyRow {
  std::string mcq_id;
  std::size_t n = 0;
  double p_key = 0.0;
  double p_distractors = 0.0;
  double entropy = 0.0;  // nats
  std::array<std::size_t, kOptions> choices{};
};

EntropyRow question_entropy(const ResponseMatrix& rm, std::string_view mcq_id);
std::vector<EntropyRow> entropy_report(const ResponseMatrix& rm);

struct LfDisRow {
  std::string mcq_id;
  std::array<double, kOptions - 1> share{};  // per distractor slot
  std::array<bool, kOptions - 1> flagged{};
};

struct LfDisSummary {
  std::vector<LfDisRow> rows;
  std::size_t lose_any = 0;   // MCQs with >= 1 flagged distractor
  std::size_t lose_all = 0;
  std::size_t keep_all = 0;
};

// A distractor is low-frequency iff its choice share is strictly below
// `threshold`.
LfDisSummary lf_dis(const ResponseMatrix& rm, double threshold = 0.05);

// Number of key choices per subject, in subject order.
std::vector<double> correct_counts(const ResponseMatrix& rm);

struct TTestResult {
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;
  double se = 0.0;
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;  // two-tailed
  double r = 0.0;  // sqrt(t^2 / (t^2 + df))
};

// Two-tailed tail probability of Student's t.
double t_two_tailed_p(double t, double df);

TTestResult one_sample_ttest(const std::vector<double>& values, double mu0);
// Same test from summary statistics.
TTestResult one_sample_ttest(std::size_t n, double mean, double se, double mu0);

struct Quartiles {
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
};

// Linear interpolation between order statistics at h = (n-1)p.
double quantile(std::vector<double> values, double p);
Quartiles quartiles(const std::vector<double>& values);

// Flags values outside [Q1 - m IQR, Q3 + m IQR]. Needs n >= 4.
std::vector<bool> iqr_outliers(const std::vector<double>& values, double multiplier);

enum class Verdict { accept, reject };

struct Judgment {
  Verdict verdict = Verdict::accept;
  std::string reason_category;
  std::string reason_text;
};

// Teachers x (MCQ, slot) verdicts. Every teacher judges the same slots of
// every MCQ.
class JudgmentMatrix {
 public:
  using Key = std::pair<std::string, int>;  // (MCQ id, slot)

  JudgmentMatrix(std::vector<std::string> teachers, std::map<Key, std::vector<Judgment>> items);

  const std::vector<std::string>& teachers() const { return teachers_; }
  const std::map<Key, std::vector<Judgment>>& items() const { return items_; }
  std::vector<std::string> mcqs() const;
  // Slots judged for one MCQ, ascending.
  std::vector<int> slots(std::string_view mcq_id) const;
  const std::vector<Judgment>& at(std::string_view mcq_id, int slot) const;

 private:
  std::vector<std::string> teachers_;
  std::map<Key, std::vector<Judgment>> items_;  // per item, one judgment per teacher
};

// CSV `teacher_id,mcq_id,slot,verdict,reason_category,reason_text`; slot 1..3,
// verdict accept|reject.
JudgmentMatrix read_judgments(std::istream& in, std::string_view source = "<judgments>");

struct GammaCounts {
  std::uint64_t concordant = 0;
  std::uint64_t discordant = 0;
};

// Concordant/discordant item pairs summed over MCQs and rater pairs, with
// accepted ranked above rejected; tied pairs are skipped.
GammaCounts gamma_counts(const JudgmentMatrix& jm);
// (C - D) / (C + D); throws when C + D = 0.
double gamma_n(const JudgmentMatrix& jm);

struct BucketSample {
  std::vector<std::vector<std::string>> buckets;  // all ids per bucket, by entropy
  std::vector<std::vector<std::string>> sampled;  // per bucket, in bucket order
  std::vector<std::string> ids() const;
};

// Sort by entropy (then id), cut into contiguous size-balanced buckets with
// the remainder going to the first buckets, then draw per_bucket ids from
// each without replacement.
BucketSample entropy_buckets(std::vector<std::pair<std::string, double>> entropies, std::size_t n_buckets = 5,
                             std::size_t per_bucket = 9, std::uint64_t seed = kDefaultSeed);

struct CrossTable {
  // items: [lf flagged][majority accepted]
  std::array<std::array<std::size_t, 2>, 2> counts{};
  // MCQs with >= 1 LF-DIS: (LF-DIS accepted by majority, rejected by majority) -> MCQ count
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> per_mcq;
};

struct AcceptanceSummary {
  std::size_t n_mcqs = 0;
  std::size_t n_teachers = 0;
  double mean_accepted = 0.0;  // per MCQ per teacher
  std::size_t all_accept_any = 0;
  std::size_t majority_accept_any = 0;
  std::size_t all_accept_all = 0;
  std::size_t all_reject_all = 0;
  std::size_t majority_accept_all = 0;  // a majority of teachers accepted every distractor
  std::size_t majority_reject_all = 0;
  std::map<std::string, std::size_t> reasons;  // rejection category -> count
  std::optional<CrossTable> lf_cross;

  double pct(std::size_t k) const { return n_mcqs == 0 ? 0.0 : 100.0 * static_cast<double>(k) / static_cast<double>(n_mcqs); }
};

// Majority means strictly more than half of the teachers. The LF-DIS
// cross-table covers judged items whose MCQ appears in `lf`.
AcceptanceSummary acceptance_summary(const JudgmentMatrix& jm, const LfDisSummary* lf = nullptr);

}  // namespace dgen::humaneval
