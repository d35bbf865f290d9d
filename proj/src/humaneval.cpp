#include "dgen/humaneval.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <set>

#include <boost/math/special_functions/beta.hpp>

#include "dgen/error.hpp"

namespace dgen::humaneval {

namespace {

// One record; false at end of input. Newlines inside quotes are kept.
bool next_record(std::istream& in, std::vector<std::string>& fields, std::size_t& line, std::string_view source) {
  fields.clear();
  std::string field;
  bool quoted = false;
  bool any = false;
  bool after_quote = false;
  char c = 0;
  while (in.get(c)) {
    any = true;
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field.push_back('"');
        } else {
          quoted = false;
          after_quote = true;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && field.empty() && !after_quote) {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      after_quote = false;
    } else if (c == '\n') {
      ++line;
      if (!field.empty() && field.back() == '\r') field.pop_back();
      fields.push_back(std::move(field));
      return true;
    } else if (after_quote && c != '\r') {
      throw ParseError(std::string(source) + ":" + std::to_string(line) + ": text after closing quote");
    } else if (c != '\r' || !after_quote) {
      field.push_back(c);
    }
  }
  if (quoted) throw ParseError(std::string(source) + ": unterminated quoted field");
  if (!any) return false;
  if (!field.empty() && field.back() == '\r') field.pop_back();
  fields.push_back(std::move(field));
  return true;
}

std::size_t index_of(const std::vector<std::string>& sorted, std::string_view id) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), id);
  if (it == sorted.end() || *it != id) throw ValidationError("unknown id '" + std::string(id) + "'");
  return static_cast<std::size_t>(it - sorted.begin());
}

}  // namespace

std::vector<std::vector<std::string>> read_csv(std::istream& in, const std::vector<std::string>& header,
                                               std::string_view source) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> rec;
  std::size_t line = 1;
  if (!next_record(in, rec, line, source)) throw ParseError(std::string(source) + ": empty file");
  if (!rec.empty() && rec[0].starts_with("\xEF\xBB\xBF")) rec[0].erase(0, 3);
  if (rec != header) {
    std::string want;
    for (const auto& h : header) want += (want.empty() ? "" : ",") + h;
    throw ParseError(std::string(source) + ": expected header " + want);
  }
  while (true) {
    const std::size_t at = line;
    if (!next_record(in, rec, line, source)) break;
    if (rec.size() == 1 && rec[0].empty()) continue;
    if (rec.size() != header.size())
      throw ParseError(std::string(source) + ":" + std::to_string(at) + ": expected " + std::to_string(header.size()) +
                       " fields, got " + std::to_string(rec.size()));
    rows.push_back(rec);
  }
  return rows;
}

ResponseMatrix::ResponseMatrix(std::vector<std::string> subjects, std::vector<std::string> mcqs,
                               std::vector<std::vector<int>> cells)
    : subjects_(std::move(subjects)), mcqs_(std::move(mcqs)), cells_(std::move(cells)) {
  if (!std::is_sorted(subjects_.begin(), subjects_.end()) || !std::is_sorted(mcqs_.begin(), mcqs_.end()))
    throw ValidationError("response matrix ids must be sorted");
  if (cells_.size() != subjects_.size()) throw ValidationError("response matrix row count mismatch");
  for (std::size_t s = 0; s < cells_.size(); ++s) {
    if (cells_[s].size() != mcqs_.size()) throw ValidationError("response matrix column count mismatch");
    for (std::size_t q = 0; q < mcqs_.size(); ++q)
      if (cells_[s][q] < 0 || cells_[s][q] >= static_cast<int>(kOptions))
        throw ValidationError("subject " + subjects_[s] + ", MCQ " + mcqs_[q] + ": missing or invalid choice");
  }
}

std::size_t ResponseMatrix::mcq_index(std::string_view id) const { return index_of(mcqs_, id); }

ResponseMatrix read_responses(std::istream& in, std::string_view source) {
  const auto rows = read_csv(in, {"subject_id", "mcq_id", "choice"}, source);
  std::set<std::string> subj, mcq;
  for (const auto& r : rows) {
    subj.insert(r[0]);
    mcq.insert(r[1]);
  }
  std::vector<std::string> subjects(subj.begin(), subj.end());
  std::vector<std::string> mcqs(mcq.begin(), mcq.end());
  std::vector<std::vector<int>> cells(subjects.size(), std::vector<int>(mcqs.size(), -1));
  for (const auto& r : rows) {
    int choice = -1;
    if (r[2] == "key") choice = 0;
    else if (r[2] == "d1") choice = 1;
    else if (r[2] == "d2") choice = 2;
    else if (r[2] == "d3") choice = 3;
    else throw ParseError(std::string(source) + ": bad choice '" + r[2] + "' (subject " + r[0] + ", MCQ " + r[1] + ")");
    int& cell = cells[index_of(subjects, r[0])][index_of(mcqs, r[1])];
    if (cell != -1) throw ValidationError("subject " + r[0] + " answered MCQ " + r[1] + " twice");
    cell = choice;
  }
  return ResponseMatrix(std::move(subjects), std::move(mcqs), std::move(cells));
}

double binary_entropy(double p) {
  auto term = [](double x) { return x <= 0.0 ? 0.0 : -x * std::log(x); };
  return term(p) + term(1.0 - p);
}

EntropyRow question_entropy(const ResponseMatrix& rm, std::string_view mcq_id) {
  const std::size_t q = rm.mcq_index(mcq_id);
  EntropyRow row;
  row.mcq_id = std::string(mcq_id);
  row.n = rm.subjects().size();
  if (row.n == 0) throw ValidationError("MCQ " + row.mcq_id + " has no responses");
  for (std::size_t s = 0; s < row.n; ++s) ++row.choices[static_cast<std::size_t>(rm.at(s, q))];
  row.p_key = static_cast<double>(row.choices[0]) / static_cast<double>(row.n);
  row.p_distractors = static_cast<double>(row.n - row.choices[0]) / static_cast<double>(row.n);
  row.entropy = binary_entropy(row.p_key);
  return row;
}

std::vector<EntropyRow> entropy_report(const ResponseMatrix& rm) {
  std::vector<EntropyRow> out;
  for (const auto& id : rm.mcqs()) out.push_back(question_entropy(rm, id));
  return out;
}

LfDisSummary lf_dis(const ResponseMatrix& rm, double threshold) {
  LfDisSummary sum;
  for (const auto& row : entropy_report(rm)) {
    LfDisRow lr;
    lr.mcq_id = row.mcq_id;
    std::size_t flagged = 0;
    for (std::size_t d = 0; d < kOptions - 1; ++d) {
      lr.share[d] = static_cast<double>(row.choices[d + 1]) / static_cast<double>(row.n);
      lr.flagged[d] = lr.share[d] < threshold;
      flagged += lr.flagged[d];
    }
    if (flagged > 0) ++sum.lose_any;
    if (flagged == kOptions - 1) ++sum.lose_all;
    if (flagged == 0) ++sum.keep_all;
    sum.rows.push_back(lr);
  }
  return sum;
}

std::vector<double> correct_counts(const ResponseMatrix& rm) {
  std::vector<double> out(rm.subjects().size(), 0.0);
  for (std::size_t s = 0; s < out.size(); ++s)
    for (std::size_t q = 0; q < rm.mcqs().size(); ++q)
      if (rm.at(s, q) == 0) out[s] += 1.0;
  return out;
}

double t_two_tailed_p(double t, double df) {
  if (!(df > 0.0)) throw ValidationError("degrees of freedom must be positive");
  if (t == 0.0) return 1.0;
  // P(|T| > |t|) = I_{df/(df+t^2)}(df/2, 1/2)
  return boost::math::ibeta(df / 2.0, 0.5, df / (df + t * t));
}

namespace {

TTestResult finish(std::size_t n, double mean, double sd, double se, double mu0) {
  TTestResult r;
  r.n = n;
  r.mean = mean;
  r.sd = sd;
  r.se = se;
  r.df = static_cast<double>(n - 1);
  r.t = (mean - mu0) / se;
  r.p = t_two_tailed_p(r.t, r.df);
  r.r = std::sqrt(r.t * r.t / (r.t * r.t + r.df));
  return r;
}

}  // namespace

TTestResult one_sample_ttest(const std::vector<double>& values, double mu0) {
  const std::size_t n = values.size();
  if (n < 2) throw ValidationError("t-test needs at least 2 values");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (!(sd > 0.0)) throw ValidationError("t-test undefined for zero variance");
  return finish(n, mean, sd, sd / std::sqrt(static_cast<double>(n)), mu0);
}

TTestResult one_sample_ttest(std::size_t n, double mean, double se, double mu0) {
  if (n < 2) throw ValidationError("t-test needs at least 2 values");
  if (!(se > 0.0)) throw ValidationError("t-test undefined for zero standard error");
  return finish(n, mean, se * std::sqrt(static_cast<double>(n)), se, mu0);
}

double quantile(std::vector<double> values, double p) {
  if (values.empty()) throw ValidationError("quantile of empty data");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

Quartiles quartiles(const std::vector<double>& values) {
  return {quantile(values, 0.25), quantile(values, 0.5), quantile(values, 0.75)};
}

std::vector<bool> iqr_outliers(const std::vector<double>& values, double multiplier) {
  if (values.size() < 4) throw ValidationError("IQR outlier check needs at least 4 values");
  const Quartiles q = quartiles(values);
  const double iqr = q.q3 - q.q1;
  const double lo = q.q1 - multiplier * iqr;
  const double hi = q.q3 + multiplier * iqr;
  std::vector<bool> out;
  out.reserve(values.size());
  for (double v : values) out.push_back(v < lo || v > hi);
  return out;
}

JudgmentMatrix::JudgmentMatrix(std::vector<std::string> teachers, std::map<Key, std::vector<Judgment>> items)
    : teachers_(std::move(teachers)), items_(std::move(items)) {
  for (const auto& [key, js] : items_)
    if (js.size() != teachers_.size())
      throw ValidationError("MCQ " + key.first + " slot " + std::to_string(key.second) + " not judged by every teacher");
}

std::vector<std::string> JudgmentMatrix::mcqs() const {
  std::vector<std::string> out;
  for (const auto& [key, _] : items_)
    if (out.empty() || out.back() != key.first) out.push_back(key.first);
  return out;
}

std::vector<int> JudgmentMatrix::slots(std::string_view mcq_id) const {
  std::vector<int> out;
  for (auto it = items_.lower_bound({std::string(mcq_id), 0}); it != items_.end() && it->first.first == mcq_id; ++it)
    out.push_back(it->first.second);
  return out;
}

const std::vector<Judgment>& JudgmentMatrix::at(std::string_view mcq_id, int slot) const {
  auto it = items_.find({std::string(mcq_id), slot});
  if (it == items_.end()) throw ValidationError("no judgments for MCQ " + std::string(mcq_id) + " slot " + std::to_string(slot));
  return it->second;
}

JudgmentMatrix read_judgments(std::istream& in, std::string_view source) {
  const auto rows =
      read_csv(in, {"teacher_id", "mcq_id", "slot", "verdict", "reason_category", "reason_text"}, source);
  std::set<std::string> t;
  for (const auto& r : rows) t.insert(r[0]);
  std::vector<std::string> teachers(t.begin(), t.end());
  std::map<JudgmentMatrix::Key, std::vector<std::optional<Judgment>>> cells;
  for (const auto& r : rows) {
    int slot = 0;
    if (r[2] == "1" || r[2] == "d1") slot = 1;
    else if (r[2] == "2" || r[2] == "d2") slot = 2;
    else if (r[2] == "3" || r[2] == "d3") slot = 3;
    else throw ParseError(std::string(source) + ": bad slot '" + r[2] + "' (teacher " + r[0] + ", MCQ " + r[1] + ")");
    Judgment j;
    if (r[3] == "accept") j.verdict = Verdict::accept;
    else if (r[3] == "reject") j.verdict = Verdict::reject;
    else throw ParseError(std::string(source) + ": bad verdict '" + r[3] + "' (teacher " + r[0] + ", MCQ " + r[1] + ")");
    j.reason_category = r[4];
    j.reason_text = r[5];
    auto& row = cells[{r[1], slot}];
    row.resize(teachers.size());
    auto& cell = row[index_of(teachers, r[0])];
    if (cell) throw ValidationError("teacher " + r[0] + " judged MCQ " + r[1] + " slot " + std::to_string(slot) + " twice");
    cell = std::move(j);
  }
  std::map<JudgmentMatrix::Key, std::vector<Judgment>> items;
  for (auto& [key, row] : cells) {
    std::vector<Judgment> js;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (!row[i])
        throw ValidationError("teacher " + teachers[i] + " did not judge MCQ " + key.first + " slot " +
                              std::to_string(key.second));
      js.push_back(std::move(*row[i]));
    }
    items.emplace(key, std::move(js));
  }
  return JudgmentMatrix(std::move(teachers), std::move(items));
}

GammaCounts gamma_counts(const JudgmentMatrix& jm) {
  GammaCounts g;
  const std::size_t nt = jm.teachers().size();
  for (const auto& mcq : jm.mcqs()) {
    const auto slots = jm.slots(mcq);
    for (std::size_t a = 0; a < nt; ++a) {
      for (std::size_t b = a + 1; b < nt; ++b) {
        // An item pair is ordered strictly by a rater only when one item is
        // accepted and the other rejected, so counting items by their
        // (rater a, rater b) verdicts is enough.
        std::uint64_t aa = 0, rr = 0, ar = 0, ra = 0;
        for (int s : slots) {
          const auto& js = jm.at(mcq, s);
          const bool x = js[a].verdict == Verdict::accept;
          const bool y = js[b].verdict == Verdict::accept;
          if (x && y) ++aa;
          else if (!x && !y) ++rr;
          else if (x) ++ar;
          else ++ra;
        }
        g.concordant += aa * rr;
        g.discordant += ar * ra;
      }
    }
  }
  return g;
}

double gamma_n(const JudgmentMatrix& jm) {
  if (jm.teachers().size() < 2) throw ValidationError("gamma needs at least 2 raters");
  const GammaCounts g = gamma_counts(jm);
  const std::uint64_t total = g.concordant + g.discordant;
  if (total == 0) throw ValidationError("agreement undefined: no concordant or discordant pairs");
  return (static_cast<double>(g.concordant) - static_cast<double>(g.discordant)) / static_cast<double>(total);
}

std::vector<std::string> BucketSample::ids() const {
  std::vector<std::string> out;
  for (const auto& b : sampled) out.insert(out.end(), b.begin(), b.end());
  return out;
}

BucketSample entropy_buckets(std::vector<std::pair<std::string, double>> entropies, std::size_t n_buckets,
                             std::size_t per_bucket, std::uint64_t seed) {
  if (n_buckets == 0) throw ValidationError("need at least one bucket");
  if (entropies.size() < n_buckets * per_bucket)
    throw ValidationError("need at least " + std::to_string(n_buckets * per_bucket) + " MCQs, got " +
                          std::to_string(entropies.size()));
  std::stable_sort(entropies.begin(), entropies.end(), [](const auto& x, const auto& y) {
    return x.second != y.second ? x.second < y.second : x.first < y.first;
  });
  for (std::size_t i = 1; i < entropies.size(); ++i)
    if (entropies[i].first == entropies[i - 1].first) throw ValidationError("duplicate MCQ id " + entropies[i].first);
  BucketSample out;
  const std::size_t base = entropies.size() / n_buckets;
  const std::size_t extra = entropies.size() % n_buckets;
  Rng rng(seed);
  std::size_t pos = 0;
  for (std::size_t b = 0; b < n_buckets; ++b) {
    const std::size_t size = base + (b < extra ? 1 : 0);
    std::vector<std::string> bucket;
    for (std::size_t i = 0; i < size; ++i) bucket.push_back(entropies[pos + i].first);
    pos += size;
    // partial Fisher-Yates over indices, then restore bucket order
    std::vector<std::size_t> idx(size);
    for (std::size_t i = 0; i < size; ++i) idx[i] = i;
    for (std::size_t i = 0; i < per_bucket; ++i) {
      const auto j = i + static_cast<std::size_t>(rng.below(size - i));
      std::swap(idx[i], idx[j]);
    }
    idx.resize(per_bucket);
    std::sort(idx.begin(), idx.end());
    std::vector<std::string> picked;
    for (std::size_t i : idx) picked.push_back(bucket[i]);
    out.buckets.push_back(std::move(bucket));
    out.sampled.push_back(std::move(picked));
  }
  return out;
}

AcceptanceSummary acceptance_summary(const JudgmentMatrix& jm, const LfDisSummary* lf) {
  AcceptanceSummary s;
  const std::size_t nt = jm.teachers().size();
  const auto mcqs = jm.mcqs();
  s.n_mcqs = mcqs.size();
  s.n_teachers = nt;
  const auto majority = [nt](std::size_t k) { return 2 * k > nt; };

  std::map<std::string, const LfDisRow*> lf_rows;
  if (lf != nullptr) {
    s.lf_cross = CrossTable{};
    for (const auto& r : lf->rows) lf_rows.emplace(r.mcq_id, &r);
  }

  std::size_t accepted_total = 0;
  for (const auto& mcq : mcqs) {
    const auto slots = jm.slots(mcq);
    std::vector<std::size_t> per_teacher(nt, 0);
    std::size_t lf_acc = 0, lf_rej = 0;
    const LfDisRow* lf_row = nullptr;
    if (s.lf_cross)
      if (auto it = lf_rows.find(mcq); it != lf_rows.end()) lf_row = it->second;
    for (int slot : slots) {
      const auto& js = jm.at(mcq, slot);
      std::size_t acc = 0;
      for (std::size_t t = 0; t < nt; ++t) {
        if (js[t].verdict == Verdict::accept) {
          ++acc;
          ++per_teacher[t];
        } else {
          ++s.reasons[js[t].reason_category.empty() ? "(none)" : js[t].reason_category];
        }
      }
      if (lf_row != nullptr && slot >= 1 && slot <= static_cast<int>(kOptions - 1)) {
        const bool flagged = lf_row->flagged[static_cast<std::size_t>(slot - 1)];
        ++s.lf_cross->counts[flagged][majority(acc)];
        if (flagged) ++(majority(acc) ? lf_acc : lf_rej);
      }
    }
    if (lf_acc + lf_rej > 0) ++s.lf_cross->per_mcq[{lf_acc, lf_rej}];
    std::size_t any = 0, all = 0, none = 0;
    for (std::size_t t = 0; t < nt; ++t) {
      accepted_total += per_teacher[t];
      any += per_teacher[t] > 0;
      all += per_teacher[t] == slots.size();
      none += per_teacher[t] == 0;
    }
    s.all_accept_any += any == nt;
    s.majority_accept_any += majority(any);
    s.all_accept_all += all == nt;
    s.all_reject_all += none == nt;
    s.majority_accept_all += majority(all);
    s.majority_reject_all += majority(none);
  }
  if (s.n_mcqs > 0 && nt > 0)
    s.mean_accepted = static_cast<double>(accepted_total) / static_cast<double>(s.n_mcqs * nt);
  return s;
}

}  // namespace dgen::humaneval
