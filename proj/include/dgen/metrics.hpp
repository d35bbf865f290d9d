#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "dgen/corpus.hpp"
#include "dgen/kernel.hpp"
#include "dgen/parse_bank.hpp"

namespace dgen {

// Generated distractors per MCQ id, exactly `kSlots` each (empty strings
// allowed).
class GeneratedSet {
 public:
  static constexpr std::size_t kSlots = 3;

  void add(std::string mcq_id, std::vector<std::string> distractors);
  const std::vector<std::string>* find(std::string_view mcq_id) const;
  const std::map<std::string, std::vector<std::string>, std::less<>>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  // Free-form header fields (seed, producer, variant ...) kept verbatim.
  nlohmann::ordered_json header = nlohmann::ordered_json::object();

 private:
  std::map<std::string, std::vector<std::string>, std::less<>> entries_;
};

// Line-delimited JSON: a {"schema":"dgen.suggestions/1",...} header, then
// {"mcq_id":..,"distractors":[..]} records in MCQ id order.
void write_generated(std::ostream& out, const GeneratedSet& set);
GeneratedSet read_generated(std::istream& in, std::string_view source = "<stream>");
GeneratedSet load_generated(const std::filesystem::path& path);

struct NcptkStats {
  std::size_t pairs = 0;         // (generated, key) pairs scored
  std::size_t unparseable = 0;   // generated distractors without a usable tree
  std::size_t keys_unparseable = 0;
  std::optional<double> mean;
  std::optional<double> median;
  std::optional<double> mode;        // most frequent value after rounding to 2 decimals
  std::optional<double> mode_share;  // percent of pairs in the mode bin
};

// Percentages are MCQ% in [0, 100] unless noted; nullopt is reported as NA.
struct MetricReport {
  std::size_t n_mcqs = 0;

  std::optional<double> dis_recall;  // % of reference distractors recalled
  std::optional<double> any_dis_ref_match;
  std::optional<double> any_dis_in_text;
  std::optional<double> key_in_dis;
  std::optional<double> any_same_dis;
  std::optional<double> all_same_dis;
  std::optional<double> any_dis_rep;
  std::optional<double> any_dis_empty;
  std::optional<double> any_dis_from_train_dis;
  NcptkStats ncptk;

  std::optional<double> any_dis_cap_diff;               // 11
  std::optional<double> any_dis_is_train_dis;           // 12
  std::optional<double> any_dis_in_any_train_text;      // 13
  std::optional<double> any_dis_in_train_text_not_own;  // 14
  std::optional<double> all_dis_in_text;                // 15
  std::optional<double> all_dis_in_train_text;          // 16
  std::optional<double> all_dis_are_train_dis;          // 17
};

enum class Better { higher, lower };

struct MetricRow {
  std::string key;    // JSON key
  std::string label;  // display name
  std::optional<double> value;
  std::optional<double> share;  // mode rows only
  Better better = Better::higher;
  bool percent = true;
  bool main = true;  // part of the model-selection set
};

// Main metrics M1..M12 followed by the supplementary metrics 11..17.
std::vector<MetricRow> metric_rows(const MetricReport& r);

struct EvalInputs {
  const Corpus* corpus = nullptr;
  const Corpus* train = nullptr;        // NA for train-based metrics when absent
  const ParseBank* parses = nullptr;    // NA for kernel statistics when absent
  KernelParams params;
};

// Throws ValidationError listing MCQ ids that are missing from (or unknown
// to) the generated set.
MetricReport evaluate(const GeneratedSet& generated, const EvalInputs& in);

inline constexpr std::string_view kMetricsSchema = "dgen.metrics/1";

nlohmann::json report_to_json(const MetricReport& r);
MetricReport report_from_json(const nlohmann::json& j);

// Aligned two-column table.
std::string format_report(const MetricReport& r);

}  // namespace dgen
