#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "dgen/metrics.hpp"

namespace dgen {

struct NamedReport {
  std::string name;
  MetricReport report;
};

struct SelectionRow {
  std::string key;
  std::string label;
  Better better = Better::higher;
  std::vector<std::optional<double>> values;  // per model
  std::vector<std::optional<double>> shares;  // mode row only
  std::vector<std::size_t> winners;           // every model tied for best
};

struct Selection {
  std::vector<std::string> names;
  std::vector<SelectionRow> rows;
  std::vector<std::size_t> wins;  // per model
  std::vector<std::size_t> rank;  // competition ranking by wins, 1 = best
};

// Counts, over the main metrics, how often each model holds the best value
// in the metric's better direction. Values are compared at the reported
// precision (2 decimals); ties credit every tied model; mode rows compare
// (value, share). Models with NA on a metric take no part in that row.
Selection model_select(const std::vector<NamedReport>& reports);

nlohmann::json selection_to_json(const Selection& s);
std::string format_selection(const Selection& s);

}  // namespace dgen
