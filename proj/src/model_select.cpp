#include "dgen/model_select.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dgen/error.hpp"

namespace dgen {

namespace {

long at_precision(double v) { return std::lround(v * 100.0); }

}  // namespace

Selection model_select(const std::vector<NamedReport>& reports) {
  if (reports.size() < 2) throw ValidationError("model selection needs at least 2 reports");
  Selection s;
  std::vector<std::vector<MetricRow>> all;
  for (const auto& r : reports) {
    s.names.push_back(r.name);
    all.push_back(metric_rows(r.report));
  }
  for (std::size_t m = 1; m < all.size(); ++m) {
    if (all[m].size() != all[0].size()) throw ValidationError("metric sets differ: " + s.names[0] + " vs " + s.names[m]);
    for (std::size_t i = 0; i < all[0].size(); ++i)
      if (all[m][i].key != all[0][i].key)
        throw ValidationError("metric sets differ: " + s.names[0] + " vs " + s.names[m]);
  }
  s.wins.assign(reports.size(), 0);
  for (std::size_t i = 0; i < all[0].size(); ++i) {
    if (!all[0][i].main) continue;
    SelectionRow row;
    row.key = all[0][i].key;
    row.label = all[0][i].label;
    row.better = all[0][i].better;
    std::optional<std::pair<long, long>> best;
    std::vector<std::optional<std::pair<long, long>>> keys;
    for (std::size_t m = 0; m < all.size(); ++m) {
      const MetricRow& mr = all[m][i];
      row.values.push_back(mr.value);
      row.shares.push_back(mr.share);
      if (!mr.value) {
        keys.emplace_back();
        continue;
      }
      std::pair<long, long> k{at_precision(*mr.value), mr.share ? at_precision(*mr.share) : 0};
      if (row.better == Better::lower) k = {-k.first, -k.second};
      keys.push_back(k);
      if (!best || k > *best) best = k;
    }
    if (best)
      for (std::size_t m = 0; m < keys.size(); ++m)
        if (keys[m] && *keys[m] == *best) {
          row.winners.push_back(m);
          ++s.wins[m];
        }
    s.rows.push_back(std::move(row));
  }
  s.rank.resize(reports.size());
  for (std::size_t m = 0; m < reports.size(); ++m)
    s.rank[m] = 1 + static_cast<std::size_t>(std::count_if(s.wins.begin(), s.wins.end(),
                                                           [&](std::size_t w) { return w > s.wins[m]; }));
  return s;
}

nlohmann::json selection_to_json(const Selection& s) {
  using json = nlohmann::ordered_json;
  json rows = json::array();
  for (const auto& r : s.rows) {
    json vals = json::array();
    for (std::size_t m = 0; m < r.values.size(); ++m) {
      json v = r.values[m] ? json(*r.values[m]) : json(nullptr);
      if (r.shares[m]) v = json{{"value", v}, {"share", *r.shares[m]}};
      vals.push_back(std::move(v));
    }
    rows.push_back({{"metric", r.key},
                    {"better", r.better == Better::higher ? "higher" : "lower"},
                    {"values", std::move(vals)},
                    {"winners", r.winners}});
  }
  json models = json::array();
  for (std::size_t m = 0; m < s.names.size(); ++m)
    models.push_back({{"name", s.names[m]}, {"wins", s.wins[m]}, {"rank", s.rank[m]}});
  json j = {{"schema", "dgen.model_select/1"}, {"models", std::move(models)}, {"rows", std::move(rows)}};
  return nlohmann::json::parse(j.dump());
}

std::string format_selection(const Selection& s) {
  std::size_t label_w = 6;
  for (const auto& r : s.rows) label_w = std::max(label_w, r.label.size() + 2);
  std::vector<std::size_t> col_w;
  for (const auto& n : s.names) col_w.push_back(std::max<std::size_t>(n.size(), 14) + 2);
  std::ostringstream out;
  out << std::left << std::setw(static_cast<int>(label_w + 2)) << "metric";
  for (std::size_t m = 0; m < s.names.size(); ++m) out << std::setw(static_cast<int>(col_w[m])) << s.names[m];
  out << '\n' << std::fixed;
  for (const auto& r : s.rows) {
    out << std::setw(static_cast<int>(label_w + 2)) << (r.label + (r.better == Better::higher ? " +" : " -"));
    for (std::size_t m = 0; m < s.names.size(); ++m) {
      std::ostringstream cell;
      cell << std::fixed << std::setprecision(2);
      if (!r.values[m]) cell << "NA";
      else cell << *r.values[m];
      if (r.shares[m]) cell << " (" << *r.shares[m] << "%)";
      if (std::find(r.winners.begin(), r.winners.end(), m) != r.winners.end()) cell << " *";
      out << std::setw(static_cast<int>(col_w[m])) << cell.str();
    }
    out << '\n';
  }
  out << std::setw(static_cast<int>(label_w + 2)) << "wins";
  for (std::size_t m = 0; m < s.names.size(); ++m) out << std::setw(static_cast<int>(col_w[m])) << s.wins[m];
  out << '\n' << std::setw(static_cast<int>(label_w + 2)) << "rank";
  for (std::size_t m = 0; m < s.names.size(); ++m) out << std::setw(static_cast<int>(col_w[m])) << s.rank[m];
  out << '\n';
  return out.str();
}

}  // namespace dgen
