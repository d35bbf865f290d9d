#include "doctest.h"
#include "dgen/error.hpp"
#include "dgen/model_select.hpp"

using namespace dgen;

namespace {

// M1..M11 values then the mode share (mode value 1.0).
MetricReport report(const std::array<double, 12>& v) {
  MetricReport r;
  r.n_mcqs = 126;
  r.dis_recall = v[0];
  r.any_dis_ref_match = v[1];
  r.any_dis_in_text = v[2];
  r.key_in_dis = v[3];
  r.any_same_dis = v[4];
  r.all_same_dis = v[5];
  r.any_dis_rep = v[6];
  r.any_dis_empty = v[7];
  r.any_dis_from_train_dis = v[8];
  r.ncptk.mean = v[9];
  r.ncptk.median = v[10];
  r.ncptk.mode = 1.0;
  r.ncptk.mode_share = v[11];
  return r;
}

// Development-set values of the six candidate checkpoints.
std::vector<NamedReport> dev_table() {
  return {
      {"l2r i-10000", report({9.77, 18.25, 64.29, 0.79, 34.13, 3.17, 0.00, 0.00, 5.56, 0.33, 0.18, 13.3})},
      {"l2r i-14000", report({14.29, 26.19, 69.84, 1.59, 27.78, 1.59, 0.00, 0.00, 5.56, 0.38, 0.19, 18.8})},
      {"l2r i-18000", report({12.41, 21.43, 73.81, 3.17, 19.84, 0.79, 0.00, 0.00, 6.35, 0.39, 0.21, 17.6})},
      {"upmlm i-10000", report({17.67, 30.95, 68.25, 2.38, 9.52, 1.59, 0.00, 0.00, 5.56, 0.41, 0.27, 18.1})},
      {"upmlm i-14000", report({21.43, 37.30, 72.22, 5.56, 10.32, 0.79, 1.59, 0.00, 2.38, 0.41, 0.26, 20.3})},
      {"upmlm i-16000", report({18.80, 31.75, 73.81, 5.56, 11.90, 0.79, 1.59, 0.00, 2.38, 0.41, 0.27, 19.6})},
  };
}

}  // namespace

TEST_CASE("checkpoint table: the u-PMLM i-14000 model wins most metrics") {
  const Selection s = model_select(dev_table());
  CHECK(s.rows.size() == 12);
  CHECK(s.wins == std::vector<std::size_t>{3, 2, 4, 5, 7, 6});
  CHECK(s.rank == std::vector<std::size_t>{5, 6, 4, 3, 1, 2});
  CHECK(s.rows[2].winners == std::vector<std::size_t>{2, 5});        // 73.81 tie
  CHECK(s.rows[5].winners == std::vector<std::size_t>{2, 4, 5});     // 0.79 tie, lower is better
  CHECK(s.rows[11].winners == std::vector<std::size_t>{4});          // mode share breaks the 1.0 tie
}

TEST_CASE("head to head of the two best checkpoints") {
  const auto all = dev_table();
  const Selection s = model_select({all[2], all[4]});
  CHECK(s.wins == std::vector<std::size_t>{5, 9});
  CHECK(s.rank == std::vector<std::size_t>{2, 1});
  const auto j = selection_to_json(s);
  CHECK(j.at("schema") == "dgen.model_select/1");
  CHECK(format_selection(s).find("*") != std::string::npos);
}

TEST_CASE("identical reports tie everywhere") {
  const auto all = dev_table();
  const Selection s = model_select({all[0], {"copy", all[0].report}, {"again", all[0].report}});
  CHECK(s.wins == std::vector<std::size_t>{12, 12, 12});
  CHECK(s.rank == std::vector<std::size_t>{1, 1, 1});
}

TEST_CASE("a dominating report wins every row") {
  MetricReport best = report({50, 50, 90, 0, 0, 0, 0, 0, 0, 0.9, 0.9, 50});
  MetricReport worse = report({10, 10, 50, 5, 5, 5, 5, 5, 5, 0.1, 0.1, 10});
  const Selection s = model_select({{"a", worse}, {"b", best}});
  CHECK(s.wins == std::vector<std::size_t>{0, 12});
}

TEST_CASE("differences below the reported precision are ties; NA rows are skipped") {
  MetricReport a = report({10, 10, 50, 5, 5, 5, 5, 5, 5, 0.1, 0.1, 10});
  MetricReport b = a;
  b.dis_recall = 10.004;
  b.any_dis_from_train_dis.reset();
  const Selection s = model_select({{"a", a}, {"b", b}});
  CHECK(s.rows[0].winners == std::vector<std::size_t>{0, 1});
  CHECK(s.rows[8].winners == std::vector<std::size_t>{0});
  CHECK(s.wins == std::vector<std::size_t>{12, 11});
  CHECK_THROWS_AS(model_select({{"a", a}}), ValidationError);
}
