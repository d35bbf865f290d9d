#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "doctest.h"
#include "dgen/error.hpp"
#include "dgen/metrics.hpp"
#include "dgen/rng.hpp"
#include "fixtures.hpp"

using namespace dgen;

namespace {

struct Loaded {
  Corpus test = load_corpus(fixture::data("corpus_test.jsonl"), Split::test);
  Corpus train = load_corpus(fixture::data("corpus_train.jsonl"), Split::train);
  ParseBank parses = ParseBank::load_dir(fixture::data("parses"));
};

GeneratedSet baseline_like() {
  GeneratedSet g;
  g.add("test-q1", {"i parken", "Katten", ""});
  g.add("test-q2", {"", "", ""});
  g.add("test-q3", {"Anna", "Lisa", ""});
  return g;
}

GeneratedSet all_slots(const Corpus& c, const std::vector<std::string>& v) {
  GeneratedSet g;
  for (const auto& m : c.mcqs()) g.add(m.id, v);
  return g;
}

}  // namespace

TEST_CASE("fixture suggestions give hand-counted values") {
  const Loaded f;
  const MetricReport r = evaluate(baseline_like(), {&f.test, &f.train, &f.parses, {}});
  CHECK(r.n_mcqs == 3);
  CHECK(*r.dis_recall == doctest::Approx(50.0));  // 3 of 6 references
  CHECK(*r.any_dis_ref_match == doctest::Approx(200.0 / 3));
  CHECK(*r.any_dis_in_text == doctest::Approx(200.0 / 3));
  CHECK(*r.key_in_dis == 0.0);
  CHECK(*r.any_same_dis == 0.0);
  CHECK(*r.all_same_dis == 0.0);
  CHECK(*r.any_dis_rep == 0.0);
  CHECK(*r.any_dis_empty == doctest::Approx(100.0));
  CHECK(*r.any_dis_from_train_dis == 0.0);  // "i parken" is a train distractor but also in its own text
  CHECK(*r.any_dis_is_train_dis == doctest::Approx(100.0 / 3));
  CHECK(*r.any_dis_cap_diff == doctest::Approx(100.0 / 3));  // "Katten" against "i skogen"
  CHECK(*r.all_dis_in_text == 0.0);
  CHECK(*r.all_dis_are_train_dis == 0.0);
  CHECK(r.ncptk.pairs == 4);
  CHECK(r.ncptk.unparseable == 5);
  CHECK(r.ncptk.keys_unparseable == 0);
}

TEST_CASE("kernel statistics match a direct recount") {
  const Loaded f;
  const GeneratedSet g = baseline_like();
  const MetricReport r = evaluate(g, {&f.test, nullptr, &f.parses, {}});
  std::vector<double> s;
  for (const auto& m : f.test.mcqs()) {
    const GrctNode key = to_grct(*f.parses.phrase(m.key.surface), false);
    for (const auto& d : *g.find(m.id))
      if (const DepTree* t = d.empty() ? nullptr : f.parses.phrase(d)) s.push_back(ncptk(key, to_grct(*t, false)));
  }
  REQUIRE(s.size() == 4);
  double sum = 0;
  for (double v : s) sum += v;
  CHECK(*r.ncptk.mean == doctest::Approx(sum / 4));
  CHECK(*r.ncptk.mean == doctest::Approx((3.0 + 3.0 / std::sqrt(30.0)) / 4));
  std::sort(s.begin(), s.end());
  CHECK(*r.ncptk.median == doctest::Approx((s[1] + s[2]) / 2));
  std::map<std::string, int> bins;
  char buf[16];
  for (double v : s) {
    std::snprintf(buf, sizeof buf, "%.2f", v);
    ++bins[buf];
  }
  CHECK(bins.at("1.00") == 3);
  CHECK(*r.ncptk.mode == doctest::Approx(1.0));
  CHECK(*r.ncptk.mode_share == doctest::Approx(75.0));
}

TEST_CASE("copying the references") {
  const Loaded f;
  GeneratedSet g;
  for (const auto& m : f.test.mcqs()) {
    std::vector<std::string> v;
    for (const auto& d : m.distractors) v.push_back(d.surface);
    v.resize(3);
    g.add(m.id, v);
  }
  const MetricReport r = evaluate(g, {&f.test, nullptr, nullptr, {}});
  CHECK(*r.dis_recall == doctest::Approx(100.0));
  CHECK(*r.any_dis_ref_match == doctest::Approx(100.0));
  CHECK(*r.any_dis_empty == doctest::Approx(100.0));
  CHECK(*r.key_in_dis == 0.0);
  CHECK(*r.any_same_dis == 0.0);
}

TEST_CASE("identical, repeated and key-matching slots") {
  const Loaded f;
  MetricReport r = evaluate(all_slots(f.test, {"x", "X ", "x"}), {&f.test, nullptr, nullptr, {}});
  CHECK(*r.any_same_dis == doctest::Approx(100.0));
  CHECK(*r.all_same_dis == doctest::Approx(100.0));
  CHECK(*r.any_dis_empty == 0.0);
  CHECK(*r.any_dis_in_text == 0.0);
  CHECK(*r.any_dis_cap_diff == doctest::Approx(100.0));  // both cases present in every MCQ

  r = evaluate(all_slots(f.test, {"", "", ""}), {&f.test, nullptr, nullptr, {}});
  CHECK(*r.any_same_dis == 0.0);
  CHECK(*r.all_same_dis == 0.0);
  CHECK(*r.any_dis_empty == doctest::Approx(100.0));

  r = evaluate(all_slots(f.test, {"den den", "[SEP]", "ERIK"}), {&f.test, nullptr, nullptr, {}});
  CHECK(*r.any_dis_rep == doctest::Approx(100.0));
  CHECK(*r.any_dis_empty == doctest::Approx(100.0));  // a bare sentinel is empty
  CHECK(*r.key_in_dis == doctest::Approx(100.0 / 3));
}

TEST_CASE("train and parse based metrics are NA without their inputs") {
  const Loaded f;
  const MetricReport r = evaluate(baseline_like(), {&f.test, nullptr, nullptr, {}});
  CHECK(!r.any_dis_from_train_dis);
  CHECK(!r.any_dis_is_train_dis);
  CHECK(!r.all_dis_in_train_text);
  CHECK(!r.ncptk.mean);
  CHECK(!r.ncptk.mode);
  CHECK(r.ncptk.pairs == 0);
  CHECK(r.dis_recall.has_value());
  const std::string table = format_report(r);
  CHECK(table.find("NA") != std::string::npos);
  CHECK(table.find("MeanNCPTK") != std::string::npos);
}

TEST_CASE("values do not depend on slot or MCQ order") {
  const Loaded f;
  const GeneratedSet g = baseline_like();
  const MetricReport base = evaluate(g, {&f.test, &f.train, &f.parses, {}});
  Rng rng(3);
  for (int rep = 0; rep < 20; ++rep) {
    GeneratedSet p;
    for (const auto& [id, v] : g.entries()) {
      auto w = v;
      rng.shuffle(w);
      p.add(id, w);
    }
    auto mcqs = f.test.mcqs();
    rng.shuffle(mcqs);
    const Corpus shuffled(Split::test, f.test.texts(), mcqs);
    const MetricReport r = evaluate(p, {&shuffled, &f.train, &f.parses, {}});
    CHECK(report_to_json(r) == report_to_json(base));
  }
}

TEST_CASE("missing and unknown MCQ ids are errors") {
  const Loaded f;
  GeneratedSet g;
  g.add("test-q1", {"a", "b", "c"});
  g.add("test-q9", {"a", "b", "c"});
  try {
    evaluate(g, {&f.test, nullptr, nullptr, {}});
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    const std::string w = e.what();
    CHECK(w.find("test-q2") != std::string::npos);
    CHECK(w.find("test-q9") != std::string::npos);
  }
  CHECK_THROWS_AS(g.add("x", {"a", "b"}), ValidationError);
  CHECK_THROWS_AS(g.add("test-q1", {"a", "b", "c"}), ValidationError);
}

TEST_CASE("suggestion files and reports round-trip") {
  const Loaded f;
  GeneratedSet g = baseline_like();
  g.header["seed"] = 42;
  std::ostringstream out;
  write_generated(out, g);
  CHECK(out.str().rfind("{\"schema\":\"dgen.suggestions/1\",\"seed\":42}\n", 0) == 0);
  std::istringstream in(out.str());
  const GeneratedSet back = read_generated(in);
  CHECK(back.entries() == g.entries());
  CHECK(back.header.at("seed") == 42);

  const MetricReport r = evaluate(g, {&f.test, &f.train, &f.parses, {}});
  const auto j = report_to_json(r);
  CHECK(j.at("schema") == kMetricsSchema);
  CHECK(report_to_json(report_from_json(j)) == j);
  const auto rows = metric_rows(r);
  CHECK(std::count_if(rows.begin(), rows.end(), [](const MetricRow& m) { return m.main; }) == 12);
  CHECK(rows.size() == 19);
}
