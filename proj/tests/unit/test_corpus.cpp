#include <cmath>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "dgen/corpus.hpp"
#include "dgen/error.hpp"
#include "fixtures.hpp"

using namespace dgen;

namespace {

Corpus parse(const std::string& jsonl) {
  std::istringstream in(jsonl);
  return read_corpus(in, Split::test, "mem");
}

const char* kText = R"({"kind":"text","id":"t1","body":"Hunden springer i skogen."})";

}  // namespace

TEST_CASE("fixture corpus loads") {
  const Corpus c = load_corpus(fixture::data("corpus_test.jsonl"), Split::test);
  CHECK(c.texts().size() == 2);
  REQUIRE(c.mcqs().size() == 3);
  const Mcq* q1 = c.find_mcq("test-q1");
  REQUIRE(q1 != nullptr);
  CHECK(q1->key.surface == "i skogen");
  CHECK(q1->key.start == std::optional<std::size_t>(16));
  CHECK(q1->distractors.size() == 2);
  CHECK_FALSE(q1->distractors[1].start.has_value());
  CHECK(c.text_of(*q1).id == "test-t1");
  CHECK(c.find_mcq("nope") == nullptr);
}

TEST_CASE("write then read gives the same corpus") {
  const Corpus c = load_corpus(fixture::data("corpus_test.jsonl"), Split::test);
  std::ostringstream out;
  write_corpus(out, c);
  std::istringstream in(out.str());
  CHECK(read_corpus(in, Split::test) == c);
  std::istringstream in2(out.str());
  std::ostringstream again;
  write_corpus(again, read_corpus(in2, Split::test));
  CHECK(again.str() == out.str());
}

TEST_CASE("offsets must point at the surface") {
  const std::string bad = std::string(kText) + "\n" +
      R"({"kind":"mcq","id":"q7","text_id":"t1","stem":"Var?","choices":[{"surface":"i skogen","start":3,"kind":"key"}]})";
  try {
    parse(bad);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("q7") != std::string::npos);
  }
  const std::string good = std::string(kText) + "\n" +
      R"({"kind":"mcq","id":"q7","text_id":"t1","stem":"Var?","choices":[{"surface":"i skogen","start":16,"kind":"key"}]})";
  CHECK(parse(good).mcqs().size() == 1);
}

TEST_CASE("structural errors are reported") {
  CHECK_THROWS_AS(parse("{not json"), ParseError);
  CHECK_THROWS_AS(parse(R"({"kind":"text","id":"t1"})"), ParseError);
  CHECK_THROWS_AS(parse(std::string(kText) + "\n" + kText), ValidationError);
  // unknown text
  CHECK_THROWS_AS(parse(R"({"kind":"mcq","id":"q","text_id":"t9","stem":"s","choices":[{"surface":"a","kind":"key"}]})"),
                  ValidationError);
  // no key / two keys
  CHECK_THROWS(parse(std::string(kText) + "\n" +
                     R"({"kind":"mcq","id":"q","text_id":"t1","stem":"s","choices":[{"surface":"a","kind":"distractor"}]})"));
  CHECK_THROWS(parse(std::string(kText) + "\n" +
                     R"({"kind":"mcq","id":"q","text_id":"t1","stem":"s","choices":[{"surface":"a","kind":"key"},{"surface":"b","kind":"key"}]})"));
  try {
    parse(std::string(kText) + "\n{bad");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("mem:2") != std::string::npos);
  }
}

TEST_CASE("splits must not share texts") {
  const Corpus a = fixture::one_mcq("Text A.", "s", "A", {"B"});
  const Corpus same = fixture::one_mcq("Text B.", "s", "A", {"B"});
  const Corpus b(Split::train, same.texts(), same.mcqs());
  CHECK_THROWS_AS(check_disjoint({&a, &b}), ValidationError);
  const Corpus test = load_corpus(fixture::data("corpus_test.jsonl"), Split::test);
  const Corpus train = load_corpus(fixture::data("corpus_train.jsonl"), Split::train);
  CHECK_NOTHROW(check_disjoint({&test, &train}));
}

TEST_CASE("released layout import") {
  std::istringstream in(R"({"data":[
    {"context":"Anna köper bröd.","question":"Vad köper Anna?","choices":[
      {"text":"bröd","start":11,"end":15,"type":"Correct answer"},
      {"text":"fisk","start":null,"type":"Distractor"},
      {"text":"köper","start":2,"type":"Distractor"}]},
    {"context":"Anna köper bröd.","question":"Vem köper bröd?","choices":[
      {"text":"Anna","start":0,"type":"Correct answer"},
      {"text":"Erik","type":"Distractor"}]}]})");
  const ImportResult r = import_released(in, Split::dev);
  CHECK(r.corpus.texts().size() == 1);
  REQUIRE(r.corpus.mcqs().size() == 2);
  CHECK(r.dropped_offsets == 1);
  const Mcq& q = r.corpus.mcqs()[0];
  CHECK(q.id == "dev-q0");
  CHECK(q.text_id == "dev-t0");
  CHECK(q.key.start == std::optional<std::size_t>(11));
  CHECK_FALSE(q.distractors[1].start.has_value());
  CHECK(r.corpus.mcqs()[1].text_id == "dev-t0");
}

TEST_CASE("descriptive statistics by hand") {
  const Corpus c = load_corpus(fixture::data("corpus_test.jsonl"), Split::test);
  const StatsReport s = corpus_stats(c);
  CHECK(s.n_texts == 2);
  CHECK(s.n_mcqs == 3);
  // texts have 8 and 9 words
  CHECK(s.text_length.mean == doctest::Approx(8.5));
  CHECK(s.text_length.sd == doctest::Approx(std::sqrt(0.5)));
  // keys 2, 1, 1 words
  CHECK(s.key_length.mean == doctest::Approx(4.0 / 3.0));
  CHECK(s.key_length.sd == doctest::Approx(std::sqrt(1.0 / 3.0)));
  // distractors 2, 2, 1, 1, 1, 1
  CHECK(s.distractor_length.mean == doctest::Approx(8.0 / 6.0));
  CHECK(s.distractor_count.mean == doctest::Approx(2.0));
  CHECK(s.distractor_count.sd == doctest::Approx(0.0));
  CHECK(s.key_distractor_diff.mean == doctest::Approx(0.0));
  const StatsReport p = corpus_stats(c, SdKind::population);
  CHECK(p.text_length.sd == doctest::Approx(0.5));
  CHECK_THROWS_AS(corpus_stats(Corpus()), ValidationError);
}

TEST_CASE("mean and sd match the textbook formulas") {
  const MeanSd m = mean_sd({2, 4, 4, 4, 5, 5, 7, 9}, SdKind::population);
  CHECK(m.mean == doctest::Approx(5.0));
  CHECK(m.sd == doctest::Approx(2.0));
  CHECK(m.min == 2);
  CHECK(m.max == 9);
  CHECK(mean_sd({2, 4, 4, 4, 5, 5, 7, 9}, SdKind::sample).sd == doctest::Approx(std::sqrt(32.0 / 7.0)));
}
