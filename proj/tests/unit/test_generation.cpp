#include <algorithm>
#include <functional>
#include <map>

#include "doctest.h"
#include "dgen/error.hpp"
#include "dgen/generation.hpp"
#include "fixtures.hpp"

using namespace dgen;

namespace {

// Replies computed from the query; every query is kept.
class FnPredictor final : public Predictor {
 public:
  using Fn = std::function<Candidate(const PredictorQuery&, std::size_t position)>;
  explicit FnPredictor(Fn fn) : fn_(std::move(fn)) {}

  PredictorReply predict(const PredictorQuery& q) override {
    q.validate();
    log.push_back(q);
    PredictorReply r;
    for (auto p : q.positions) r.predictions.push_back({p, {fn_(q, p)}});
    return r;
  }

  std::vector<PredictorQuery> log;

 private:
  Fn fn_;
};

const WhitespaceTokenizer tok;
const TokenSeq ctx{kCls, "a", "b", kSep, "q", kSep, "k"};

// Tokens generated since the last [SEP] before `position`.
std::size_t run_length(const TokenSeq& t, std::size_t position) {
  std::size_t n = 0;
  while (position > 0 && t[position - 1] != kSep) {
    --position;
    ++n;
  }
  return n;
}

}  // namespace

TEST_CASE("left-to-right stops on [SEP] after n+1 queries") {
  const std::size_t want[] = {2, 3, 1};
  std::size_t done = 0;
  FnPredictor pred([&](const PredictorQuery& q, std::size_t pos) -> Candidate {
    const std::size_t n = run_length(q.tokens, pos);
    if (n == want[done]) {
      ++done;
      return {kSep, 0.6};
    }
    return {"w" + std::to_string(done) + std::to_string(n), 0.8};
  });
  const auto out = generate_l2r(ctx, pred, {});
  REQUIRE(out.size() == 3);
  CHECK(out[0].tokens == TokenSeq{"w00", "w01"});
  CHECK(out[1].tokens == TokenSeq{"w10", "w11", "w12"});
  CHECK(out[2].tokens == TokenSeq{"w20"});
  for (const auto& g : out) CHECK(g.stop == StopReason::sep);
  CHECK(pred.log.size() == 3 + 4 + 2);

  // the first query of the second distractor carries the first one
  const TokenSeq& q = pred.log[3].tokens;
  TokenSeq expect = ctx;
  for (const Token& t : {kSep, Token("w00"), Token("w01"), kSep, kMask}) expect.push_back(t);
  CHECK(q == expect);
  for (const auto& lq : pred.log) {
    CHECK(lq.positions == std::vector<std::size_t>{lq.tokens.size() - 1});
    CHECK(std::count(lq.tokens.begin(), lq.tokens.end(), kMask) == 1);
  }
  CHECK(out[0].steps.back().token == kSep);
  CHECK(out[0].steps.back().p == doctest::Approx(0.6));
}

TEST_CASE("left-to-right stops at the length cap") {
  FnPredictor pred([](const PredictorQuery&, std::size_t) -> Candidate { return {"z", 0.9}; });
  const auto out = generate_l2r(ctx, pred, {});
  REQUIRE(out.size() == 3);
  for (const auto& g : out) {
    CHECK(g.tokens.size() == kMaxDistractorTokens);
    CHECK(g.stop == StopReason::length);
  }
  CHECK(pred.log.size() == 3 * kMaxDistractorTokens);
  // capped distractors are still closed with [SEP] in later contexts
  CHECK(pred.log[20].tokens[ctx.size() + 21] == kSep);
}

TEST_CASE("arbitrary order fills the most confident position first") {
  const std::size_t base = ctx.size() + 1;
  const std::map<std::size_t, double> conf{{0, 0.3}, {1, 0.9}, {2, 0.5}, {3, 0.7}};
  FnPredictor pred([&](const PredictorQuery&, std::size_t pos) -> Candidate {
    return {"t" + std::to_string(pos - base), conf.at(pos - base)};
  });
  const std::size_t lengths[] = {4};
  const auto out = generate_upmlm(ctx, pred, lengths, {});
  REQUIRE(out.size() == 1);
  CHECK(out[0].tokens == TokenSeq{"t0", "t1", "t2", "t3"});
  CHECK(out[0].stop == StopReason::planned);
  std::vector<std::size_t> order;
  for (const auto& s : out[0].steps) order.push_back(s.position - base);
  CHECK(order == std::vector<std::size_t>{1, 3, 2, 0});
  REQUIRE(pred.log.size() == 4);
  CHECK(pred.log[0].positions.size() == 4);
  CHECK(pred.log[1].positions == std::vector<std::size_t>{base, base + 2, base + 3});
  CHECK(pred.log[3].positions == std::vector<std::size_t>{base});
  CHECK(pred.log[3].tokens[base + 1] == "t1");
}

TEST_CASE("arbitrary order breaks ties to the left and chains distractors") {
  FnPredictor pred([](const PredictorQuery&, std::size_t pos) -> Candidate { return {"p" + std::to_string(pos), 0.5}; });
  const std::size_t lengths[] = {3, 2};
  const auto out = generate_upmlm(ctx, pred, lengths, {});
  const std::size_t base = ctx.size() + 1;
  std::vector<std::size_t> order;
  for (const auto& s : out[0].steps) order.push_back(s.position);
  CHECK(order == std::vector<std::size_t>{base, base + 1, base + 2});
  REQUIRE(pred.log.size() == 5);
  const TokenSeq& q = pred.log[3].tokens;
  CHECK(q.size() == base + 3 + 1 + 2);
  CHECK(q[base + 3] == kSep);
  CHECK(q[base + 4] == kMask);
  CHECK(out[1].tokens == TokenSeq{"p" + std::to_string(base + 4), "p" + std::to_string(base + 5)});
}

TEST_CASE("length plans") {
  CHECK(plan_lengths(fixture::one_mcq("t", "s", "k1 k2 k3 k4", {"a b c", "a b c d e f", "x"}).mcqs()[0], tok) ==
        std::vector<std::size_t>{3, 6, 4});
  CHECK(plan_lengths(fixture::one_mcq("t", "s", "k", {}).mcqs()[0], tok) == std::vector<std::size_t>{1, 1, 2});
  CHECK(plan_lengths(fixture::one_mcq("t", "s", "k k k k k", {}).mcqs()[0], tok) == std::vector<std::size_t>{4, 5, 6});
  CHECK(plan_lengths(fixture::one_mcq("t", "s", "k k", {"a"}).mcqs()[0], tok) == std::vector<std::size_t>{1, 2, 1});
}

TEST_CASE("length orders") {
  const std::vector<std::size_t> l{3, 6, 4};
  CHECK(order_lengths(l, OrderMode::sf, 1) == std::vector<std::size_t>{3, 4, 6});
  CHECK(order_lengths(l, OrderMode::lf, 1) == std::vector<std::size_t>{6, 4, 3});
  auto r = order_lengths(l, OrderMode::rnd, 9);
  CHECK(r == order_lengths(l, OrderMode::rnd, 9));
  std::sort(r.begin(), r.end());
  CHECK(r == std::vector<std::size_t>{3, 4, 6});
  std::vector<std::size_t> seen;
  for (std::uint64_t s = 0; s < 50; ++s) seen.push_back(order_lengths(l, OrderMode::rnd, s).front());
  std::sort(seen.begin(), seen.end());
  seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
  CHECK(seen.size() == 3);
  CHECK(parse_order_mode("LF") == OrderMode::lf);
  CHECK_THROWS_AS(parse_order_mode("xx"), ValidationError);
}

TEST_CASE("corpus run is sorted and deterministic") {
  const Corpus c = load_corpus(fixture::data("corpus_test.jsonl"), Split::test);
  auto once = [&](OrderMode m, Variant v) {
    FnPredictor pred([](const PredictorQuery& q, std::size_t pos) -> Candidate {
      const std::size_t n = run_length(q.tokens, pos);
      if (n >= 2) return {kSep, 0.2};
      return {"g" + std::to_string(pos % 7), 0.1 + 0.01 * static_cast<double>(pos % 13)};
    });
    GenerationRun run;
    run.order = m;
    run.config.variant = v;
    return run_generation(c, pred, tok, run);
  };
  for (Variant v : {Variant::l2r, Variant::upmlm}) {
    const auto a = once(OrderMode::rnd, v);
    const auto b = once(OrderMode::rnd, v);
    REQUIRE(a.size() == 3);
    CHECK(a[0].mcq_id == "test-q1");
    CHECK(a[2].mcq_id == "test-q3");
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].distractors == b[i].distractors);
      CHECK(a[i].distractors.size() == 3);
    }
  }
  // u-PMLM lengths follow the plan: q1 refs "i parken", "på stranden" -> {2, 2}, key 2
  const auto sf = once(OrderMode::sf, Variant::upmlm);
  for (const auto& g : sf[0].raw) CHECK(g.tokens.size() == 2);
}

TEST_CASE("oversized generation contexts are rejected") {
  TokenSeq big(kMaxSequence, "w");
  FnPredictor pred([](const PredictorQuery&, std::size_t) -> Candidate { return {"z", 0.9}; });
  CHECK_THROWS_AS(generate_l2r(big, pred, {}), ValidationError);
}
