#include <cmath>

#include "doctest.h"
#include "dgen/error.hpp"
#include "dgen/kernel.hpp"
#include "dgen/rng.hpp"
#include "oracles.hpp"

using namespace dgen;

namespace {

GrctNode leaf(GrctKind k, std::string label) { return GrctNode{k, std::move(label), {}}; }

}  // namespace

TEST_CASE("single matching leaf") {
  const GrctNode a = leaf(GrctKind::gr, "x");
  CHECK(ptk(a, a) == doctest::Approx(1.0));
  CHECK(ptk(a, a, {0.5, 0.4}) == doctest::Approx(0.4 * 0.25));
  CHECK(ptk(a, leaf(GrctKind::pos, "x")) == 0.0);
  CHECK(ptk(a, leaf(GrctKind::gr, "y")) == 0.0);
}

TEST_CASE("one parent with two children by hand") {
  // (a b c) vs itself: fragments at root a, a-b, a-c, a-b-c, plus b and c.
  const GrctNode t{GrctKind::gr, "a", {leaf(GrctKind::pos, "b"), leaf(GrctKind::pos, "c")}};
  CHECK(ptk(t, t) == doctest::Approx(6.0));
  CHECK(oracle::common_fragments(t, t) == 6);
}

TEST_CASE("unit-decay kernel counts shared fragments") {
  Rng rng(2024);
  for (int rep = 0; rep < 200; ++rep) {
    const GrctNode a = oracle::random_tree(rng, 9);
    const GrctNode b = oracle::random_tree(rng, 9);
    const double k = ptk(a, b);
    CHECK(k == static_cast<double>(oracle::common_fragments(a, b)));
  }
}

TEST_CASE("decayed kernel matches explicit enumeration") {
  Rng rng(99);
  const KernelParams ps[] = {{0.4, 0.4}, {0.7, 1.0}, {1.0, 0.3}, {0.25, 0.9}};
  for (int rep = 0; rep < 150; ++rep) {
    const GrctNode a = oracle::random_tree(rng, 8);
    const GrctNode b = oracle::random_tree(rng, 8);
    for (const auto& p : ps)
      CHECK(ptk(a, b, p) == doctest::Approx(oracle::enumerated_ptk(a, b, p.lambda, p.mu)).epsilon(1e-9));
  }
}

TEST_CASE("normalized kernel is symmetric, bounded and 1 on identity") {
  Rng rng(5);
  for (int rep = 0; rep < 200; ++rep) {
    const GrctNode a = oracle::random_tree(rng, 10);
    const GrctNode b = oracle::random_tree(rng, 10);
    const double ab = ncptk(a, b);
    CHECK(ab >= 0.0);
    CHECK(ab <= 1.0);
    CHECK(ab == doctest::Approx(ncptk(b, a)).epsilon(1e-12));
    CHECK(ncptk(a, a) == doctest::Approx(1.0).epsilon(1e-12));
    const NormalizedKernel nk(a);
    CHECK(nk(b) == doctest::Approx(ab).epsilon(1e-12));
  }
}

TEST_CASE("empty trees and bad decays are rejected") {
  const GrctNode a = leaf(GrctKind::gr, "x");
  CHECK_THROWS_AS(ncptk(GrctNode{}, a), Error);
  CHECK_THROWS_AS(ncptk(a, a, {0.0, 1.0}), Error);
  CHECK_THROWS_AS(ncptk(a, a, {1.0, 1.5}), Error);
}
