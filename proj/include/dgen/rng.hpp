#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace dgen {

inline constexpr std::uint64_t kDefaultSeed = 42;

// Source of uniform reals in [0, 1). Extraction and sampling code draws
// through this interface so tests can script the draws.
class UniformSource {
 public:
  virtual ~UniformSource() = default;
  virtual double next_uniform() = 0;
};

// Seeded generator with a bit-exact output sequence on every platform:
// mt19937_64 is fully specified by the standard and the derived draws below
// avoid the implementation-defined std distributions.
class Rng final : public UniformSource {
 public:
  explicit Rng(std::uint64_t seed = kDefaultSeed) : engine_(seed) {}

  double next_uniform() override { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Unbiased integer in [0, n). n must be > 0.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x = 0;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// Independent stream for one item, derived from the run seed and the item id,
// so results do not depend on processing order.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view id);

}  // namespace dgen
