#include "dgen/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "dgen/error.hpp"

namespace dgen {

void KernelParams::validate() const {
  if (!(lambda > 0.0 && lambda <= 1.0)) throw Error("kernel lambda must be in (0, 1]");
  if (!(mu > 0.0 && mu <= 1.0)) throw Error("kernel mu must be in (0, 1]");
}

namespace {

struct FlatTree {
  std::vector<int> label;
  std::vector<std::vector<int>> children;
};

class LabelTable {
 public:
  int id(const GrctNode& n) {
    auto key = std::make_pair(n.kind, n.label);
    auto [it, inserted] = ids_.emplace(std::move(key), static_cast<int>(ids_.size()));
    return it->second;
  }

 private:
  std::map<std::pair<GrctKind, std::string>, int> ids_;
};

int flatten(const GrctNode& n, FlatTree& out, LabelTable& labels) {
  const int me = static_cast<int>(out.label.size());
  out.label.push_back(labels.id(n));
  out.children.emplace_back();
  for (const auto& c : n.children) {
    const int ci = flatten(c, out, labels);
    out.children[static_cast<std::size_t>(me)].push_back(ci);
  }
  return me;
}

class PtkEvaluator {
 public:
  PtkEvaluator(const FlatTree& a, const FlatTree& b, const KernelParams& p)
      : a_(a), b_(b), lambda_(p.lambda), mu_(p.mu), memo_(a.label.size() * b.label.size(), -1.0) {}

  double total() {
    double sum = 0.0;
    for (std::size_t i = 0; i < a_.label.size(); ++i)
      for (std::size_t j = 0; j < b_.label.size(); ++j) sum += delta(static_cast<int>(i), static_cast<int>(j));
    return sum;
  }

 private:
  double delta(int i, int j) {
    if (a_.label[static_cast<std::size_t>(i)] != b_.label[static_cast<std::size_t>(j)]) return 0.0;
    double& slot = memo_[static_cast<std::size_t>(i) * b_.label.size() + static_cast<std::size_t>(j)];
    if (slot >= 0.0) return slot;
    const auto& ci = a_.children[static_cast<std::size_t>(i)];
    const auto& cj = b_.children[static_cast<std::size_t>(j)];
    const double l2 = lambda_ * lambda_;
    if (ci.empty() || cj.empty()) {
      slot = mu_ * l2;
    } else {
      slot = mu_ * (l2 + child_sequences(ci, cj));
    }
    return slot;
  }

  // Sum over equal-length child subsequence pairs of the product of their
  // deltas, each pair weighted by lambda^(gaps in both subsequences).
  double child_sequences(const std::vector<int>& cx, const std::vector<int>& cz) {
    const std::size_t n = cx.size();
    const std::size_t m = cz.size();
    const std::size_t p = std::min(n, m);
    const std::size_t w = m + 1;
    std::vector<double> pair_delta((n + 1) * w, 0.0);
    std::vector<double> dps((n + 1) * w, 0.0);
    std::vector<double> dp((n + 1) * w, 0.0);
    double total = 0.0;

    for (std::size_t x = 1; x <= n; ++x)
      for (std::size_t z = 1; z <= m; ++z) {
        const double d = delta(cx[x - 1], cz[z - 1]);
        pair_delta[x * w + z] = d;
        dps[x * w + z] = d;
        total += d;
      }

    const double l2 = lambda_ * lambda_;
    for (std::size_t len = 2; len <= p; ++len) {
      // dp(x, z) = sum over x' <= x, z' <= z of lambda^((x-x')+(z-z')) * dps(x', z')
      for (std::size_t x = 0; x <= n; ++x)
        for (std::size_t z = 0; z <= m; ++z) {
          if (x == 0 || z == 0) {
            dp[x * w + z] = 0.0;
            continue;
          }
          dp[x * w + z] = dps[x * w + z] + lambda_ * dp[(x - 1) * w + z] + lambda_ * dp[x * w + z - 1] -
                          l2 * dp[(x - 1) * w + z - 1];
        }
      for (std::size_t x = 0; x <= n; ++x)
        for (std::size_t z = 0; z <= m; ++z) {
          double v = 0.0;
          if (x >= len && z >= len && pair_delta[x * w + z] != 0.0)
            v = pair_delta[x * w + z] * dp[(x - 1) * w + z - 1];
          dps[x * w + z] = v;
          total += v;
        }
    }
    return total;
  }

  const FlatTree& a_;
  const FlatTree& b_;
  double lambda_;
  double mu_;
  std::vector<double> memo_;
};

}  // namespace

double ptk(const GrctNode& a, const GrctNode& b, const KernelParams& params) {
  params.validate();
  if (a.empty() || b.empty()) return 0.0;
  LabelTable labels;
  FlatTree fa, fb;
  flatten(a, fa, labels);
  flatten(b, fb, labels);
  const double k = PtkEvaluator(fa, fb, params).total();
  // the recurrence subtracts; clamp rounding residue
  return k < 0.0 ? 0.0 : k;
}

double ncptk(const GrctNode& a, const GrctNode& b, const KernelParams& params) {
  const double kaa = ptk(a, a, params);
  const double kbb = ptk(b, b, params);
  if (kaa <= 0.0 || kbb <= 0.0) throw Error("ncptk: self-kernel of an empty tree is zero");
  const double v = ptk(a, b, params) / (std::sqrt(kaa) * std::sqrt(kbb));
  return std::clamp(v, 0.0, 1.0);
}

NormalizedKernel::NormalizedKernel(GrctNode reference, KernelParams params)
    : reference_(std::move(reference)), params_(params), self_(ptk(reference_, reference_, params_)) {
  if (self_ <= 0.0) throw Error("ncptk: self-kernel of an empty tree is zero");
}

double NormalizedKernel::operator()(const GrctNode& other) const {
  const double kbb = ptk(other, other, params_);
  if (kbb <= 0.0) throw Error("ncptk: self-kernel of an empty tree is zero");
  return std::clamp(ptk(reference_, other, params_) / (std::sqrt(self_) * std::sqrt(kbb)), 0.0, 1.0);
}

}  // namespace dgen
