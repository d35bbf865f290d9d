#pragma once

#include "dgen/grct.hpp"

namespace dgen {

// Decay factors of the partial tree kernel: `lambda` for child-subsequence
// gaps, `mu` for tree depth. Both in (0, 1]; 1/1 counts shared fragments.
struct KernelParams {
  double lambda = 1.0;
  double mu = 1.0;

  void validate() const;
};

// Partial tree kernel: sum over node pairs of the number (weighted by the
// decays) of common partial-tree fragments rooted at both nodes. Nodes
// match on kind and label.
double ptk(const GrctNode& a, const GrctNode& b, const KernelParams& params = {});

// ptk(a, b) / sqrt(ptk(a, a) * ptk(b, b)), in [0, 1]. Throws Error when
// either tree is empty.
double ncptk(const GrctNode& a, const GrctNode& b, const KernelParams& params = {});

// Reuses the self-kernel of a fixed tree across many comparisons.
class NormalizedKernel {
 public:
  NormalizedKernel(GrctNode reference, KernelParams params = {});
  double operator()(const GrctNode& other) const;
  const GrctNode& reference() const { return reference_; }

 private:
  GrctNode reference_;
  KernelParams params_;
  double self_ = 0.0;
};

}  // namespace dgen
