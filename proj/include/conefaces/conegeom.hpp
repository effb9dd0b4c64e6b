#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "conefaces/types.hpp"

namespace conefaces::conegeom {

inline constexpr long kSubsetCap = 1000000;  // max C(N,k) enumerated

// N points in R^d, stored as binary64 and, in parallel, as exact dyadic
// integers: point coordinate (i,j) equals ints[i*d+j] / 2^scale_pow. All
// geometric decisions are made on the integer form, so they are exact
// relative to the sampled floats.
class VectorSample {
 public:
  VectorSample(int d, int N, uint64_t seed, std::vector<double> pts);
  static VectorSample from_points(int d, int N, std::vector<double> pts);

  int d() const { return d_; }
  int N() const { return N_; }
  uint64_t seed() const { return seed_; }
  const std::string& distribution() const { return distribution_; }
  double at(int i, int j) const { return pts_[static_cast<size_t>(i) * d_ + j]; }
  const std::vector<double>& raw() const { return pts_; }

  const BigInt& exact_at(int i, int j) const { return ints_[static_cast<size_t>(i) * d_ + j]; }
  int scale_pow() const { return scale_pow_; }

 private:
  int d_, N_;
  uint64_t seed_;
  std::string distribution_ = "standard-gaussian";
  std::vector<double> pts_;
  std::vector<BigInt> ints_;
  int scale_pow_ = 0;
};

struct SimulationConfig {
  int d = 0;
  int N = 0;
  int k = 0;  // ignored by estimate_wendel
  long trials = 10000;
  uint64_t seed = 0;
  double min_acceptance = 0.01;  // CE rejection-sampling floor
  int threads = 1;
};

struct Estimate {
  double mean = 0.0;
  double stderr_of_mean = 0.0;
  long trials = 0;     // accepted trials contributing to the mean
  long rejected = 0;   // CE conditioning rejections
  long degenerate = 0; // aborted measure-zero trials
  bool low_acceptance = false;
};

// N i.i.d. standard-Gaussian d-vectors from a deterministic stream (explicit
// Box-Muller over mt19937_64); identical seed => identical sample.
VectorSample sample_points(int d, int N, uint64_t seed);

// True iff pos{x_1..x_N} = R^d, i.e. the origin lies in the interior of the
// convex hull. Decided exactly: rank check, then a supporting-functional
// feasibility test (the polar cone is nonzero iff the sample does not cover);
// when a support functional exists, membership of the origin in the convex
// hull distinguishes a boundary hit from a clean miss.
// Throws DegenerateSampleError on rank deficiency or a boundary hit.
bool covers_space(const VectorSample& sample);

// True iff some u satisfies <u, x_i> >= 1 for all i (strict separation of the
// origin from the hull). Dual audit counterpart of covers_space.
bool has_separating_functional(const VectorSample& sample);

// True iff the subset spans a k-face of the cone: some u has <u, x_j> = 0 on
// the subset and <u, x_i> <= -1 off it. Exact; callers ensure the cone is
// pointed (a covering sample yields false).
bool is_face(const VectorSample& sample, const std::vector<int>& subset);

// Number of k-subsets spanning a k-face; 0 for covering samples. Enumerates
// all C(N,k) subsets; throws SubsetCapError beyond kSubsetCap.
long count_k_faces(const VectorSample& sample, int k);

// Monte Carlo estimators; deterministic given (cfg.seed, trial count), with
// per-trial substreams and integer aggregation so the thread count never
// changes the result. A 1% audit of trials re-checks covers_space against
// has_separating_functional and throws std::logic_error on disagreement.
Estimate estimate_wendel(const SimulationConfig& cfg);
Estimate estimate_faces(const SimulationConfig& cfg, ConeModel model);

}  // namespace conefaces::conegeom
