#pragma once

#include <cstdint>
#include <vector>

#include "conefaces/types.hpp"

namespace conefaces::bigcomb {

// Immutable table of binomial coefficients C(n, m) for 0 <= m <= n <= max_n.
// Rows are built once by Pascal's rule; lookups never mutate.
class BinomialCache {
 public:
  explicit BinomialCache(int max_n);
  int max_n() const { return max_n_; }
  // Requires 0 <= n <= max_n; returns 0 for m outside [0, n].
  const BigInt& at(int n, long m) const;

 private:
  int max_n_;
  std::vector<std::vector<BigInt>> rows_;
  BigInt zero_;
};

// C(n, m). Requires n >= 0; returns 0 for m < 0 or m > n.
BigInt binomial(long n, long m);

// sum_{i=0}^{m} C(n, i). Requires n >= 0; 0 for m < 0; 2^n for m >= n.
BigInt binom_partial_sum(long n, long m);

// Wendel's probability P_{d,N} that N i.i.d. symmetric points in general
// position in R^d do NOT positively span R^d:
//   P_{d,N} = 2^{1-N} * sum_{i=0}^{d-1} C(N-1, i).
// Requires d >= 1 and N >= 1; returns 1 when d >= N.
BigRat wendel_probability(int d, int N);

// Expected k-face fraction E f_k / C(N,k) for each model.
//   Donoho-Tanner:  P_{d-k, N-k}
//   Cover-Efron:    P_{d-k, N-k} / P_{d,N}
BigRat quotient_dt(const ConeIndex& idx);
BigRat quotient_ce(const ConeIndex& idx);

// Expected number of k-faces: C(N,k) * quotient.
BigRat expected_faces(const ConeIndex& idx, ConeModel model);

// Expected face deficit C(N,k) - E f_k, computed exactly:
//   Donoho-Tanner:  C(N,k) * P_{N-d, N-k}
//   Cover-Efron:    C(N,k) * (1 - quotient_ce)
BigRat difference(const ConeIndex& idx, ConeModel model);

// Dimension-only upper bound for the Cover-Efron quotient:
//   (2^d - 2^k) / (2^d - 1),  0 < k < d.
// Attained exactly when N = d + 1.
BigRat ce_upper_bound(int d, int k);

// Tail sums S_j = sum_{i=0}^{d-j-2} C(N-j-1, i) used by the monotonicity
// argument; S_j = 0 for j >= d - 1. Requires N > d >= 1 and j >= 0.
BigInt partial_sum_sj(int d, int N, int j);

// Exact factorial n! for n >= 0.
BigInt factorial(int n);

// Natural log of a positive rational. The mantissa/bit-length decomposition
// with split ln2 keeps the relative error near 1e-18 (long double internals),
// comfortably below any rel_err >= 1e-15; smaller requests are rejected.
double log_of_rational(const BigRat& x, double rel_err = 1e-12);

// Long-double variant used where the downstream arithmetic cancels almost
// everything (see asymptotics::stirling_theta).
long double log_of_rational_ld(const BigRat& x);

}  // namespace conefaces::bigcomb
