#include "conefaces/bigcomb.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace conefaces::bigcomb {

using boost::multiprecision::abs;
using boost::multiprecision::denominator;
using boost::multiprecision::numerator;

BinomialCache::BinomialCache(int max_n) : max_n_(max_n), zero_(0) {
  if (max_n < 0) throw std::invalid_argument("BinomialCache: max_n must be >= 0");
  rows_.resize(max_n + 1);
  for (int n = 0; n <= max_n; ++n) {
    rows_[n].resize(n + 1);
    rows_[n][0] = 1;
    rows_[n][n] = 1;
    for (int m = 1; m < n; ++m) rows_[n][m] = rows_[n - 1][m - 1] + rows_[n - 1][m];
  }
}

const BigInt& BinomialCache::at(int n, long m) const {
  if (n < 0 || n > max_n_) throw std::out_of_range("BinomialCache: n out of range: " + std::to_string(n));
  if (m < 0 || m > n) return zero_;
  return rows_[n][static_cast<size_t>(m)];
}

namespace {
const BinomialCache& shared_cache() {
  static const BinomialCache cache(128);
  return cache;
}
}  // namespace

BigInt binomial(long n, long m) {
  if (n < 0) throw std::invalid_argument("binomial: n must be >= 0, got " + std::to_string(n));
  if (m < 0 || m > n) return 0;
  if (n <= shared_cache().max_n()) return shared_cache().at(static_cast<int>(n), m);
  m = std::min(m, n - m);
  BigInt r = 1;
  for (long i = 1; i <= m; ++i) {
    r *= (n - m + i);
    r /= i;  // exact: r is C(n-m+i, i) after this step
  }
  return r;
}

BigInt binom_partial_sum(long n, long m) {
  if (n < 0) throw std::invalid_argument("binom_partial_sum: n must be >= 0, got " + std::to_string(n));
  if (m < 0) return 0;
  if (m >= n) return BigInt(1) << n;
  BigInt term = 1, sum = 1;
  for (long i = 1; i <= m; ++i) {
    term *= (n - i + 1);
    term /= i;
    sum += term;
  }
  return sum;
}

BigRat wendel_probability(int d, int N) {
  if (d < 1) throw std::domain_error("wendel_probability: d must be >= 1, got " + std::to_string(d));
  if (N < 1) throw std::domain_error("wendel_probability: N must be >= 1, got " + std::to_string(N));
  if (d >= N) return 1;
  return BigRat(binom_partial_sum(N - 1, d - 1), BigInt(1) << (N - 1));
}

BigRat quotient_dt(const ConeIndex& idx) {
  idx.validate();
  return wendel_probability(idx.d - idx.k, idx.N - idx.k);
}

BigRat quotient_ce(const ConeIndex& idx) {
  idx.validate();
  return quotient_dt(idx) / wendel_probability(idx.d, idx.N);
}

BigRat expected_faces(const ConeIndex& idx, ConeModel model) {
  const BigRat q = model == ConeModel::DonohoTanner ? quotient_dt(idx) : quotient_ce(idx);
  return BigRat(binomial(idx.N, idx.k)) * q;
}

BigRat difference(const ConeIndex& idx, ConeModel model) {
  idx.validate();
  const BigRat count = BigRat(binomial(idx.N, idx.k));
  if (model == ConeModel::DonohoTanner) {
    return count * wendel_probability(idx.N - idx.d, idx.N - idx.k);
  }
  return count * (BigRat(1) - quotient_ce(idx));
}

BigRat ce_upper_bound(int d, int k) {
  if (k < 1 || k >= d) {
    throw std::domain_error("ce_upper_bound: need 0 < k < d, got k=" + std::to_string(k) + " d=" + std::to_string(d));
  }
  return BigRat((BigInt(1) << d) - (BigInt(1) << k), (BigInt(1) << d) - 1);
}

BigInt partial_sum_sj(int d, int N, int j) {
  if (d < 1 || N <= d) throw std::domain_error("partial_sum_sj: need N > d >= 1");
  if (j < 0) throw std::domain_error("partial_sum_sj: need j >= 0, got " + std::to_string(j));
  if (j >= d - 1) return 0;
  return binom_partial_sum(N - j - 1, d - j - 2);
}

BigInt factorial(int n) {
  if (n < 0) throw std::invalid_argument("factorial: n must be >= 0, got " + std::to_string(n));
  BigInt r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

long double log_of_rational_ld(const BigRat& x) {
  const BigInt num = numerator(x);
  if (num <= 0) throw std::domain_error("log_of_rational: argument must be positive");
  const BigInt den = denominator(x);
  // x * 2^-e lies in (1/2, 2); log1p keeps full precision on that interval,
  // including the heavy cancellation when x is near 1.
  const long e = bit_length(num) - bit_length(den);
  BigInt n2 = num, d2 = den;
  if (e >= 0) {
    d2 <<= e;
  } else {
    n2 <<= -e;
  }
  constexpr long double kLn2 = 0.69314718055994530941723212145817657L;
  return static_cast<long double>(e) * kLn2 + std::log1p(detail::ld_from_ratio(n2 - d2, d2));
}

double log_of_rational(const BigRat& x, double rel_err) {
  if (!(rel_err > 0)) throw std::invalid_argument("log_of_rational: rel_err must be positive");
  if (rel_err < 1e-15) throw std::invalid_argument("log_of_rational: rel_err below supported accuracy (1e-15)");
  return static_cast<double>(log_of_rational_ld(x));
}

}  // namespace conefaces::bigcomb
