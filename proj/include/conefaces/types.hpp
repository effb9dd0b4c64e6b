#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <stdexcept>
#include <string>

namespace conefaces {

// Exact arithmetic used everywhere a result must be an integer or a rational
// in lowest terms. BigRat normalizes (lowest terms, positive denominator) on
// construction and assignment. GMP-backed: the geometry predicates multiply
// hundreds of 100-500 bit integers per trial and GMP's kernels carry them.
using BigInt = boost::multiprecision::mpz_int;
using BigRat = boost::multiprecision::mpq_rational;

// Which random cone model a quantity refers to.
enum class ConeModel { DonohoTanner, CoverEfron };

// Raised when a numeric root solve cannot certify its bracket/residual.
struct RootSolveError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when a combinatorial enumeration would exceed the configured cap.
struct SubsetCapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when a sample violates the general-position assumptions (origin on
// the boundary of the convex hull, or rank-deficient span).
struct DegenerateSampleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Index triple for face counts: k-faces of a cone spanned by N vectors in
// dimension d, in the proper regime 0 < k < d < N.
struct ConeIndex {
  int d = 0;
  int N = 0;
  int k = 0;

  void validate() const {
    if (k < 1) throw std::domain_error("ConeIndex: k must be >= 1, got " + std::to_string(k));
    if (k >= d) throw std::domain_error("ConeIndex: need k < d, got k=" + std::to_string(k) + " d=" + std::to_string(d));
    if (d >= N) throw std::domain_error("ConeIndex: need d < N, got d=" + std::to_string(d) + " N=" + std::to_string(N));
  }
};

// Number of significant bits of |x|; 0 for x = 0.
inline long bit_length(const BigInt& x) {
  if (x == 0) return 0;
  return static_cast<long>(boost::multiprecision::msb(boost::multiprecision::abs(x))) + 1;
}

// Correct-to-~1ulp double from an exact rational, via a 96-bit scaled
// integer quotient assembled in long double.
double to_double(const BigRat& x);

namespace detail {
// num/den as long double (~2^-63 relative error), any magnitude; den > 0.
long double ld_from_ratio(const BigInt& num, const BigInt& den);
}  // namespace detail

}  // namespace conefaces
