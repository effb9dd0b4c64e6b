#include "conefaces/types.hpp"

#include <cmath>

namespace conefaces {
namespace detail {

long double ld_from_ratio(const BigInt& num, const BigInt& den) {
  if (num == 0) return 0.0L;
  const bool neg = num < 0;
  BigInt n = boost::multiprecision::abs(num);
  BigInt d = den;
  // Scale so the integer quotient carries ~96 significant bits, then undo the
  // scaling in the long double exponent.
  const long e = bit_length(n) - bit_length(d);
  const long shift = 96 - e;
  if (shift >= 0) {
    n <<= shift;
  } else {
    d <<= -shift;
  }
  const BigInt q = n / d;
  long double r = std::ldexp(q.convert_to<long double>(), static_cast<int>(-shift));
  return neg ? -r : r;
}

}  // namespace detail

double to_double(const BigRat& x) {
  return static_cast<double>(
      detail::ld_from_ratio(boost::multiprecision::numerator(x), boost::multiprecision::denominator(x)));
}

}  // namespace conefaces
