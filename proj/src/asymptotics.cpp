#include "conefaces/asymptotics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "conefaces/bigcomb.hpp"

namespace conefaces::asymptotics {

namespace {
constexpr double kLn2 = 0.6931471805599453094;
}  // namespace

void RegimeParams::validate() const {
  if (!(delta > 0.0 && delta <= 1.0)) throw std::domain_error("RegimeParams: delta must lie in (0,1]");
  if (!(rho >= 0.0 && rho < 1.0)) throw std::domain_error("RegimeParams: rho must lie in [0,1)");
}

void WindowSpec::validate() const {
  switch (mode) {
    case WindowMode::SqrtWindow:
      if (alpha != 0.5) throw std::domain_error("WindowSpec: sqrt-window requires alpha = 1/2");
      break;
    case WindowMode::UpperPower:
      if (!(alpha > 0.5 && alpha < 1.0)) throw std::domain_error("WindowSpec: upper-power requires 1/2 < alpha < 1");
      if (!(c > 0.0)) throw std::domain_error("WindowSpec: upper-power requires c > 0");
      break;
    case WindowMode::TwoSidedPower:
      if (!(alpha > 0.0 && alpha < 0.5)) throw std::domain_error("WindowSpec: two-sided-power requires 0 < alpha < 1/2");
      if (!(c >= 0.0)) throw std::domain_error("WindowSpec: two-sided-power requires c >= 0");
      break;
    case WindowMode::LowerPower:
      if (!(alpha > 0.5 && alpha < 1.0)) throw std::domain_error("WindowSpec: lower-power requires 1/2 < alpha < 1");
      if (!(c < 0.0)) throw std::domain_error("WindowSpec: lower-power requires c < 0");
      break;
  }
}

DerivedRatios derived_ratios(double delta, double rho) {
  const double tau = delta * rho;
  return {tau, (1.0 - delta) / (1.0 - tau)};
}

double entropy_h(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("entropy_h: x must lie in [0,1], got " + std::to_string(x));
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log(x) - (1.0 - x) * std::log1p(-x);
}

double g_exponent(double delta, double rho) {
  if (!(delta >= 0.0 && delta <= 1.0) || !(rho >= 0.0 && rho <= 1.0)) {
    throw std::domain_error("g_exponent: (delta, rho) must lie in [0,1]^2");
  }
  return entropy_h(delta) + delta * entropy_h(rho) - (1.0 - rho * delta) * kLn2;
}

double rho_weak(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::domain_error("rho_weak: delta must lie in (0,1), got " + std::to_string(delta));
  return std::max(0.0, 2.0 - 1.0 / delta);
}

double rho_strong(double delta, double tol) {
  if (!(delta > 0.5 && delta < 1.0)) throw std::domain_error("rho_strong: delta must lie in (1/2,1), got " + std::to_string(delta));
  if (!(tol > 0.0)) throw std::invalid_argument("rho_strong: tol must be positive");
  double lo = 0.0, hi = 1.0 - 1e-9;
  const double glo = g_exponent(delta, lo), ghi = g_exponent(delta, hi);
  if (!(glo < 0.0 && ghi > 0.0)) {
    throw RootSolveError("rho_strong: no sign change of G over [0, 1-eps] at delta=" + std::to_string(delta));
  }
  // Bisect to adjacent doubles; unconditional given the bracket.
  while (std::nextafter(lo, hi) < hi) {
    const double mid = lo + 0.5 * (hi - lo);
    if (g_exponent(delta, mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double root = std::abs(g_exponent(delta, lo)) <= std::abs(g_exponent(delta, hi)) ? lo : hi;
  if (!(std::abs(g_exponent(delta, root)) <= tol)) {
    throw RootSolveError("rho_strong: residual above tol at delta=" + std::to_string(delta));
  }
  return root;
}

double normal_cdf(double x) {
  if (!std::isfinite(x)) throw std::domain_error("normal_cdf: x must be finite");
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double window_limit_ce(double rho, double c) {
  if (!(rho >= 0.0 && rho < 1.0)) throw std::domain_error("window_limit_ce: rho must lie in [0,1)");
  return normal_cdf(-c / std::sqrt(2.0 * (1.0 - rho)));
}

double window_limit_wendel(double c) { return window_limit_ce(0.0, c); }

double window_limit_ratio(double c, double b) {
  return normal_cdf(-(c + b) / std::sqrt(2.0)) / normal_cdf(-c / std::sqrt(2.0));
}

double okamoto_upper_tail_bound(int d, int N) {
  if (d < 1 || N < 2) throw std::domain_error("okamoto_upper_tail_bound: need d >= 1, N >= 2");
  if (2 * d <= N - 1) throw std::domain_error("okamoto_upper_tail_bound: hypothesis d/(N-1) > 1/2 fails");
  const double t = static_cast<double>(d) / (N - 1) - 0.5;
  return std::exp(-2.0 * t * t * (N - 1));
}

double okamoto_lower_tail_bound(int d, int N) {
  if (d < 1 || N < 2) throw std::domain_error("okamoto_lower_tail_bound: need d >= 1, N >= 2");
  if (2 * (d - 1) >= N - 1) throw std::domain_error("okamoto_lower_tail_bound: hypothesis (d-1)/(N-1) < 1/2 fails");
  const double t = static_cast<double>(d - 1) / (N - 1) - 0.5;
  return std::exp(-2.0 * t * t * (N - 1));
}

double stirling_theta(int n) {
  if (n < 1) throw std::domain_error("stirling_theta: n must be >= 1, got " + std::to_string(n));
  if (n > 5000) throw std::domain_error("stirling_theta: n capped at 5000, got " + std::to_string(n));
  // The difference log n! - (n log n - n + log sqrt(2 pi n)) is ~1/(12n); the
  // whole computation stays in long double so the cancellation of ~n log n
  // leaves ~10 meaningful digits even at n = 5000.
  const long double log_fact = bigcomb::log_of_rational_ld(BigRat(bigcomb::factorial(n)));
  const long double nl = static_cast<long double>(n);
  const long double s = log_fact - nl * std::log(nl) + nl - 0.5L * std::log(2.0L * 3.14159265358979323846264338327950288L * nl);
  return static_cast<double>(12.0L * nl * s);
}

double difference_envelope(const ConeIndex& idx, ConeModel model) {
  idx.validate();
  const double delta_d = static_cast<double>(idx.d) / idx.N;
  const double rho_d = static_cast<double>(idx.k) / idx.d;
  if (!(delta_d > 0.5 && delta_d < 1.0)) {
    throw std::domain_error("difference_envelope: requires 1/2 < d/N < 1");
  }
  if (!(rho_d > 0.0 && rho_d < rho_weak(delta_d))) {
    throw std::domain_error("difference_envelope: requires 0 < k/d < rho_weak(d/N)");
  }
  const BigRat diff = bigcomb::difference(idx, model);
  if (diff <= 0) throw std::domain_error("difference_envelope: nonpositive difference");
  return std::exp(std::log(static_cast<double>(idx.N)) + bigcomb::log_of_rational(diff) -
                  idx.N * g_exponent(delta_d, rho_d));
}

}  // namespace conefaces::asymptotics
