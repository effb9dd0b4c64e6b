#pragma once

#include "conefaces/types.hpp"

namespace conefaces::asymptotics {

// Limit-regime parameters: d/N -> delta, k/d -> rho.
struct RegimeParams {
  double delta = 0.0;  // in (0, 1]
  double rho = 0.0;    // in [0, 1)
  void validate() const;
};

// tau = delta*rho and sigma = (1-delta)/(1-tau); both in (0,1) for a valid
// ConeIndex with k >= 1, N > d.
struct DerivedRatios {
  double tau = 0.0;
  double sigma = 0.0;
};
DerivedRatios derived_ratios(double delta, double rho);

// Shape of the N-2d+k law along a sweep.
enum class WindowMode { SqrtWindow, UpperPower, TwoSidedPower, LowerPower };

struct WindowSpec {
  double c = 0.0;
  double alpha = 0.5;  // exponent of d; 1/2 for SqrtWindow
  WindowMode mode = WindowMode::SqrtWindow;
  void validate() const;
};

// Binary entropy with natural logs, H(0) = H(1) = 0 by continuity.
double entropy_h(double x);

// G(delta, rho) = H(delta) + delta*H(rho) - (1 - rho*delta)*log 2.
// Its sign at (d/N, k/d) drives the face-count deficit exponentially.
double g_exponent(double delta, double rho);

// Weak threshold max{0, 2 - 1/delta} for the quotient phase transition.
double rho_weak(double delta);

// Strong threshold: unique zero of G(delta, .) in (0,1), located by bisection
// from the sign-change bracket [0, 1-eps]. Throws RootSolveError if the
// bracket shows no sign change or the residual cannot be pushed below tol.
double rho_strong(double delta, double tol = 1e-13);

// Standard normal CDF, absolute error well below 1e-12 for |x| <= 8.
double normal_cdf(double x);

// Limit of the Cover-Efron quotient in the critical window
// N - 2d + k ~ c*sqrt(d):  Phi(-c / sqrt(2(1-rho))).
double window_limit_ce(double rho, double c);

// Limit of the Wendel probability when N - 2d ~ c*sqrt(d):  Phi(-c/sqrt(2)).
double window_limit_wendel(double c);

// Limit Phi(-(c+b)/sqrt2) / Phi(-c/sqrt2) for N-2d ~ c*sqrt(d), k ~ b*sqrt(d).
double window_limit_ratio(double c, double b);

// Hoeffding-type binomial tail bounds.
//   upper: P(xi_{N-1} >= d)  <= exp(-2(d/(N-1) - 1/2)^2 (N-1)),  d/(N-1) > 1/2
//   lower: P(xi_{N-1} <= d-1) <= exp(-2((d-1)/(N-1) - 1/2)^2 (N-1)),
//          (d-1)/(N-1) < 1/2
// The hypothesis is checked with exact integer comparisons.
double okamoto_upper_tail_bound(int d, int N);
double okamoto_lower_tail_bound(int d, int N);

// theta(n) = 12n(log n! - 1/2 log(2 pi n) + n - n log n), the Stirling
// correction with n! = sqrt(2 pi n) e^{-n} n^n e^{theta/12n}; in (0,1).
// Capped at n <= 5000.
double stirling_theta(int n);

// Envelope N * exp(-N*G(delta_d, rho_d)) * [C(N,k) - E f_k], evaluated in
// log-space from the exact difference. Requires 1/2 < d/N < 1 and
// 0 < k/d < rho_weak(d/N).
double difference_envelope(const ConeIndex& idx, ConeModel model);

}  // namespace conefaces::asymptotics
