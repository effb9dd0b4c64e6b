#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "conefaces/asymptotics.hpp"
#include "conefaces/types.hpp"

namespace conefaces::experiments {

enum class Regime { FixedRatio, FixedK, SqrtWindow, PowerWindow, Oscillating };

// Recipe for an integer sequence (d, N(d), k(d)) following one of the
// threshold regimes. Fixed-ratio and fixed-k use half-up rounding
// (N = round(d/delta)); window regimes force N - 2d + k = round(c d^alpha);
// the oscillating construction uses floors and a per-d root solve.
struct SequenceSpec {
  Regime regime = Regime::FixedRatio;
  double delta = 0.0;
  double rho = 0.0;                 // fixed-ratio only
  int k_fixed = 0;                  // fixed-k only
  asymptotics::WindowSpec window{};  // window regimes only

  void validate() const;  // throws std::domain_error naming the violation
};

// One sweep point. Cells that a given sweep does not produce stay empty and
// serialize as empty CSV cells.
struct SweepRow {
  int d = 0, N = 0, k = 0;
  double delta_d = 0.0, rho_d = 0.0;
  std::optional<double> quotient_dt, quotient_ce;
  std::optional<double> diff_log_dt, diff_log_ce;
  std::optional<double> envelope_dt, envelope_ce;
  std::optional<double> predicted_limit;
};

// The triple for one d; throws std::domain_error when rounding leaves the
// triple outside 0 < k < d < N (d below the regime's validity floor).
ConeIndex make_sequence(const SequenceSpec& spec, int d);

struct OscillatingPoint {
  ConeIndex idx;
  double rho_of_d = 0.0;  // root of G(delta, .) = level, above rho_S
  double level = 0.0;     // (3/2) log(N)/N for even d, (1/2) log(N)/N for odd
};

// N = floor(d/delta), k = floor(rho(d) d) with G(delta, rho(d)) equal to the
// parity-dependent level; the root is bisected to adjacent doubles and the
// residual certified. Throws RootSolveError when no bracket works.
OscillatingPoint oscillating_construction(double delta, int d);

// Limit of the Cover-Efron quotient along the sequence; empty for the
// oscillating regime, whose limit deliberately does not exist.
std::optional<double> predicted_quotient_limit(const SequenceSpec& spec);

// Exact quotients (both models) plus the predicted limit, ascending d.
std::vector<SweepRow> run_quotient_sweep(const SequenceSpec& spec, const std::vector<int>& d_list);

// log(C(N,k) - E f_k) exactly, plus the asymptotic envelope, for one model.
// Requires a fixed-ratio spec with 1/2 < delta < 1, 0 < rho < rho_weak(delta),
// or an oscillating spec.
std::vector<SweepRow> run_difference_sweep(const SequenceSpec& spec, const std::vector<int>& d_list,
                                           ConeModel model);

// Sign of G(delta, rho): negative means the difference tends to 0, positive
// to infinity.
enum class DifferenceClass { ToZero, ToInfinity };
DifferenceClass classify_difference(double delta, double rho);

// CSV with the fixed schema
// d,N,k,delta_d,rho_d,quotient_dt,quotient_ce,diff_log_dt,diff_log_ce,envelope_dt,envelope_ce,predicted_limit
// 17 significant digits, '.' decimals, '\n' endings, no quoting, empty cells
// for absent values. Row order follows the input.
void emit_csv(const std::vector<SweepRow>& rows, std::ostream& os);
void emit_csv(const std::vector<SweepRow>& rows, const std::string& path);

// Self-contained SVG line chart of the named columns (x usually "d"): axes,
// legend, and a dashed guide line at the predicted limit when one is present.
// The y range pads 5% beyond the data extrema. Unknown column names throw.
void emit_svg_lineplot(const std::vector<SweepRow>& rows, const std::string& x_column,
                       const std::vector<std::string>& y_columns, std::ostream& os);
void emit_svg_lineplot(const std::vector<SweepRow>& rows, const std::string& x_column,
                       const std::vector<std::string>& y_columns, const std::string& path);

// Merge rows from several sweeps over the same d grid: cells present in any
// input win; conflicting present cells must agree bitwise.
std::vector<SweepRow> merge_rows(const std::vector<std::vector<SweepRow>>& sweeps);

}  // namespace conefaces::experiments
