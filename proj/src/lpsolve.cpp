#include "conefaces/lpsolve.hpp"

#include <cassert>
#include <stdexcept>

namespace conefaces::lpsolve {

using boost::multiprecision::denominator;
using boost::multiprecision::lcm;
using boost::multiprecision::numerator;

namespace {

// Fraction-free (Edmonds) phase-1 simplex over an integer tableau. The true
// tableau is T/q throughout; q equals the last pivot and stays positive, so
// all sign and ratio comparisons can be made on the integer entries directly.
// A Le row whose (sign-normalized) right-hand side is nonnegative starts with
// its slack basic; only the remaining rows get artificial columns.
struct Phase1 {
  int m, cols, rhs_col;
  std::vector<std::vector<BigInt>> T;  // m constraint rows + objective row
  BigInt q = 1;
  std::vector<int> basis;
  std::vector<int> slack_col;  // per row, -1 if none

  Phase1(int m_, int structural_cols, const std::vector<bool>& negated,
         const std::vector<bool>& has_slack)
      : m(m_), slack_col(m_, -1) {
    int n_art = 0;
    for (int i = 0; i < m; ++i) n_art += (negated[i] || !has_slack[i]) ? 1 : 0;
    cols = structural_cols + n_art + 1;  // + artificials + rhs
    rhs_col = cols - 1;
    T.assign(m + 1, std::vector<BigInt>(cols, 0));
    basis.assign(m, -1);
  }

  // Called after the caller filled structural entries (slacks included) and
  // the rhs column, with every row sign-normalized to rhs >= 0.
  void finalize_rows() {
    int art = rhs_col - 1;
    auto& obj = T[m];
    for (int i = m - 1; i >= 0; --i) {
      if (slack_col[i] >= 0 && T[i][slack_col[i]] > 0) {
        basis[i] = slack_col[i];
        continue;
      }
      T[i][art] = 1;
      basis[i] = art--;
      // Objective: minimize the artificial sum; with artificial i basic,
      // w gains rhs_i - row_i . x, so positive entries mark improving cols.
      for (int j = 0; j <= rhs_col; ++j) {
        if (j > art && j < rhs_col) continue;  // artificial block
        obj[j] += T[i][j];
      }
    }
  }

  void pivot(int r, int c) {
    const BigInt p = T[r][c];
    assert(p > 0);
    for (int i = 0; i <= m; ++i) {
      if (i == r) continue;
      const BigInt f = T[i][c];
      for (int j = 0; j < cols; ++j) {
        T[i][j] = (T[i][j] * p - f * T[r][j]) / q;  // exact by Edmonds
      }
      T[i][c] = 0;
    }
    q = p;
    basis[r] = c;
  }

  bool run() {
    for (;;) {
      // Bland: lowest-index improving column.
      int c = -1;
      for (int j = 0; j < rhs_col; ++j) {
        if (T[m][j] > 0) {
          c = j;
          break;
        }
      }
      if (c < 0) return T[m][rhs_col] == 0;
      int r = -1;
      for (int i = 0; i < m; ++i) {
        if (T[i][c] <= 0) continue;
        if (r < 0) {
          r = i;
          continue;
        }
        // Compare ratios rhs_i/T_ic exactly; break ties by basic index.
        const BigInt lhs = T[i][rhs_col] * T[r][c];
        const BigInt rhs = T[r][rhs_col] * T[i][c];
        if (lhs < rhs || (lhs == rhs && basis[i] < basis[r])) r = i;
      }
      if (r < 0) throw std::logic_error("phase-1 simplex: unbounded objective");
      pivot(r, c);
    }
  }

  BigRat value_of(int col) const {
    for (int i = 0; i < m; ++i) {
      if (basis[i] == col) return BigRat(T[i][rhs_col], q);
    }
    return BigRat(0);
  }
};

}  // namespace

LinearFeasibility phase1_feasible(const std::vector<std::vector<BigInt>>& rows,
                                  const std::vector<Rel>& rels,
                                  const std::vector<BigInt>& rhs,
                                  bool nonneg) {
  const int m = static_cast<int>(rows.size());
  if (rels.size() != rows.size() || rhs.size() != rows.size()) {
    throw std::invalid_argument("phase1_feasible: rows/relations/rhs sizes differ");
  }
  const int n = m == 0 ? 0 : static_cast<int>(rows[0].size());
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != n) throw std::invalid_argument("phase1_feasible: ragged rows");
  }
  if (m == 0) return {true, std::vector<BigRat>(0)};

  int slacks = 0;
  std::vector<bool> negated(m), has_slack(m);
  for (int i = 0; i < m; ++i) {
    negated[i] = rhs[i] < 0;
    has_slack[i] = rels[i] == Rel::Le;
    slacks += has_slack[i] ? 1 : 0;
  }
  const int var_cols = nonneg ? n : 2 * n;
  Phase1 tab(m, var_cols + slacks, negated, has_slack);
  int slack_at = var_cols;
  for (int i = 0; i < m; ++i) {
    const int s = negated[i] ? -1 : 1;
    for (int j = 0; j < n; ++j) {
      if (nonneg) {
        tab.T[i][j] = s * rows[i][j];
      } else {
        tab.T[i][2 * j] = s * rows[i][j];
        tab.T[i][2 * j + 1] = -s * rows[i][j];
      }
    }
    if (has_slack[i]) {
      tab.slack_col[i] = slack_at;
      tab.T[i][slack_at++] = s;
    }
    tab.T[i][tab.rhs_col] = s * rhs[i];
  }
  tab.finalize_rows();
  if (!tab.run()) return {false, {}};

  LinearFeasibility out;
  out.feasible = true;
  out.witness.resize(n);
  for (int j = 0; j < n; ++j) {
    out.witness[j] = nonneg ? tab.value_of(j) : tab.value_of(2 * j) - tab.value_of(2 * j + 1);
  }
  return out;
}

LinearFeasibility solve_linear_feasibility(const std::vector<std::vector<BigRat>>& rows,
                                           const std::vector<Rel>& rels,
                                           const std::vector<BigRat>& rhs) {
  if (rels.size() != rows.size() || rhs.size() != rows.size()) {
    throw std::invalid_argument("solve_linear_feasibility: rows/relations/rhs sizes differ");
  }
  const size_t n = rows.empty() ? 0 : rows[0].size();
  std::vector<std::vector<BigInt>> irows(rows.size());
  std::vector<BigInt> irhs(rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != n) throw std::invalid_argument("solve_linear_feasibility: ragged rows");
    BigInt scale = denominator(rhs[i]);
    for (const auto& a : rows[i]) scale = lcm(scale, denominator(a));
    irows[i].reserve(n);
    for (const auto& a : rows[i]) irows[i].push_back(numerator(a) * (scale / denominator(a)));
    irhs[i] = numerator(rhs[i]) * (scale / denominator(rhs[i]));
  }
  return phase1_feasible(irows, rels, irhs, /*nonneg=*/false);
}

bool strict_cone_feasible_1d(const std::vector<BigInt>& coeffs) {
  // a*t <= -1 rows: a zero row is 0 <= -1; mixed signs force t both above a
  // positive bound and below a negative one.
  bool pos = false, neg = false;
  for (const auto& a : coeffs) {
    if (a == 0) return false;
    (a > 0 ? pos : neg) = true;
  }
  return !(pos && neg);
}

bool strict_cone_feasible_2d(const std::vector<std::array<BigInt, 2>>& coeffs) {
  // Scaling t makes { c_i . t <= -1 } equivalent to { c_i . t < 0 }, which by
  // Gordan's theorem holds iff every c_i lies strictly inside some open
  // halfplane through the origin. That in turn holds iff some c_i sees every
  // other c_j in the closed counterclockwise half-turn starting at c_i, with
  // the antipodal ray excluded.
  const int m = static_cast<int>(coeffs.size());
  for (const auto& c : coeffs) {
    if (c[0] == 0 && c[1] == 0) return false;
  }
  BigInt cross, dot;
  for (int i = 0; i < m; ++i) {
    bool ok = true;
    for (int j = 0; j < m && ok; ++j) {
      if (j == i) continue;
      cross = coeffs[i][0] * coeffs[j][1] - coeffs[i][1] * coeffs[j][0];
      if (cross < 0) {
        ok = false;
      } else if (cross == 0) {
        dot = coeffs[i][0] * coeffs[j][0] + coeffs[i][1] * coeffs[j][1];
        ok = dot > 0;
      }
    }
    if (ok) return true;
  }
  return m == 0;
}

int rank_of(std::vector<std::vector<BigRat>> rows) {
  const int m = static_cast<int>(rows.size());
  const int n = m == 0 ? 0 : static_cast<int>(rows[0].size());
  int r = 0;
  for (int col = 0; col < n && r < m; ++col) {
    int piv = -1;
    for (int i = r; i < m; ++i) {
      if (rows[i][col] != 0) {
        piv = i;
        break;
      }
    }
    if (piv < 0) continue;
    std::swap(rows[r], rows[piv]);
    for (int i = r + 1; i < m; ++i) {
      if (rows[i][col] == 0) continue;
      const BigRat f = rows[i][col] / rows[r][col];
      for (int j = col; j < n; ++j) rows[i][j] -= f * rows[r][j];
    }
    ++r;
  }
  return r;
}

std::vector<std::vector<BigInt>> nullspace_basis(const std::vector<std::vector<BigRat>>& rows_in) {
  auto rows = rows_in;
  const int m = static_cast<int>(rows.size());
  const int n = m == 0 ? 0 : static_cast<int>(rows[0].size());
  std::vector<std::pair<int, int>> pivots;  // (row, col) of the reduced form
  int r = 0;
  for (int col = 0; col < n && r < m; ++col) {
    int piv = -1;
    for (int i = r; i < m; ++i) {
      if (rows[i][col] != 0) {
        piv = i;
        break;
      }
    }
    if (piv < 0) continue;
    std::swap(rows[r], rows[piv]);
    const BigRat p = rows[r][col];
    for (int j = col; j < n; ++j) rows[r][j] /= p;
    for (int i = 0; i < m; ++i) {
      if (i == r || rows[i][col] == 0) continue;
      const BigRat f = rows[i][col];
      for (int j = col; j < n; ++j) rows[i][j] -= f * rows[r][j];
    }
    pivots.emplace_back(r, col);
    ++r;
  }
  std::vector<bool> is_pivot(n, false);
  for (auto [pr, pc] : pivots) is_pivot[pc] = true;
  std::vector<std::vector<BigInt>> basis;
  for (int f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    std::vector<BigRat> u(n, BigRat(0));
    u[f] = 1;
    for (auto [pr, pc] : pivots) u[pc] = -rows[pr][f];
    BigInt scale = 1;
    for (const auto& v : u) scale = lcm(scale, denominator(v));
    std::vector<BigInt> iu(n);
    for (int j = 0; j < n; ++j) iu[j] = numerator(u[j]) * (scale / denominator(u[j]));
    basis.push_back(std::move(iu));
  }
  return basis;
}

}  // namespace conefaces::lpsolve
