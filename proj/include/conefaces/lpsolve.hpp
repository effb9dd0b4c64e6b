#pragma once

#include <array>
#include <vector>

#include "conefaces/types.hpp"

namespace conefaces::lpsolve {

enum class Rel { Eq, Le };

struct LinearFeasibility {
  bool feasible = false;
  std::vector<BigRat> witness;  // one value per variable when feasible
};

// Decides feasibility of { rows[i] . x  (rels[i])  rhs[i] } over free real
// variables by an exact phase-1 simplex (fraction-free integer pivoting,
// Bland's anti-cycling rule). The witness is exact and satisfies every
// constraint; verified by the caller's tests, not trusted.
LinearFeasibility solve_linear_feasibility(const std::vector<std::vector<BigRat>>& rows,
                                           const std::vector<Rel>& rels,
                                           const std::vector<BigRat>& rhs);

// Integer-matrix variant used by the geometry predicates. `nonneg` constrains
// x >= 0; otherwise variables are free (split internally).
LinearFeasibility phase1_feasible(const std::vector<std::vector<BigInt>>& rows,
                                  const std::vector<Rel>& rels,
                                  const std::vector<BigInt>& rhs,
                                  bool nonneg);

// Exact feasibility of { a_i . t <= -1 } in one / two free variables.
// Complete decision procedures: 1D reduces to a sign condition, 2D enumerates
// basic points and falls back to the parallel-normal ray case.
bool strict_cone_feasible_1d(const std::vector<BigInt>& coeffs);
bool strict_cone_feasible_2d(const std::vector<std::array<BigInt, 2>>& coeffs);

// Rank of a rational matrix by Gaussian elimination (exact).
int rank_of(std::vector<std::vector<BigRat>> rows);

// Basis of { u : rows . u = 0 }, one vector per free column, denominators
// cleared to integers.
std::vector<std::vector<BigInt>> nullspace_basis(const std::vector<std::vector<BigRat>>& rows);

}  // namespace conefaces::lpsolve
