#include "conefaces/conegeom.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <random>
#include <stdexcept>

#include "conefaces/bigcomb.hpp"
#include "conefaces/lpsolve.hpp"

namespace conefaces::conegeom {

namespace {

// Mantissa bits retained when sampling. Full binary64 mantissas make the
// exact-arithmetic predicates needlessly heavy; 44 bits keeps degenerate
// minors astronomically unlikely while shrinking every downstream integer.
constexpr int kMantissaBits = 44;

uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

uint64_t trial_seed(uint64_t seed, long trial) {
  return splitmix64(seed ^ splitmix64(static_cast<uint64_t>(trial) + 0x9E3779B97F4A7C15ULL));
}

bool audit_trial(uint64_t seed, long trial) {
  return splitmix64(trial_seed(seed, trial) ^ 0xA5A5A5A5A5A5A5A5ULL) % 100 == 0;
}

// Integer fraction-free Gauss-Jordan elimination (Edmonds pivoting): on exit
// the real reduced form equals M/q, every pivot entry equals q, and the rank
// is the number of pivots. Exact throughout.
struct IntRref {
  std::vector<std::vector<BigInt>> M;
  BigInt q = 1;
  std::vector<std::pair<int, int>> pivots;  // (row, col)

  explicit IntRref(std::vector<std::vector<BigInt>> rows) : M(std::move(rows)) {
    const int m = static_cast<int>(M.size());
    const int n = m == 0 ? 0 : static_cast<int>(M[0].size());
    int r = 0;
    for (int c = 0; c < n && r < m; ++c) {
      int piv = -1;
      for (int i = r; i < m; ++i) {
        if (M[i][c] != 0) {
          piv = i;
          break;
        }
      }
      if (piv < 0) continue;
      std::swap(M[r], M[piv]);
      const BigInt p = M[r][c];
      for (int i = 0; i < m; ++i) {
        if (i == r) continue;
        const BigInt f = M[i][c];
        for (int j = 0; j < n; ++j) M[i][j] = (M[i][j] * p - f * M[r][j]) / q;
        M[i][c] = 0;
      }
      // Rescale the pivot row so all pivot entries equal the final divisor.
      q = p;
      pivots.emplace_back(r, c);
      ++r;
    }
    // Bring earlier pivot rows to the common divisor: row r was frozen at its
    // own pivot step, so its real value is M[r]/q already by the invariant.
  }

  int rank() const { return static_cast<int>(pivots.size()); }

  // Basis of the right nullspace (integer vectors).
  std::vector<std::vector<BigInt>> nullspace() const {
    const int m = static_cast<int>(M.size());
    const int n = m == 0 ? 0 : static_cast<int>(M[0].size());
    std::vector<int> pivot_row_of(n, -1);
    for (auto [pr, pc] : pivots) pivot_row_of[pc] = pr;
    std::vector<std::vector<BigInt>> basis;
    for (int f = 0; f < n; ++f) {
      if (pivot_row_of[f] >= 0) continue;
      std::vector<BigInt> u(n, BigInt(0));
      u[f] = q;
      for (auto [pr, pc] : pivots) u[pc] = -M[pr][f];
      basis.push_back(std::move(u));
    }
    return basis;
  }
};

}  // namespace

VectorSample::VectorSample(int d, int N, uint64_t seed, std::vector<double> pts)
    : d_(d), N_(N), seed_(seed), pts_(std::move(pts)) {
  if (d_ < 1 || N_ < 1) throw std::domain_error("VectorSample: need d >= 1, N >= 1");
  if (pts_.size() != static_cast<size_t>(d_) * N_) {
    throw std::invalid_argument("VectorSample: points size mismatch");
  }
  // Exact dyadic form: x = m * 2^e with a 53-bit integer m; a common scale
  // 2^scale_pow clears every exponent.
  const size_t n = pts_.size();
  std::vector<int64_t> mant(n);
  std::vector<int> expo(n);
  int min_e = 0;
  for (size_t i = 0; i < n; ++i) {
    if (pts_[i] == 0.0) {
      mant[i] = 0;
      expo[i] = 0;
      continue;
    }
    int e;
    const double f = std::frexp(pts_[i], &e);
    int64_t m = static_cast<int64_t>(std::ldexp(f, 53));
    e -= 53;
    while (m % 2 == 0) {  // keep the dyadic form minimal
      m /= 2;
      ++e;
    }
    mant[i] = m;
    expo[i] = e;
    min_e = std::min(min_e, e);
  }
  scale_pow_ = -min_e;
  ints_.resize(n);
  for (size_t i = 0; i < n; ++i) {
    ints_[i] = BigInt(mant[i]) << (expo[i] - min_e);
  }
}

VectorSample VectorSample::from_points(int d, int N, std::vector<double> pts) {
  return VectorSample(d, N, 0, std::move(pts));
}

VectorSample sample_points(int d, int N, uint64_t seed) {
  if (d < 1 || N < 1) throw std::domain_error("sample_points: need d >= 1, N >= 1");
  std::mt19937_64 eng(seed);
  const auto uniform = [&eng]() { return static_cast<double>(eng() >> 11) * 0x1.0p-53; };
  std::vector<double> pts(static_cast<size_t>(d) * N);
  double spare = 0.0;
  bool have_spare = false;
  for (auto& x : pts) {
    double z;
    if (have_spare) {
      z = spare;
      have_spare = false;
    } else {
      const double u1 = 1.0 - uniform();  // (0, 1]
      const double u2 = uniform();
      const double r = std::sqrt(-2.0 * std::log(u1));
      z = r * std::cos(2.0 * 3.14159265358979323846 * u2);
      spare = r * std::sin(2.0 * 3.14159265358979323846 * u2);
      have_spare = true;
    }
    // Keep kMantissaBits of mantissa so exact arithmetic stays light.
    if (z != 0.0) {
      int e;
      const double f = std::frexp(z, &e);
      z = std::ldexp(std::nearbyint(std::ldexp(f, kMantissaBits)), e - kMantissaBits);
    }
    x = z;
  }
  return VectorSample(d, N, seed, std::move(pts));
}

namespace {

std::vector<std::vector<BigInt>> exact_rows(const VectorSample& s) {
  std::vector<std::vector<BigInt>> rows(s.N(), std::vector<BigInt>(s.d()));
  for (int i = 0; i < s.N(); ++i)
    for (int j = 0; j < s.d(); ++j) rows[i][j] = s.exact_at(i, j);
  return rows;
}

void require_full_rank(const VectorSample& s) {
  if (s.N() < s.d()) throw std::domain_error("covers_space: need N >= d");
  if (IntRref(exact_rows(s)).rank() < s.d()) {
    throw DegenerateSampleError("sample is rank-deficient");
  }
}

// Feasibility of { <u, x_i> >= 0 for all i, sum_i <u, x_i> = 1 }: a nonzero
// functional witnessing that the positive hull misses some open halfspace.
bool support_functional_exists(const VectorSample& s) {
  const int d = s.d(), N = s.N();
  std::vector<std::vector<BigInt>> rows(N + 1, std::vector<BigInt>(d, BigInt(0)));
  std::vector<lpsolve::Rel> rels(N + 1, lpsolve::Rel::Le);
  std::vector<BigInt> rhs(N + 1, BigInt(0));
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < d; ++j) {
      rows[i][j] = -s.exact_at(i, j);
      rows[N][j] += s.exact_at(i, j);
    }
  }
  rels[N] = lpsolve::Rel::Eq;
  rhs[N] = 1;
  return lpsolve::phase1_feasible(rows, rels, rhs, /*nonneg=*/false).feasible;
}

// Feasibility of { sum_i lambda_i x_i = 0, sum lambda_i = 1, lambda >= 0 }:
// the origin as a convex combination.
bool origin_in_hull(const VectorSample& s) {
  const int d = s.d(), N = s.N();
  std::vector<std::vector<BigInt>> rows(d + 1, std::vector<BigInt>(N));
  std::vector<lpsolve::Rel> rels(d + 1, lpsolve::Rel::Eq);
  std::vector<BigInt> rhs(d + 1, BigInt(0));
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < N; ++i) rows[j][i] = s.exact_at(i, j);
  for (int i = 0; i < N; ++i) rows[d][i] = 1;
  rhs[d] = 1;
  return lpsolve::phase1_feasible(rows, rels, rhs, /*nonneg=*/true).feasible;
}

}  // namespace

bool covers_space(const VectorSample& sample) {
  require_full_rank(sample);
  // The polar cone is nonzero iff the hull misses the origin or touches it on
  // the boundary; the hull test separates those two cases.
  if (!support_functional_exists(sample)) return true;
  if (origin_in_hull(sample)) {
    throw DegenerateSampleError("origin on the boundary of the convex hull");
  }
  return false;
}

bool has_separating_functional(const VectorSample& sample) {
  const int d = sample.d(), N = sample.N();
  std::vector<std::vector<BigInt>> rows(N, std::vector<BigInt>(d));
  std::vector<lpsolve::Rel> rels(N, lpsolve::Rel::Le);
  std::vector<BigInt> rhs(N, BigInt(-1));
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < d; ++j) rows[i][j] = -sample.exact_at(i, j);
  return lpsolve::phase1_feasible(rows, rels, rhs, /*nonneg=*/false).feasible;
}

bool is_face(const VectorSample& sample, const std::vector<int>& subset) {
  const int d = sample.d(), N = sample.N();
  const int k = static_cast<int>(subset.size());
  if (k < 1 || k >= d) throw std::domain_error("is_face: need 1 <= |subset| < d");
  std::vector<bool> in_subset(N, false);
  for (int idx : subset) {
    if (idx < 0 || idx >= N) throw std::domain_error("is_face: subset index out of range");
    if (in_subset[idx]) throw std::domain_error("is_face: repeated subset index");
    in_subset[idx] = true;
  }

  // Eliminate the k equalities <u, x_j> = 0 exactly: u = B t with B an
  // integer nullspace basis of the subset rows.
  std::vector<std::vector<BigInt>> eq(k, std::vector<BigInt>(d));
  for (int r = 0; r < k; ++r)
    for (int j = 0; j < d; ++j) eq[r][j] = sample.exact_at(subset[r], j);
  IntRref rref(std::move(eq));
  if (rref.rank() < k) throw DegenerateSampleError("is_face: subset is linearly dependent");
  const auto basis = rref.nullspace();
  const int m = static_cast<int>(basis.size());
  assert(m == d - k);

  // Remaining constraints <u, x_i> <= -1 become <B^T x_i, t> <= -1 (the
  // right-hand side is scale-free for a cone).
  std::vector<std::vector<BigInt>> reduced(N - k, std::vector<BigInt>(m));
  int out = 0;
  for (int i = 0; i < N; ++i) {
    if (in_subset[i]) continue;
    for (int b = 0; b < m; ++b) {
      BigInt dot = 0;
      for (int j = 0; j < d; ++j) dot += basis[b][j] * sample.exact_at(i, j);
      reduced[out][b] = std::move(dot);
    }
    ++out;
  }

  if (m == 1) {
    std::vector<BigInt> c(reduced.size());
    for (size_t i = 0; i < reduced.size(); ++i) c[i] = reduced[i][0];
    return lpsolve::strict_cone_feasible_1d(c);
  }
  if (m == 2) {
    std::vector<std::array<BigInt, 2>> c(reduced.size());
    for (size_t i = 0; i < reduced.size(); ++i) c[i] = {reduced[i][0], reduced[i][1]};
    return lpsolve::strict_cone_feasible_2d(c);
  }
  std::vector<lpsolve::Rel> rels(reduced.size(), lpsolve::Rel::Le);
  std::vector<BigInt> rhs(reduced.size(), BigInt(-1));
  return lpsolve::phase1_feasible(reduced, rels, rhs, /*nonneg=*/false).feasible;
}

namespace {

long count_k_faces_pointed(const VectorSample& sample, int k) {
  const int N = sample.N();
  long count = 0;
  std::vector<int> subset(k);
  for (int i = 0; i < k; ++i) subset[i] = i;
  for (;;) {
    if (is_face(sample, subset)) ++count;
    int i = k - 1;
    while (i >= 0 && subset[i] == N - k + i) --i;
    if (i < 0) break;
    ++subset[i];
    for (int j = i + 1; j < k; ++j) subset[j] = subset[j - 1] + 1;
  }
  return count;
}

}  // namespace

long count_k_faces(const VectorSample& sample, int k) {
  if (k < 1 || k >= sample.d()) throw std::domain_error("count_k_faces: need 1 <= k < d");
  if (bigcomb::binomial(sample.N(), k) > kSubsetCap) {
    throw SubsetCapError("count_k_faces: C(N,k) exceeds the enumeration cap");
  }
  if (covers_space(sample)) return 0;
  return count_k_faces_pointed(sample, k);
}

namespace {

struct TrialOutcome {
  bool degenerate = false;
  bool covers = false;
  long faces = 0;  // only meaningful when counting was requested
};

// One trial: sample, decide coverage (with the 1% dual audit), optionally
// count faces of pointed samples.
TrialOutcome run_trial(const SimulationConfig& cfg, long trial, bool want_faces) {
  TrialOutcome out;
  const VectorSample s = sample_points(cfg.d, cfg.N, trial_seed(cfg.seed, trial));
  try {
    out.covers = covers_space(s);
    if (audit_trial(cfg.seed, trial) && has_separating_functional(s) == out.covers) {
      throw std::logic_error("coverage/separation duality audit failed");
    }
    if (want_faces && !out.covers) out.faces = count_k_faces_pointed(s, cfg.k);
  } catch (const DegenerateSampleError&) {
    out.degenerate = true;
  }
  return out;
}

void validate_common(const SimulationConfig& cfg) {
  if (cfg.trials < 1) throw std::domain_error("SimulationConfig: trials must be >= 1");
  if (cfg.threads < 1) throw std::domain_error("SimulationConfig: threads must be >= 1");
}

Estimate finish_counts(const std::vector<long>& values) {
  // Integer sums keep the result independent of accumulation order.
  Estimate e;
  const long T = static_cast<long>(values.size());
  e.trials = T;
  if (T == 0) return e;
  BigInt sum = 0, sumsq = 0;
  for (long v : values) {
    sum += v;
    sumsq += BigInt(v) * v;
  }
  e.mean = to_double(BigRat(sum, BigInt(T)));
  if (T > 1) {
    const BigRat var = (BigRat(sumsq) - BigRat(sum * sum, BigInt(T))) / BigInt(T - 1);
    e.stderr_of_mean = std::sqrt(std::max(0.0, to_double(var)) / static_cast<double>(T));
  }
  return e;
}

}  // namespace

Estimate estimate_wendel(const SimulationConfig& cfg) {
  if (cfg.d < 1 || cfg.N <= cfg.d) throw std::domain_error("estimate_wendel: need 1 <= d < N");
  validate_common(cfg);
  long misses = 0, effective = 0, degenerate = 0;
  for (long t = 0; t < cfg.trials; ++t) {
    const TrialOutcome o = run_trial(cfg, t, /*want_faces=*/false);
    if (o.degenerate) {
      ++degenerate;
      continue;
    }
    ++effective;
    misses += o.covers ? 0 : 1;
  }
  Estimate e;
  e.trials = effective;
  e.degenerate = degenerate;
  if (effective > 0) {
    e.mean = to_double(BigRat(misses, BigInt(effective)));
    if (effective > 1) {
      // Bernoulli sample variance S(T-S)/(T(T-1)).
      const double var =
          to_double(BigRat(BigInt(misses) * (effective - misses),
                           BigInt(effective) * (effective - 1)));
      e.stderr_of_mean = std::sqrt(var / static_cast<double>(effective));
    }
  }
  return e;
}

Estimate estimate_faces(const SimulationConfig& cfg, ConeModel model) {
  const ConeIndex idx{cfg.d, cfg.N, cfg.k};
  idx.validate();
  validate_common(cfg);
  if (!(cfg.min_acceptance > 0.0 && cfg.min_acceptance <= 1.0)) {
    throw std::domain_error("SimulationConfig: min_acceptance must lie in (0,1]");
  }
  if (bigcomb::binomial(cfg.N, cfg.k) > kSubsetCap) {
    throw SubsetCapError("estimate_faces: C(N,k) exceeds the enumeration cap");
  }

  std::vector<long> counts;
  counts.reserve(cfg.trials);
  long degenerate = 0, rejected = 0;
  Estimate e;
  if (model == ConeModel::DonohoTanner) {
    for (long t = 0; t < cfg.trials; ++t) {
      const TrialOutcome o = run_trial(cfg, t, /*want_faces=*/true);
      if (o.degenerate) {
        ++degenerate;
        continue;
      }
      counts.push_back(o.covers ? 0 : o.faces);
    }
    e = finish_counts(counts);
  } else {
    // Cover-Efron: condition on pointedness. `trials` is the accepted-sample
    // target; scanning stops at the deterministic attempt cap.
    const long cap = static_cast<long>(std::ceil(static_cast<double>(cfg.trials) / cfg.min_acceptance));
    long t = 0;
    for (; t < cap && static_cast<long>(counts.size()) < cfg.trials; ++t) {
      const TrialOutcome o = run_trial(cfg, t, /*want_faces=*/true);
      if (o.degenerate) {
        ++degenerate;
        continue;
      }
      if (o.covers) {
        ++rejected;
        continue;
      }
      counts.push_back(o.faces);
    }
    e = finish_counts(counts);
    const long attempts = static_cast<long>(counts.size()) + rejected;
    const double rate = attempts > 0 ? static_cast<double>(counts.size()) / attempts : 0.0;
    e.low_acceptance = static_cast<long>(counts.size()) < cfg.trials || rate < cfg.min_acceptance;
  }
  e.rejected = rejected;
  e.degenerate = degenerate;
  return e;
}

}  // namespace conefaces::conegeom
