#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "conefaces/bigcomb.hpp"
#include "conefaces/conegeom.hpp"
#include "conefaces/lpsolve.hpp"

using namespace conefaces;
using namespace conefaces::conegeom;

namespace {

// Independent face decision straight from the definition: feasibility of
// { <u, x_j> = 0 on J, <u, x_i> <= -1 off J } via the rational simplex,
// bypassing the nullspace reduction and the 1D/2D kernels.
bool is_face_oracle(const VectorSample& s, const std::vector<int>& subset) {
  std::vector<bool> in(s.N(), false);
  for (int j : subset) in[j] = true;
  std::vector<std::vector<BigRat>> rows;
  std::vector<lpsolve::Rel> rels;
  std::vector<BigRat> rhs;
  for (int i = 0; i < s.N(); ++i) {
    std::vector<BigRat> row(s.d());
    for (int j = 0; j < s.d(); ++j) row[j] = BigRat(s.exact_at(i, j));
    rows.push_back(std::move(row));
    rels.push_back(in[i] ? lpsolve::Rel::Eq : lpsolve::Rel::Le);
    rhs.emplace_back(in[i] ? 0 : -1);
  }
  return lpsolve::solve_linear_feasibility(rows, rels, rhs).feasible;
}

long count_faces_oracle(const VectorSample& s, int k) {
  std::vector<int> subset(k);
  for (int i = 0; i < k; ++i) subset[i] = i;
  long count = 0;
  for (;;) {
    if (is_face_oracle(s, subset)) ++count;
    int i = k - 1;
    while (i >= 0 && subset[i] == s.N() - k + i) --i;
    if (i < 0) break;
    ++subset[i];
    for (int j = i + 1; j < k; ++j) subset[j] = subset[j - 1] + 1;
  }
  return count;
}

}  // namespace

TEST_CASE("sampling is deterministic in the seed") {
  const VectorSample a = sample_points(3, 5, 12345);
  const VectorSample b = sample_points(3, 5, 12345);
  const VectorSample c = sample_points(3, 5, 54321);
  CHECK(a.raw() == b.raw());
  CHECK(a.raw() != c.raw());
  CHECK(a.d() == 3);
  CHECK(a.N() == 5);
  CHECK(a.seed() == 12345);
  CHECK(a.distribution() == "standard-gaussian");
}

TEST_CASE("sampled coordinates look standard normal") {
  const int d = 10, N = 10000;  // 1e5 draws
  const VectorSample s = sample_points(d, N, 9001);
  double sum = 0, sumsq = 0;
  for (double x : s.raw()) {
    sum += x;
    sumsq += x * x;
  }
  const double n = static_cast<double>(d) * N;
  const double mean = sum / n;
  const double var = (sumsq - n * mean * mean) / (n - 1);
  CHECK(std::abs(mean) <= 4.0 / std::sqrt(n));
  CHECK(var == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("exact dyadic form matches the doubles") {
  // Hand-picked values pin the minimal representation and the common scale.
  const VectorSample s = VectorSample::from_points(1, 3, {0.5, -0.25, 3.0});
  CHECK(s.scale_pow() == 2);
  CHECK(s.exact_at(0, 0) == 2);
  CHECK(s.exact_at(1, 0) == -1);
  CHECK(s.exact_at(2, 0) == 12);

  const VectorSample g = sample_points(4, 6, 777);
  for (int i = 0; i < g.N(); ++i) {
    for (int j = 0; j < g.d(); ++j) {
      const BigRat exact(g.exact_at(i, j), BigInt(1) << g.scale_pow());
      CHECK(to_double(exact) == g.at(i, j));
    }
  }
}

TEST_CASE("sampled mantissas are truncated") {
  const VectorSample s = sample_points(3, 50, 31337);
  for (double x : s.raw()) {
    if (x == 0.0) continue;
    int e;
    const double m = std::ldexp(std::frexp(x, &e), 44);
    CHECK(m == std::nearbyint(m));
  }
}

TEST_CASE("covers_space hand cases") {
  CHECK(covers_space(VectorSample::from_points(1, 2, {1.0, -2.0})));
  CHECK_FALSE(covers_space(VectorSample::from_points(1, 3, {1.0, 2.0, 3.0})));
  CHECK(covers_space(VectorSample::from_points(2, 4, {1, 0, 0, 1, -1, 0, 0, -1})));
  CHECK(covers_space(VectorSample::from_points(2, 3, {1, 0, -1, 1, -1, -1})));
  CHECK_FALSE(covers_space(VectorSample::from_points(2, 3, {1, 0, 0, 1, 1, 1})));
  // Needs at least d points.
  CHECK_THROWS_AS(covers_space(VectorSample::from_points(3, 2, {1, 0, 0, 0, 1, 0})),
                  std::domain_error);
}

TEST_CASE("degenerate samples are flagged, not guessed") {
  // Rank-deficient: three collinear points in the plane.
  CHECK_THROWS_AS(covers_space(VectorSample::from_points(2, 3, {1, 0, -1, 0, 2, 0})),
                  DegenerateSampleError);
  // Origin exactly on the hull boundary: midpoint of (1,0) and (-1,0).
  CHECK_THROWS_AS(covers_space(VectorSample::from_points(2, 3, {1, 0, -1, 0, 0, 1})),
                  DegenerateSampleError);
}

TEST_CASE("coverage and strict separation are dual on generic samples") {
  int covering = 0;
  for (uint64_t seed = 0; seed < 150; ++seed) {
    const VectorSample s = sample_points(3, 6, seed);
    const bool covers = covers_space(s);
    covering += covers ? 1 : 0;
    CHECK(has_separating_functional(s) == !covers);
  }
  CHECK(covering > 30);  // P(cover) = 1/2 at (3,6)
  CHECK(covering < 120);
}

TEST_CASE("is_face hand cases in the plane") {
  const VectorSample quarter = VectorSample::from_points(2, 2, {1, 0, 0, 1});
  CHECK(is_face(quarter, {0}));
  CHECK(is_face(quarter, {1}));

  const VectorSample withInterior = VectorSample::from_points(2, 3, {1, 0, 0, 1, 1, 1});
  CHECK(is_face(withInterior, {0}));
  CHECK(is_face(withInterior, {1}));
  CHECK_FALSE(is_face(withInterior, {2}));  // interior ray

  // Covering sample: no proper face contains any generator.
  const VectorSample covering = VectorSample::from_points(2, 4, {1, 0, 0, 1, -1, 0, 0, -1});
  for (int i = 0; i < 4; ++i) CHECK_FALSE(is_face(covering, {i}));

  CHECK_THROWS_AS(is_face(quarter, {0, 1}), std::domain_error);  // |J| = d
  CHECK_THROWS_AS(is_face(quarter, {}), std::domain_error);
  CHECK_THROWS_AS(is_face(quarter, {5}), std::domain_error);
  CHECK_THROWS_AS(is_face(withInterior, {0, 0}), std::domain_error);
  // Dependent subset (antipodal pair) in d = 3.
  const VectorSample dep = VectorSample::from_points(3, 3, {1, 0, 0, -1, 0, 0, 0, 1, 0});
  CHECK_THROWS_AS(is_face(dep, {0, 1}), DegenerateSampleError);
}

TEST_CASE("pointed planar cones have exactly two extreme rays") {
  const VectorSample fan = VectorSample::from_points(2, 4, {1, 0, 0, 1, 1, 1, 2, 1});
  CHECK(count_k_faces(fan, 1) == 2);
  CHECK(is_face(fan, {0}));
  CHECK(is_face(fan, {1}));
  for (uint64_t seed = 0; seed < 80; ++seed) {
    const VectorSample s = sample_points(2, 4, seed);
    if (covers_space(s)) {
      CHECK(count_k_faces(s, 1) == 0);
    } else {
      CHECK(count_k_faces(s, 1) == 2);
    }
  }
}

TEST_CASE("face counts match the direct-definition oracle") {
  for (uint64_t seed = 0; seed < 40; ++seed) {
    for (int d = 2; d <= 4; ++d) {
      const int N = d + 3;
      const VectorSample s = sample_points(d, N, seed * 31 + d);
      if (covers_space(s)) continue;
      for (int k = 1; k < d; ++k) {
        CHECK(count_k_faces(s, k) == count_faces_oracle(s, k));
      }
    }
  }
}

TEST_CASE("generators of a face span faces themselves") {
  // Faces of faces are faces: every member of a face-spanning subset is an
  // extreme ray.
  for (uint64_t seed = 100; seed < 130; ++seed) {
    const VectorSample s = sample_points(4, 7, seed);
    if (covers_space(s)) continue;
    std::vector<int> pair(2);
    for (int a = 0; a < s.N(); ++a) {
      for (int b = a + 1; b < s.N(); ++b) {
        pair[0] = a;
        pair[1] = b;
        if (!is_face(s, pair)) continue;
        CHECK(is_face(s, {a}));
        CHECK(is_face(s, {b}));
      }
    }
  }
}

TEST_CASE("count_k_faces respects the subset cap") {
  std::vector<double> pts(static_cast<size_t>(5) * 83, 1.0);
  const VectorSample s = VectorSample::from_points(5, 83, pts);
  CHECK_THROWS_AS(count_k_faces(s, 4), SubsetCapError);  // C(83,4) > 1e6
  CHECK_THROWS_AS(count_k_faces(s, 0), std::domain_error);
  CHECK_THROWS_AS(count_k_faces(s, 5), std::domain_error);
}

TEST_CASE("wendel estimator agrees with the exact probability") {
  const struct {
    int d, N;
  } cases[] = {{1, 2}, {2, 4}, {3, 5}};
  for (const auto& c : cases) {
    SimulationConfig cfg;
    cfg.d = c.d;
    cfg.N = c.N;
    cfg.trials = 4000;
    cfg.seed = 5;
    const Estimate e = estimate_wendel(cfg);
    const double exact = to_double(bigcomb::wendel_probability(c.d, c.N));
    CHECK(e.trials == 4000);
    CHECK(e.degenerate == 0);
    CHECK(e.rejected == 0);
    CHECK(e.stderr_of_mean > 0);
    CHECK(std::abs(e.mean - exact) <= 4 * e.stderr_of_mean);
  }
  SimulationConfig bad;
  bad.d = 3;
  bad.N = 3;
  CHECK_THROWS_AS(estimate_wendel(bad), std::domain_error);
  bad.N = 5;
  bad.trials = 0;
  CHECK_THROWS_AS(estimate_wendel(bad), std::domain_error);
}

TEST_CASE("estimates are deterministic and thread-count independent") {
  SimulationConfig cfg;
  cfg.d = 3;
  cfg.N = 6;
  cfg.k = 1;
  cfg.trials = 300;
  cfg.seed = 99;
  const Estimate a = estimate_wendel(cfg);
  cfg.threads = 3;
  const Estimate b = estimate_wendel(cfg);
  CHECK(a.mean == b.mean);
  CHECK(a.stderr_of_mean == b.stderr_of_mean);

  const Estimate fa = estimate_faces(cfg, ConeModel::CoverEfron);
  cfg.threads = 1;
  const Estimate fb = estimate_faces(cfg, ConeModel::CoverEfron);
  CHECK(fa.mean == fb.mean);
  CHECK(fa.trials == fb.trials);
  CHECK(fa.rejected == fb.rejected);
}

TEST_CASE("face estimators track the exact expectations") {
  SimulationConfig cfg;
  cfg.d = 2;
  cfg.N = 4;
  cfg.k = 1;
  cfg.trials = 3000;
  cfg.seed = 11;
  const Estimate dt = estimate_faces(cfg, ConeModel::DonohoTanner);
  const double exact_dt = to_double(bigcomb::expected_faces({2, 4, 1}, ConeModel::DonohoTanner));
  CHECK(dt.rejected == 0);
  CHECK(std::abs(dt.mean - exact_dt) <= 4 * dt.stderr_of_mean);

  const Estimate ce = estimate_faces(cfg, ConeModel::CoverEfron);
  const double exact_ce = to_double(bigcomb::expected_faces({2, 4, 1}, ConeModel::CoverEfron));
  CHECK(ce.trials == 3000);
  CHECK(ce.rejected > 0);
  CHECK_FALSE(ce.low_acceptance);
  CHECK(std::abs(ce.mean - exact_ce) <= 4 * ce.stderr_of_mean);
}

TEST_CASE("accepted planar Cover-Efron cones count exactly two rays") {
  SimulationConfig cfg;
  cfg.d = 2;
  cfg.N = 3;
  cfg.k = 1;
  cfg.trials = 500;
  cfg.seed = 3;
  const Estimate e = estimate_faces(cfg, ConeModel::CoverEfron);
  CHECK(e.mean == 2.0);
  CHECK(e.stderr_of_mean == 0.0);
  CHECK(e.trials == 500);
  CHECK(e.rejected > 0);
}

TEST_CASE("low acceptance is flagged") {
  SimulationConfig cfg;
  cfg.d = 2;
  cfg.N = 12;
  cfg.k = 1;
  cfg.trials = 50;
  cfg.seed = 7;
  const Estimate e = estimate_faces(cfg, ConeModel::CoverEfron);
  // Acceptance P(pointed) = 12/2^11 ~ 0.6%, below the 1% floor.
  CHECK(e.low_acceptance);
  CHECK(e.trials + e.rejected <= 5000);

  cfg.min_acceptance = 0.0;
  CHECK_THROWS_AS(estimate_faces(cfg, ConeModel::CoverEfron), std::domain_error);
}

TEST_CASE("estimator validation") {
  SimulationConfig cfg;
  cfg.d = 3;
  cfg.N = 6;
  cfg.k = 3;  // k must be < d
  CHECK_THROWS_AS(estimate_faces(cfg, ConeModel::DonohoTanner), std::domain_error);
  cfg.k = 0;
  CHECK_THROWS_AS(estimate_faces(cfg, ConeModel::DonohoTanner), std::domain_error);
  cfg.d = 5;
  cfg.N = 83;
  cfg.k = 4;
  CHECK_THROWS_AS(estimate_faces(cfg, ConeModel::DonohoTanner), SubsetCapError);
}
