#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "conefaces/asymptotics.hpp"
#include "conefaces/bigcomb.hpp"
#include "conefaces/experiments.hpp"

using namespace conefaces;
using namespace conefaces::experiments;

namespace {

SequenceSpec fixed_ratio(double delta, double rho) {
  SequenceSpec s;
  s.regime = Regime::FixedRatio;
  s.delta = delta;
  s.rho = rho;
  return s;
}

SequenceSpec fixed_k(double delta, int k) {
  SequenceSpec s;
  s.regime = Regime::FixedK;
  s.delta = delta;
  s.k_fixed = k;
  return s;
}

SequenceSpec sqrt_window(double delta, double c) {
  SequenceSpec s;
  s.regime = Regime::SqrtWindow;
  s.delta = delta;
  s.window.mode = asymptotics::WindowMode::SqrtWindow;
  s.window.c = c;
  s.window.alpha = 0.5;
  return s;
}

SequenceSpec power_window(double delta, asymptotics::WindowMode mode, double c, double alpha) {
  SequenceSpec s;
  s.regime = Regime::PowerWindow;
  s.delta = delta;
  s.window.mode = mode;
  s.window.c = c;
  s.window.alpha = alpha;
  return s;
}

SequenceSpec oscillating(double delta) {
  SequenceSpec s;
  s.regime = Regime::Oscillating;
  s.delta = delta;
  return s;
}

std::vector<int> range(int lo, int hi, int step) {
  std::vector<int> out;
  for (int d = lo; d <= hi; d += step) out.push_back(d);
  return out;
}

// Extracts the points="..." payload of the i-th polyline element.
std::string polyline_points(const std::string& svg, int index) {
  size_t pos = 0;
  for (int i = 0; i <= index; ++i) {
    pos = svg.find("<polyline", pos);
    REQUIRE(pos != std::string::npos);
    pos += 9;
  }
  const size_t start = svg.find("points=\"", pos);
  REQUIRE(start != std::string::npos);
  const size_t end = svg.find('"', start + 8);
  REQUIRE(end != std::string::npos);
  return svg.substr(start + 8, end - start - 8);
}

int count_char(const std::string& s, char c) {
  return static_cast<int>(std::count(s.begin(), s.end(), c));
}

}  // namespace

TEST_CASE("make_sequence: fixed-ratio rounding") {
  const auto spec = fixed_ratio(0.75, 0.5);
  const ConeIndex idx = make_sequence(spec, 300);
  CHECK(idx.d == 300);
  CHECK(idx.N == 400);
  CHECK(idx.k == 150);

  // Half-up rounding keeps the realized ratios within 1/d of the targets.
  for (int d = 8; d <= 400; d += 7) {
    const ConeIndex t = make_sequence(spec, d);
    CHECK(std::fabs(static_cast<double>(t.N) / t.d - 1.0 / 0.75) <= 1.0 / t.d);
    CHECK(std::fabs(static_cast<double>(t.k) / t.d - 0.5) <= 1.0 / t.d);
    CHECK(t.k < t.d);
    CHECK(t.d < t.N);
  }

  const auto spec2 = fixed_ratio(0.6, 0.3);
  const ConeIndex u = make_sequence(spec2, 100);
  CHECK(u.N == 167);  // 100/0.6 = 166.67 rounds up
  CHECK(u.k == 30);
}

TEST_CASE("make_sequence: sqrt window hits N - 2d + k = round(c sqrt(d))") {
  const auto spec = sqrt_window(0.75, 0.0);
  for (int m = 1; m <= 40; ++m) {
    const ConeIndex idx = make_sequence(spec, 3 * m);
    CHECK(idx.N == 4 * m);
    CHECK(idx.k == 2 * m);
    CHECK(idx.N - 2 * idx.d + idx.k == 0);
  }
  const auto pos = sqrt_window(0.75, 2.0);
  const ConeIndex w = make_sequence(pos, 300);
  CHECK(w.N == 400);
  // c*sqrt(300) = 34.64 -> 35, so k = 2d - N + 35.
  CHECK(w.k == 2 * 300 - 400 + 35);
}

TEST_CASE("make_sequence: fixed-k and validity floor") {
  const auto spec = fixed_k(0.5, 3);
  const ConeIndex idx = make_sequence(spec, 100);
  CHECK(idx.d == 100);
  CHECK(idx.N == 200);
  CHECK(idx.k == 3);

  CHECK_THROWS_AS(make_sequence(spec, 3), std::domain_error);   // k < d fails
  CHECK_NOTHROW(make_sequence(spec, 4));                        // (4, 8, 3) is fine
  CHECK_THROWS_AS(make_sequence(fixed_ratio(0.75, 0.5), 1), std::domain_error);
  // Deep negative window forces k <= 0 at small d.
  const auto neg = sqrt_window(0.75, -8.0);
  CHECK_THROWS_AS(make_sequence(neg, 30), std::domain_error);
}

TEST_CASE("make_sequence: spec validation") {
  CHECK_THROWS_AS(make_sequence(fixed_ratio(0.0, 0.5), 100), std::domain_error);
  CHECK_THROWS_AS(make_sequence(fixed_ratio(1.0, 0.5), 100), std::domain_error);
  CHECK_THROWS_AS(make_sequence(fixed_ratio(0.75, 0.0), 100), std::domain_error);
  CHECK_THROWS_AS(make_sequence(fixed_ratio(0.75, 1.0), 100), std::domain_error);
  CHECK_THROWS_AS(make_sequence(fixed_k(0.5, 0), 100), std::domain_error);
  // Window mode must match the regime.
  SequenceSpec bad = sqrt_window(0.75, 0.0);
  bad.window.mode = asymptotics::WindowMode::TwoSidedPower;
  bad.window.alpha = 0.3;
  CHECK_THROWS_AS(make_sequence(bad, 100), std::domain_error);
  SequenceSpec bad2 = power_window(0.75, asymptotics::WindowMode::UpperPower, 1.0, 0.75);
  bad2.window.mode = asymptotics::WindowMode::SqrtWindow;
  bad2.window.alpha = 0.5;
  CHECK_THROWS_AS(make_sequence(bad2, 100), std::domain_error);
}

TEST_CASE("oscillating_construction: residual, bracket, parity") {
  const double delta = 0.8;
  const double rho_s = asymptotics::rho_strong(delta);
  for (int d = 100; d <= 120; ++d) {
    const OscillatingPoint pt = oscillating_construction(delta, d);
    const int N = static_cast<int>(std::floor(d / delta));
    CHECK(pt.idx.N == N);
    const double expected_level =
        ((d % 2 == 0 ? 0.5 : -0.5) + 1.0) * std::log(static_cast<double>(N)) / N;
    CHECK(pt.level == doctest::Approx(expected_level).epsilon(1e-15));
    CHECK(std::fabs(asymptotics::g_exponent(delta, pt.rho_of_d) - pt.level) <= 1e-12);
    CHECK(pt.rho_of_d > rho_s);
    CHECK(pt.rho_of_d < asymptotics::rho_weak(delta));
    CHECK(pt.idx.k == static_cast<int>(std::floor(pt.rho_of_d * d)));
    CHECK(pt.idx.k > 0);
    CHECK(pt.idx.k < pt.idx.d);
    CHECK(pt.idx.d < pt.idx.N);
  }
  CHECK_THROWS_AS(oscillating_construction(0.5, 100), std::domain_error);
  CHECK_THROWS_AS(oscillating_construction(1.0, 100), std::domain_error);
}

TEST_CASE("predicted_quotient_limit per regime") {
  CHECK(*predicted_quotient_limit(fixed_ratio(0.75, 0.5)) == 1.0);
  CHECK(*predicted_quotient_limit(fixed_ratio(0.75, 0.7)) == 0.0);
  // Exactly on the weak threshold: limit 1/2.
  const double rw = asymptotics::rho_weak(0.75);
  CHECK(*predicted_quotient_limit(fixed_ratio(0.75, rw)) == 0.5);

  // Sqrt window: Phi(-c / sqrt(2(1-rho_W))).
  const auto sq = sqrt_window(0.75, 0.0);
  CHECK(*predicted_quotient_limit(sq) == doctest::Approx(0.5).epsilon(1e-15));
  const auto sq1 = sqrt_window(0.75, 1.0);
  const double expect = asymptotics::window_limit_ce(rw, 1.0);
  CHECK(*predicted_quotient_limit(sq1) == doctest::Approx(expect).epsilon(1e-15));

  CHECK(*predicted_quotient_limit(power_window(0.75, asymptotics::WindowMode::UpperPower, 1.0, 0.75)) ==
        0.0);
  CHECK(*predicted_quotient_limit(
            power_window(0.75, asymptotics::WindowMode::TwoSidedPower, 1.0, 0.25)) == 0.5);
  CHECK(*predicted_quotient_limit(power_window(0.75, asymptotics::WindowMode::LowerPower, -1.0, 0.75)) ==
        1.0);

  CHECK(*predicted_quotient_limit(fixed_k(0.5, 3)) == 1.0);
  CHECK(*predicted_quotient_limit(fixed_k(0.75, 2)) == 1.0);
  CHECK(*predicted_quotient_limit(fixed_k(0.25, 2)) == doctest::Approx(0.25).epsilon(1e-15));

  CHECK(!predicted_quotient_limit(oscillating(0.8)).has_value());
}

TEST_CASE("run_quotient_sweep: subcritical and supercritical fixed ratio") {
  const auto ds = range(30, 300, 30);

  auto rows = run_quotient_sweep(fixed_ratio(0.75, 0.5), ds);
  REQUIRE(rows.size() == 10);
  for (size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].d == ds[i]);
    CHECK(rows[i].delta_d == doctest::Approx(0.75).epsilon(0.05));
    CHECK(rows[i].rho_d == doctest::Approx(0.5).epsilon(0.05));
    REQUIRE(rows[i].quotient_ce.has_value());
    REQUIRE(rows[i].quotient_dt.has_value());
    CHECK(*rows[i].quotient_ce > 0.0);
    CHECK(*rows[i].quotient_ce < 1.0);
    REQUIRE(rows[i].predicted_limit.has_value());
    CHECK(*rows[i].predicted_limit == 1.0);
    CHECK(!rows[i].diff_log_dt.has_value());
    CHECK(!rows[i].envelope_ce.has_value());
    if (i > 0) CHECK(*rows[i].quotient_ce > *rows[i - 1].quotient_ce);
  }
  CHECK(*rows.back().quotient_ce >= 0.98);
  CHECK(*rows.back().quotient_ce == doctest::Approx(0.9992594169334359).epsilon(1e-12));

  // Input order must not matter: ascending output either way.
  auto shuffled = ds;
  std::reverse(shuffled.begin(), shuffled.end());
  const auto rows2 = run_quotient_sweep(fixed_ratio(0.75, 0.5), shuffled);
  REQUIRE(rows2.size() == rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows2[i].d == rows[i].d);
    CHECK(*rows2[i].quotient_ce == *rows[i].quotient_ce);
  }

  auto sup = run_quotient_sweep(fixed_ratio(0.75, 0.7), ds);
  for (size_t i = 1; i < sup.size(); ++i) CHECK(*sup[i].quotient_ce < *sup[i - 1].quotient_ce);
  CHECK(*sup.back().predicted_limit == 0.0);
  // Convergence toward 0 is slow near the threshold: the exact value at d=300
  // is ~0.234, and the 0.02 mark is first crossed around d ~ 2500.
  CHECK(*sup.back().quotient_ce == doctest::Approx(0.23353963193704325).epsilon(1e-12));
  const auto far = run_quotient_sweep(fixed_ratio(0.75, 0.7), {3000});
  CHECK(*far[0].quotient_ce <= 0.02);
  // The point z-symmetric to rho=0.5 about rho_W=2/3 is rho=0.8; there the
  // quotient is already ~7e-4 at d=300.
  const auto sym = run_quotient_sweep(fixed_ratio(0.75, 0.8), {300});
  CHECK(*sym[0].quotient_ce <= 0.02);
  CHECK(*sym[0].quotient_ce == doctest::Approx(0.00071723188021020098).epsilon(1e-12));
}

TEST_CASE("run_quotient_sweep: critical window and fixed k") {
  const auto win = run_quotient_sweep(sqrt_window(0.75, 0.0), {600});
  REQUIRE(win.size() == 1);
  CHECK(win[0].d == 600);
  CHECK(win[0].N == 800);
  CHECK(win[0].k == 400);
  CHECK(std::fabs(*win[0].quotient_ce - 0.5) < 1e-3);
  CHECK(*win[0].predicted_limit == doctest::Approx(0.5).epsilon(1e-15));

  const auto fk = run_quotient_sweep(fixed_k(0.25, 2), {400});
  CHECK(std::fabs(*fk[0].quotient_ce - 0.25) < 0.05);
  CHECK(*fk[0].predicted_limit == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("run_difference_sweep: decay below rho_S, growth between rho_S and rho_W") {
  const double delta = 0.8;
  const double rho_s = asymptotics::rho_strong(delta);
  const double rho_w = asymptotics::rho_weak(delta);
  const auto ds = range(100, 400, 50);

  const auto low = run_difference_sweep(fixed_ratio(delta, 0.5 * rho_s), ds,
                                        ConeModel::DonohoTanner);
  REQUIRE(low.size() == 7);
  for (const auto& r : low) {
    REQUIRE(r.diff_log_dt.has_value());
    REQUIRE(r.envelope_dt.has_value());
    CHECK(*r.envelope_dt > 0.0);
    CHECK(!r.diff_log_ce.has_value());
    CHECK(!r.quotient_dt.has_value());
  }
  CHECK(*low.back().diff_log_dt < std::log(1e-6));
  CHECK(*low.back().diff_log_dt == doctest::Approx(-48.46046793).epsilon(1e-6));

  const auto mid = run_difference_sweep(fixed_ratio(delta, (rho_s + rho_w) / 2), ds,
                                        ConeModel::CoverEfron);
  CHECK(*mid.back().diff_log_ce > std::log(1e6));
  CHECK(*mid.back().diff_log_ce == doctest::Approx(277.4149555).epsilon(1e-6));
  for (const auto& r : mid) {
    CHECK(*r.envelope_ce > 0.0);
    CHECK(!r.diff_log_dt.has_value());
  }

  // Envelope stays within a narrow band: regression-pinned max/min ratios.
  const auto ratio_of = [](const std::vector<SweepRow>& rows, bool dt) {
    double lo = 1e300, hi = 0;
    for (const auto& r : rows) {
      const double e = dt ? *r.envelope_dt : *r.envelope_ce;
      lo = std::min(lo, e);
      hi = std::max(hi, e);
    }
    return hi / lo;
  };
  CHECK(ratio_of(low, true) == doctest::Approx(1.12890804).epsilon(1e-6));
  CHECK(ratio_of(mid, false) == doctest::Approx(1.053785573).epsilon(1e-6));
  CHECK(ratio_of(low, true) < 1.6);
  CHECK(ratio_of(mid, false) < 1.6);

  // Classification agrees with the observed direction at d=400.
  CHECK(classify_difference(delta, 0.5 * rho_s) == DifferenceClass::ToZero);
  CHECK(classify_difference(delta, (rho_s + rho_w) / 2) == DifferenceClass::ToInfinity);
  CHECK((*low.back().diff_log_dt < 0.0) ==
        (classify_difference(delta, 0.5 * rho_s) == DifferenceClass::ToZero));
  CHECK((*mid.back().diff_log_ce > 0.0) ==
        (classify_difference(delta, (rho_s + rho_w) / 2) == DifferenceClass::ToInfinity));

  // Domain: fixed-ratio difference sweeps need 1/2 < delta < 1, 0 < rho < rho_W.
  CHECK_THROWS_AS(run_difference_sweep(fixed_ratio(0.4, 0.1), {100}, ConeModel::DonohoTanner),
                  std::domain_error);
  CHECK_THROWS_AS(run_difference_sweep(fixed_ratio(0.8, 0.8), {100}, ConeModel::DonohoTanner),
                  std::domain_error);
  CHECK_THROWS_AS(run_difference_sweep(sqrt_window(0.75, 0.0), {300}, ConeModel::DonohoTanner),
                  std::domain_error);
}

TEST_CASE("run_difference_sweep: oscillating even/odd alternation") {
  const auto ds = range(100, 110, 1);
  const auto rows = run_difference_sweep(oscillating(0.8), ds, ConeModel::DonohoTanner);
  REQUIRE(rows.size() == 11);
  for (size_t i = 0; i < rows.size(); ++i) {
    const int d = rows[i].d;
    REQUIRE(rows[i].diff_log_dt.has_value());
    if (d % 2 == 0) {
      if (i > 0) CHECK(*rows[i].diff_log_dt > *rows[i - 1].diff_log_dt);
      if (i + 1 < rows.size()) CHECK(*rows[i].diff_log_dt > *rows[i + 1].diff_log_dt);
    }
  }
}

TEST_CASE("emit_csv: golden format") {
  SweepRow full;
  full.d = 300;
  full.N = 400;
  full.k = 150;
  full.delta_d = 0.75;
  full.rho_d = 0.5;
  full.quotient_dt = 0.5;
  full.quotient_ce = 0.75;
  full.diff_log_dt = -1.5;
  full.diff_log_ce = 2.5;
  full.envelope_dt = 1.25;
  full.envelope_ce = 0.625;
  full.predicted_limit = 1.0;

  SweepRow partial;
  partial.d = 30;
  partial.N = 40;
  partial.k = 15;
  partial.delta_d = 0.75;
  partial.rho_d = 0.5;
  partial.quotient_ce = 1.0 / 3.0;

  std::ostringstream os;
  emit_csv({full, partial}, os);
  const std::string expected =
      "d,N,k,delta_d,rho_d,quotient_dt,quotient_ce,diff_log_dt,diff_log_ce,"
      "envelope_dt,envelope_ce,predicted_limit\n"
      "300,400,150,0.75,0.5,0.5,0.75,-1.5,2.5,1.25,0.625,1\n"
      "30,40,15,0.75,0.5,,0.33333333333333331,,,,,\n";
  CHECK(os.str() == expected);

  // Byte-identical on re-emission.
  std::ostringstream os2;
  emit_csv({full, partial}, os2);
  CHECK(os2.str() == os.str());

  CHECK_THROWS_AS(emit_csv({}, os), std::invalid_argument);
}

TEST_CASE("emit_csv: sweep output is deterministic") {
  const auto ds = range(30, 120, 30);
  std::ostringstream a, b;
  emit_csv(run_quotient_sweep(fixed_ratio(0.75, 0.5), ds), a);
  emit_csv(run_quotient_sweep(fixed_ratio(0.75, 0.5), ds), b);
  CHECK(a.str() == b.str());
  CHECK(a.str().substr(0, 6) == "d,N,k,");
  CHECK(count_char(a.str(), '\n') == 5);  // header + 4 rows
}

TEST_CASE("emit_svg_lineplot: structure") {
  const auto rows = run_quotient_sweep(fixed_ratio(0.75, 0.5), range(30, 90, 30));
  std::ostringstream os;
  emit_svg_lineplot(rows, "d", {"quotient_ce"}, os);
  const std::string svg = os.str();

  CHECK(svg.find("<svg xmlns=\"http://www.w3.org/2000/svg\"") == 0);
  CHECK(svg.rfind("</svg>\n") == svg.size() - 7);
  const std::string pts = polyline_points(svg, 0);
  CHECK(count_char(pts, ',') == 3);  // one x,y pair per sweep point
  CHECK(count_char(pts, ' ') == 2);
  // Dashed guide at the predicted limit, with label.
  CHECK(svg.find("stroke-dasharray") != std::string::npos);
  CHECK(svg.find("predicted limit 1") != std::string::npos);
  // Legend names the column.
  CHECK(svg.find(">quotient_ce</text>") != std::string::npos);
  // x-axis label.
  CHECK(svg.find(">d</text>") != std::string::npos);

  // Deterministic.
  std::ostringstream os2;
  emit_svg_lineplot(rows, "d", {"quotient_ce"}, os2);
  CHECK(os2.str() == svg);

  CHECK_THROWS_AS(emit_svg_lineplot(rows, "d", {"no_such_column"}, os), std::invalid_argument);
  CHECK_THROWS_AS(emit_svg_lineplot(rows, "bogus", {"quotient_ce"}, os), std::invalid_argument);
  CHECK_THROWS_AS(emit_svg_lineplot({}, "d", {"quotient_ce"}, os), std::invalid_argument);
}

TEST_CASE("emit_svg_lineplot: 5 percent y padding and no guide without limits") {
  SweepRow lo;
  lo.d = 10;
  lo.N = 20;
  lo.k = 5;
  lo.delta_d = 0.5;
  lo.rho_d = 0.5;
  lo.quotient_ce = 0.0;
  SweepRow hi = lo;
  hi.d = 20;
  hi.quotient_ce = 1.0;

  std::ostringstream os;
  emit_svg_lineplot({lo, hi}, "d", {"quotient_ce"}, os);
  const std::string svg = os.str();
  // Data spans [0,1]; padded axis is [-0.05, 1.05], visible in the tick labels.
  CHECK(svg.find(">-0.05</text>") != std::string::npos);
  CHECK(svg.find(">1.05</text>") != std::string::npos);
  CHECK(svg.find("stroke-dasharray") == std::string::npos);
  CHECK(svg.find("predicted limit") == std::string::npos);
}

TEST_CASE("merge_rows: combines quotient and difference families") {
  const auto ds = range(100, 200, 50);
  const auto spec = fixed_ratio(0.8, 0.02);
  const auto q = run_quotient_sweep(spec, ds);
  const auto diff = run_difference_sweep(spec, ds, ConeModel::DonohoTanner);
  const auto merged = merge_rows({q, diff});
  REQUIRE(merged.size() == q.size());
  for (size_t i = 0; i < merged.size(); ++i) {
    CHECK(merged[i].d == q[i].d);
    CHECK(*merged[i].quotient_ce == *q[i].quotient_ce);
    CHECK(*merged[i].diff_log_dt == *diff[i].diff_log_dt);
    CHECK(*merged[i].envelope_dt == *diff[i].envelope_dt);
    CHECK(!merged[i].diff_log_ce.has_value());
  }
  // Equal duplicate cells merge cleanly; unequal ones throw.
  CHECK_NOTHROW(merge_rows({q, q}));
  auto conflict = q;
  conflict[0].quotient_ce = 0.123;
  CHECK_THROWS_AS(merge_rows({q, conflict}), std::invalid_argument);
  // Mismatched grids throw.
  const auto other = run_quotient_sweep(spec, range(100, 150, 50));
  CHECK_THROWS_AS(merge_rows({q, other}), std::invalid_argument);
  CHECK(merge_rows({}).empty());
  CHECK(merge_rows({q}).size() == q.size());
}
