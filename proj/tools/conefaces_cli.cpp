// Command-line front end: exact queries, asymptotic queries, Monte Carlo
// simulation, and regime sweeps with CSV/SVG output.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "conefaces/asymptotics.hpp"
#include "conefaces/bigcomb.hpp"
#include "conefaces/conegeom.hpp"
#include "conefaces/experiments.hpp"
#include "conefaces/types.hpp"

using namespace conefaces;

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string frac(const BigRat& q) {
  const BigInt num = numerator(q);
  const BigInt den = denominator(q);
  std::string s = num.str();
  if (den != 1) s += "/" + den.str();
  return s;
}

ConeModel parse_model(const std::string& name) {
  if (name == "dt") return ConeModel::DonohoTanner;
  if (name == "ce") return ConeModel::CoverEfron;
  throw std::domain_error("unknown model '" + name + "' (expected dt or ce)");
}

int default_threads() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

// Accumulates "key value" lines; everything the machine side needs to parse.
struct Report {
  std::ostringstream os;
  void kv(const std::string& key, const std::string& value) { os << key << ' ' << value << '\n'; }
  void kv(const std::string& key, int value) { kv(key, std::to_string(value)); }
  void kv(const std::string& key, long value) { kv(key, std::to_string(value)); }
  void kv(const std::string& key, double value) { kv(key, fmt17(value)); }
  void kv(const std::string& key, const BigRat& value) { kv(key, frac(value)); }
};

void write_text(const std::string& text, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    if (!std::cout) throw std::runtime_error("write to standard output failed");
    return;
  }
  std::ofstream os(out_path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + out_path);
  os << text;
  os.flush();
  if (!os) throw std::runtime_error("write failed for " + out_path);
}

void emit_rational(Report& r, const std::string& name, const BigRat& value) {
  r.kv(name, value);
  r.kv(name + "_decimal", to_double(value));
}

double z_score(double mean, double se, const BigRat& exact) {
  const double ref = to_double(exact);
  if (se > 0.0) return (mean - ref) / se;
  return mean == ref ? 0.0 : std::numeric_limits<double>::infinity();
}

// ---- exact ----------------------------------------------------------------

struct ExactArgs {
  int d = 0, N = 0, k = 0;
  std::string model = "dt";
  std::string out;
};

void register_exact(CLI::App& app, ExactArgs& a) {
  CLI::App* exact = app.add_subcommand("exact", "exact rational quantities");
  exact->require_subcommand(1);

  const auto add_common = [&](CLI::App* sub, bool with_k, bool with_model) {
    sub->add_option("--d", a.d, "ambient dimension")->required();
    sub->add_option("--N", a.N, "number of generators")->required();
    if (with_k) sub->add_option("--k", a.k, "face dimension")->required();
    if (with_model) sub->add_option("--model", a.model, "cone model: dt or ce");
    sub->add_option("--out", a.out, "output path (default: stdout)");
  };

  CLI::App* wendel = exact->add_subcommand("wendel", "Wendel probability P_{d,N}");
  add_common(wendel, false, false);
  wendel->callback([&a] {
    Report r;
    r.kv("query", "exact.wendel");
    r.kv("d", a.d);
    r.kv("N", a.N);
    emit_rational(r, "wendel", bigcomb::wendel_probability(a.d, a.N));
    write_text(r.os.str(), a.out);
  });

  CLI::App* quotient = exact->add_subcommand("quotient", "expected k-face fraction E f_k / C(N,k)");
  add_common(quotient, true, true);
  quotient->callback([&a] {
    const ConeIndex idx{a.d, a.N, a.k};
    idx.validate();
    const ConeModel model = parse_model(a.model);
    Report r;
    r.kv("query", "exact.quotient");
    r.kv("model", a.model);
    r.kv("d", a.d);
    r.kv("N", a.N);
    r.kv("k", a.k);
    emit_rational(r, "quotient",
                  model == ConeModel::DonohoTanner ? bigcomb::quotient_dt(idx)
                                                   : bigcomb::quotient_ce(idx));
    write_text(r.os.str(), a.out);
  });

  CLI::App* expected = exact->add_subcommand("expected", "expected k-face count E f_k");
  add_common(expected, true, true);
  expected->callback([&a] {
    const ConeIndex idx{a.d, a.N, a.k};
    idx.validate();
    Report r;
    r.kv("query", "exact.expected");
    r.kv("model", a.model);
    r.kv("d", a.d);
    r.kv("N", a.N);
    r.kv("k", a.k);
    emit_rational(r, "expected", bigcomb::expected_faces(idx, parse_model(a.model)));
    write_text(r.os.str(), a.out);
  });

  CLI::App* difference = exact->add_subcommand("difference", "face deficit C(N,k) - E f_k");
  add_common(difference, true, true);
  difference->callback([&a] {
    const ConeIndex idx{a.d, a.N, a.k};
    idx.validate();
    Report r;
    r.kv("query", "exact.difference");
    r.kv("model", a.model);
    r.kv("d", a.d);
    r.kv("N", a.N);
    r.kv("k", a.k);
    emit_rational(r, "difference", bigcomb::difference(idx, parse_model(a.model)));
    write_text(r.os.str(), a.out);
  });

  CLI::App* bound = exact->add_subcommand("bound", "dimension-only quotient bound (2^d-2^k)/(2^d-1)");
  bound->add_option("--d", a.d, "ambient dimension")->required();
  bound->add_option("--k", a.k, "face dimension")->required();
  bound->add_option("--out", a.out, "output path (default: stdout)");
  bound->callback([&a] {
    Report r;
    r.kv("query", "exact.bound");
    r.kv("d", a.d);
    r.kv("k", a.k);
    emit_rational(r, "bound", bigcomb::ce_upper_bound(a.d, a.k));
    write_text(r.os.str(), a.out);
  });
}

// ---- asymptotic -----------------------------------------------------------

struct AsymptoticArgs {
  double delta = 0.0, rho = 0.0, c = 0.0, b = 0.0, tol = 1e-13;
  int d = 0, N = 0;
  std::string kind = "ce";
  std::string out;
};

void register_asymptotic(CLI::App& app, AsymptoticArgs& a) {
  CLI::App* asym = app.add_subcommand("asymptotic", "threshold curves and window limits");
  asym->require_subcommand(1);

  CLI::App* rw = asym->add_subcommand("rho-weak", "weak threshold max{0, 2 - 1/delta}");
  rw->add_option("--delta", a.delta, "d/N limit")->required();
  rw->add_option("--out", a.out, "output path (default: stdout)");
  rw->callback([&a] {
    Report r;
    r.kv("query", "asymptotic.rho-weak");
    r.kv("delta", a.delta);
    r.kv("rho_weak", asymptotics::rho_weak(a.delta));
    write_text(r.os.str(), a.out);
  });

  CLI::App* rs = asym->add_subcommand("rho-strong", "strong threshold: zero of G(delta,.)");
  rs->add_option("--delta", a.delta, "d/N limit")->required();
  rs->add_option("--tol", a.tol, "residual tolerance (default 1e-13)");
  rs->add_option("--out", a.out, "output path (default: stdout)");
  rs->callback([&a] {
    const double rho = asymptotics::rho_strong(a.delta, a.tol);
    Report r;
    r.kv("query", "asymptotic.rho-strong");
    r.kv("delta", a.delta);
    r.kv("rho_strong", rho);
    r.kv("residual", asymptotics::g_exponent(a.delta, rho));
    write_text(r.os.str(), a.out);
  });

  CLI::App* g = asym->add_subcommand("g", "exponent G(delta, rho)");
  g->add_option("--delta", a.delta, "d/N limit")->required();
  g->add_option("--rho", a.rho, "k/d limit")->required();
  g->add_option("--out", a.out, "output path (default: stdout)");
  g->callback([&a] {
    Report r;
    r.kv("query", "asymptotic.g");
    r.kv("delta", a.delta);
    r.kv("rho", a.rho);
    r.kv("g", asymptotics::g_exponent(a.delta, a.rho));
    write_text(r.os.str(), a.out);
  });

  CLI::App* wl = asym->add_subcommand("window-limit", "critical-window quotient limits");
  wl->add_option("--kind", a.kind, "ce, wendel, or ratio")->required();
  wl->add_option("--rho", a.rho, "k/d limit (kind ce)");
  wl->add_option("--c", a.c, "window constant")->required();
  wl->add_option("--b", a.b, "k ~ b*sqrt(d) constant (kind ratio)");
  wl->add_option("--out", a.out, "output path (default: stdout)");
  wl->callback([&a] {
    Report r;
    r.kv("query", "asymptotic.window-limit");
    r.kv("kind", a.kind);
    r.kv("c", a.c);
    if (a.kind == "ce") {
      r.kv("rho", a.rho);
      r.kv("limit", asymptotics::window_limit_ce(a.rho, a.c));
    } else if (a.kind == "wendel") {
      r.kv("limit", asymptotics::window_limit_wendel(a.c));
    } else if (a.kind == "ratio") {
      r.kv("b", a.b);
      r.kv("limit", asymptotics::window_limit_ratio(a.c, a.b));
    } else {
      throw std::domain_error("unknown window-limit kind '" + a.kind + "'");
    }
    write_text(r.os.str(), a.out);
  });

  CLI::App* bounds = asym->add_subcommand("bounds", "exponential binomial-tail bounds");
  bounds->add_option("--d", a.d, "ambient dimension")->required();
  bounds->add_option("--N", a.N, "number of generators")->required();
  bounds->add_option("--out", a.out, "output path (default: stdout)");
  bounds->callback([&a] {
    Report r;
    r.kv("query", "asymptotic.bounds");
    r.kv("d", a.d);
    r.kv("N", a.N);
    bool any = false;
    try {
      const double u = asymptotics::okamoto_upper_tail_bound(a.d, a.N);
      r.kv("okamoto_upper", u);
      any = true;
    } catch (const std::domain_error&) {
    }
    try {
      const double l = asymptotics::okamoto_lower_tail_bound(a.d, a.N);
      r.kv("okamoto_lower", l);
      any = true;
    } catch (const std::domain_error&) {
    }
    if (!any) {
      throw std::domain_error("neither tail-bound hypothesis holds for d=" + std::to_string(a.d) +
                              ", N=" + std::to_string(a.N));
    }
    write_text(r.os.str(), a.out);
  });
}

// ---- simulate ---------------------------------------------------------------

struct SimulateArgs {
  int d = 0, N = 0, k = 0;
  long trials = 10000;
  uint64_t seed = 0;
  int threads = default_threads();
  double min_acceptance = 0.01;
  std::string model = "dt";
  std::string out;
};

void register_simulate(CLI::App& app, SimulateArgs& a) {
  CLI::App* sim = app.add_subcommand("simulate", "geometric Monte Carlo estimates");
  sim->require_subcommand(1);

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--d", a.d, "ambient dimension")->required();
    sub->add_option("--N", a.N, "number of generators")->required();
    sub->add_option("--trials", a.trials, "trial count (default 10000)");
    sub->add_option("--seed", a.seed, "RNG seed (default 0)");
    sub->add_option("--threads", a.threads, "worker threads (default: all cores)");
    sub->add_option("--out", a.out, "output path (default: stdout)");
  };

  CLI::App* wendel = sim->add_subcommand("wendel", "estimate the Wendel probability");
  add_common(wendel);
  wendel->callback([&a] {
    conegeom::SimulationConfig cfg;
    cfg.d = a.d;
    cfg.N = a.N;
    cfg.trials = a.trials;
    cfg.seed = a.seed;
    cfg.threads = a.threads;
    const conegeom::Estimate e = conegeom::estimate_wendel(cfg);
    const BigRat exact = bigcomb::wendel_probability(a.d, a.N);
    Report r;
    r.kv("query", "simulate.wendel");
    r.kv("d", a.d);
    r.kv("N", a.N);
    r.kv("trials", e.trials);
    r.kv("seed", fmt17(static_cast<double>(a.seed)));
    r.kv("estimate", e.mean);
    r.kv("stderr", e.stderr_of_mean);
    r.kv("degenerate", e.degenerate);
    emit_rational(r, "exact", exact);
    r.kv("z", z_score(e.mean, e.stderr_of_mean, exact));
    write_text(r.os.str(), a.out);
  });

  CLI::App* faces = sim->add_subcommand("faces", "estimate the expected k-face count");
  add_common(faces);
  faces->add_option("--k", a.k, "face dimension")->required();
  faces->add_option("--model", a.model, "cone model: dt or ce");
  faces->add_option("--min-acceptance", a.min_acceptance,
                    "CE rejection-sampling floor (default 0.01)");
  faces->callback([&a] {
    const ConeModel model = parse_model(a.model);
    conegeom::SimulationConfig cfg;
    cfg.d = a.d;
    cfg.N = a.N;
    cfg.k = a.k;
    cfg.trials = a.trials;
    cfg.seed = a.seed;
    cfg.min_acceptance = a.min_acceptance;
    cfg.threads = a.threads;
    const conegeom::Estimate e = conegeom::estimate_faces(cfg, model);
    const BigRat exact = bigcomb::expected_faces(ConeIndex{a.d, a.N, a.k}, model);
    Report r;
    r.kv("query", "simulate.faces");
    r.kv("model", a.model);
    r.kv("d", a.d);
    r.kv("N", a.N);
    r.kv("k", a.k);
    r.kv("trials", a.trials);
    r.kv("seed", fmt17(static_cast<double>(a.seed)));
    r.kv("estimate", e.mean);
    r.kv("stderr", e.stderr_of_mean);
    r.kv("accepted", e.trials);
    r.kv("rejected", e.rejected);
    r.kv("degenerate", e.degenerate);
    r.kv("low_acceptance", e.low_acceptance ? "1" : "0");
    emit_rational(r, "exact", exact);
    r.kv("z", z_score(e.mean, e.stderr_of_mean, exact));
    write_text(r.os.str(), a.out);
    if (e.low_acceptance) {
      std::cerr << "warning: CE acceptance rate fell below the configured floor ("
                << fmt17(a.min_acceptance) << "); estimate uses " << e.trials
                << " accepted trials out of " << e.trials + e.rejected << " attempts\n";
    }
  });
}

// ---- sweep ------------------------------------------------------------------

struct SweepArgs {
  std::string regime;
  double delta = 0.0, rho = 0.0, c = 0.0, alpha = 0.5;
  int k = 0;
  std::string window_mode = "upper";
  int d_from = 0, d_to = 0, d_step = 1;
  uint64_t seed = 0;
  int threads = default_threads();
  std::string out;
  std::string svg;
};

experiments::SequenceSpec sweep_spec(const SweepArgs& a) {
  experiments::SequenceSpec spec;
  spec.delta = a.delta;
  if (a.regime == "fixed-ratio") {
    spec.regime = experiments::Regime::FixedRatio;
    spec.rho = a.rho;
  } else if (a.regime == "fixed-k") {
    spec.regime = experiments::Regime::FixedK;
    spec.k_fixed = a.k;
  } else if (a.regime == "sqrt-window") {
    spec.regime = experiments::Regime::SqrtWindow;
    spec.window.mode = asymptotics::WindowMode::SqrtWindow;
    spec.window.c = a.c;
    spec.window.alpha = 0.5;
  } else if (a.regime == "power-window") {
    spec.regime = experiments::Regime::PowerWindow;
    spec.window.c = a.c;
    spec.window.alpha = a.alpha;
    if (a.window_mode == "upper") {
      spec.window.mode = asymptotics::WindowMode::UpperPower;
    } else if (a.window_mode == "two-sided") {
      spec.window.mode = asymptotics::WindowMode::TwoSidedPower;
    } else if (a.window_mode == "lower") {
      spec.window.mode = asymptotics::WindowMode::LowerPower;
    } else {
      throw std::domain_error("unknown window mode '" + a.window_mode +
                              "' (expected upper, two-sided, or lower)");
    }
  } else if (a.regime == "oscillating") {
    spec.regime = experiments::Regime::Oscillating;
  } else {
    throw std::domain_error("unknown regime '" + a.regime + "'");
  }
  return spec;
}

void register_sweep(CLI::App& app, SweepArgs& a) {
  CLI::App* sweep = app.add_subcommand("sweep", "regime sweeps: CSV and optional SVG");
  sweep->add_option("--regime", a.regime,
                    "fixed-ratio, fixed-k, sqrt-window, power-window, or oscillating")
      ->required();
  sweep->add_option("--delta", a.delta, "d/N target")->required();
  sweep->add_option("--rho", a.rho, "k/d target (fixed-ratio)");
  sweep->add_option("--k", a.k, "fixed face dimension (fixed-k)");
  sweep->add_option("--c", a.c, "window constant");
  sweep->add_option("--alpha", a.alpha, "window exponent (power-window)");
  sweep->add_option("--window-mode", a.window_mode, "upper, two-sided, or lower (power-window)");
  sweep->add_option("--d-from", a.d_from, "first d")->required();
  sweep->add_option("--d-to", a.d_to, "last d")->required();
  sweep->add_option("--d-step", a.d_step, "d increment (default 1)");
  sweep->add_option("--seed", a.seed, "accepted for interface symmetry; sweeps are exact");
  sweep->add_option("--threads", a.threads, "worker threads (default: all cores)");
  sweep->add_option("--out", a.out, "CSV output path (default: stdout)");
  sweep->add_option("--svg", a.svg, "also write an SVG line plot to this path");
  sweep->callback([&a] {
    if (a.d_from < 1 || a.d_to < a.d_from || a.d_step < 1) {
      throw std::domain_error("need 1 <= d-from <= d-to and d-step >= 1");
    }
    const experiments::SequenceSpec spec = sweep_spec(a);
    std::vector<int> ds;
    for (int d = a.d_from; d <= a.d_to; d += a.d_step) ds.push_back(d);

    std::vector<std::vector<experiments::SweepRow>> parts;
    if (spec.regime == experiments::Regime::Oscillating) {
      parts.push_back(run_difference_sweep(spec, ds, ConeModel::DonohoTanner));
      parts.push_back(run_difference_sweep(spec, ds, ConeModel::CoverEfron));
    } else {
      parts.push_back(run_quotient_sweep(spec, ds));
      if (spec.regime == experiments::Regime::FixedRatio && a.delta > 0.5 && a.delta < 1.0 &&
          a.rho > 0.0 && a.rho < asymptotics::rho_weak(a.delta)) {
        parts.push_back(run_difference_sweep(spec, ds, ConeModel::DonohoTanner));
        parts.push_back(run_difference_sweep(spec, ds, ConeModel::CoverEfron));
      }
    }
    const std::vector<experiments::SweepRow> rows = experiments::merge_rows(parts);

    if (a.out.empty() || a.out == "-") {
      emit_csv(rows, std::cout);
      if (!std::cout) throw std::runtime_error("write to standard output failed");
    } else {
      emit_csv(rows, a.out);
    }
    if (!a.svg.empty()) {
      std::vector<std::string> ys;
      const auto add_if_present = [&](const char* name, auto member) {
        for (const auto& r : rows) {
          if (r.*member) {
            ys.push_back(name);
            return;
          }
        }
      };
      add_if_present("quotient_dt", &experiments::SweepRow::quotient_dt);
      add_if_present("quotient_ce", &experiments::SweepRow::quotient_ce);
      add_if_present("diff_log_dt", &experiments::SweepRow::diff_log_dt);
      add_if_present("diff_log_ce", &experiments::SweepRow::diff_log_ce);
      emit_svg_lineplot(rows, "d", ys, a.svg);
    }
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact and asymptotic face statistics of random convex cones"};
  app.require_subcommand(1);

  ExactArgs exact_args;
  AsymptoticArgs asym_args;
  SimulateArgs sim_args;
  SweepArgs sweep_args;
  register_exact(app, exact_args);
  register_asymptotic(app, asym_args);
  register_simulate(app, sim_args);
  register_sweep(app, sweep_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const SubsetCapError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const RootSolveError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
