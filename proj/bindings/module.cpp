// Python bindings: exact rationals cross the boundary as fractions.Fraction.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "conefaces/asymptotics.hpp"
#include "conefaces/bigcomb.hpp"
#include "conefaces/conegeom.hpp"
#include "conefaces/experiments.hpp"
#include "conefaces/types.hpp"

namespace py = pybind11;
using namespace conefaces;

namespace {

py::object to_fraction(const BigRat& q) {
  static py::object fraction = py::module_::import("fractions").attr("Fraction");
  return fraction(numerator(q).str() + "/" + denominator(q).str());
}

ConeIndex make_index(int d, int N, int k) {
  ConeIndex idx{d, N, k};
  idx.validate();
  return idx;
}

conegeom::SimulationConfig make_config(int d, int N, int k, long trials, uint64_t seed,
                                       double min_acceptance, int threads) {
  conegeom::SimulationConfig cfg;
  cfg.d = d;
  cfg.N = N;
  cfg.k = k;
  cfg.trials = trials;
  cfg.seed = seed;
  cfg.min_acceptance = min_acceptance;
  cfg.threads = threads;
  return cfg;
}

py::dict row_to_dict(const experiments::SweepRow& r) {
  py::dict out;
  out["d"] = r.d;
  out["N"] = r.N;
  out["k"] = r.k;
  out["delta_d"] = r.delta_d;
  out["rho_d"] = r.rho_d;
  const auto put = [&out](const char* name, const std::optional<double>& v) {
    out[name] = v ? py::cast(*v) : py::none();
  };
  put("quotient_dt", r.quotient_dt);
  put("quotient_ce", r.quotient_ce);
  put("diff_log_dt", r.diff_log_dt);
  put("diff_log_ce", r.diff_log_ce);
  put("envelope_dt", r.envelope_dt);
  put("envelope_ce", r.envelope_ce);
  put("predicted_limit", r.predicted_limit);
  return out;
}

experiments::SequenceSpec make_spec(const std::string& regime, double delta, double rho, int k,
                                    double c, double alpha, const std::string& window_mode) {
  experiments::SequenceSpec spec;
  spec.delta = delta;
  if (regime == "fixed-ratio") {
    spec.regime = experiments::Regime::FixedRatio;
    spec.rho = rho;
  } else if (regime == "fixed-k") {
    spec.regime = experiments::Regime::FixedK;
    spec.k_fixed = k;
  } else if (regime == "sqrt-window") {
    spec.regime = experiments::Regime::SqrtWindow;
    spec.window.mode = asymptotics::WindowMode::SqrtWindow;
    spec.window.c = c;
    spec.window.alpha = 0.5;
  } else if (regime == "power-window") {
    spec.regime = experiments::Regime::PowerWindow;
    spec.window.c = c;
    spec.window.alpha = alpha;
    if (window_mode == "upper") {
      spec.window.mode = asymptotics::WindowMode::UpperPower;
    } else if (window_mode == "two-sided") {
      spec.window.mode = asymptotics::WindowMode::TwoSidedPower;
    } else if (window_mode == "lower") {
      spec.window.mode = asymptotics::WindowMode::LowerPower;
    } else {
      throw std::domain_error("unknown window mode '" + window_mode + "'");
    }
  } else if (regime == "oscillating") {
    spec.regime = experiments::Regime::Oscillating;
  } else {
    throw std::domain_error("unknown regime '" + regime + "'");
  }
  return spec;
}

}  // namespace

PYBIND11_MODULE(conefaces, m) {
  m.doc() = "exact and asymptotic face statistics of random convex cones";

  py::enum_<ConeModel>(m, "ConeModel")
      .value("DONOHO_TANNER", ConeModel::DonohoTanner)
      .value("COVER_EFRON", ConeModel::CoverEfron);

  py::register_exception<RootSolveError>(m, "RootSolveError");
  py::register_exception<SubsetCapError>(m, "SubsetCapError");
  py::register_exception<DegenerateSampleError>(m, "DegenerateSampleError");

  py::class_<conegeom::Estimate>(m, "Estimate")
      .def_readonly("mean", &conegeom::Estimate::mean)
      .def_readonly("stderr_of_mean", &conegeom::Estimate::stderr_of_mean)
      .def_readonly("trials", &conegeom::Estimate::trials)
      .def_readonly("rejected", &conegeom::Estimate::rejected)
      .def_readonly("degenerate", &conegeom::Estimate::degenerate)
      .def_readonly("low_acceptance", &conegeom::Estimate::low_acceptance)
      .def("__repr__", [](const conegeom::Estimate& e) {
        return "Estimate(mean=" + std::to_string(e.mean) +
               ", stderr=" + std::to_string(e.stderr_of_mean) +
               ", trials=" + std::to_string(e.trials) + ")";
      });

  // Exact quantities.
  m.def(
      "wendel_probability",
      [](int d, int N) { return to_fraction(bigcomb::wendel_probability(d, N)); }, py::arg("d"),
      py::arg("N"));
  m.def(
      "quotient",
      [](int d, int N, int k, ConeModel model) {
        const ConeIndex idx = make_index(d, N, k);
        return to_fraction(model == ConeModel::DonohoTanner ? bigcomb::quotient_dt(idx)
                                                            : bigcomb::quotient_ce(idx));
      },
      py::arg("d"), py::arg("N"), py::arg("k"), py::arg("model") = ConeModel::CoverEfron);
  m.def(
      "expected_faces",
      [](int d, int N, int k, ConeModel model) {
        return to_fraction(bigcomb::expected_faces(make_index(d, N, k), model));
      },
      py::arg("d"), py::arg("N"), py::arg("k"), py::arg("model"));
  m.def(
      "difference",
      [](int d, int N, int k, ConeModel model) {
        return to_fraction(bigcomb::difference(make_index(d, N, k), model));
      },
      py::arg("d"), py::arg("N"), py::arg("k"), py::arg("model"));
  m.def(
      "ce_upper_bound", [](int d, int k) { return to_fraction(bigcomb::ce_upper_bound(d, k)); },
      py::arg("d"), py::arg("k"));

  // Asymptotics.
  m.def("entropy_h", &asymptotics::entropy_h, py::arg("x"));
  m.def("g_exponent", &asymptotics::g_exponent, py::arg("delta"), py::arg("rho"));
  m.def("rho_weak", &asymptotics::rho_weak, py::arg("delta"));
  m.def("rho_strong", &asymptotics::rho_strong, py::arg("delta"), py::arg("tol") = 1e-13);
  m.def("normal_cdf", &asymptotics::normal_cdf, py::arg("x"));
  m.def("window_limit_ce", &asymptotics::window_limit_ce, py::arg("rho"), py::arg("c"));
  m.def("window_limit_wendel", &asymptotics::window_limit_wendel, py::arg("c"));
  m.def("window_limit_ratio", &asymptotics::window_limit_ratio, py::arg("c"), py::arg("b"));
  m.def("stirling_theta", &asymptotics::stirling_theta, py::arg("n"));
  m.def(
      "difference_envelope",
      [](int d, int N, int k, ConeModel model) {
        return asymptotics::difference_envelope(make_index(d, N, k), model);
      },
      py::arg("d"), py::arg("N"), py::arg("k"), py::arg("model"));

  // Monte Carlo.
  m.def(
      "estimate_wendel",
      [](int d, int N, long trials, uint64_t seed, int threads) {
        return conegeom::estimate_wendel(make_config(d, N, 0, trials, seed, 0.01, threads));
      },
      py::arg("d"), py::arg("N"), py::arg("trials") = 10000, py::arg("seed") = 0,
      py::arg("threads") = 1, py::call_guard<py::gil_scoped_release>());
  m.def(
      "estimate_faces",
      [](int d, int N, int k, ConeModel model, long trials, uint64_t seed, double min_acceptance,
         int threads) {
        return conegeom::estimate_faces(
            make_config(d, N, k, trials, seed, min_acceptance, threads), model);
      },
      py::arg("d"), py::arg("N"), py::arg("k"), py::arg("model"), py::arg("trials") = 10000,
      py::arg("seed") = 0, py::arg("min_acceptance") = 0.01, py::arg("threads") = 1,
      py::call_guard<py::gil_scoped_release>());

  // Sweeps.
  m.def(
      "quotient_sweep",
      [](const std::string& regime, double delta, double rho, int k, double c, double alpha,
         const std::string& window_mode, const std::vector<int>& d_list) {
        const auto rows =
            run_quotient_sweep(make_spec(regime, delta, rho, k, c, alpha, window_mode), d_list);
        py::list out;
        for (const auto& r : rows) out.append(row_to_dict(r));
        return out;
      },
      py::arg("regime"), py::arg("delta"), py::arg("rho") = 0.0, py::arg("k") = 0,
      py::arg("c") = 0.0, py::arg("alpha") = 0.5, py::arg("window_mode") = "upper",
      py::arg("d_list"));
  m.def(
      "difference_sweep",
      [](const std::string& regime, double delta, double rho, ConeModel model,
         const std::vector<int>& d_list) {
        const auto rows =
            run_difference_sweep(make_spec(regime, delta, rho, 0, 0.0, 0.5, "upper"), d_list, model);
        py::list out;
        for (const auto& r : rows) out.append(row_to_dict(r));
        return out;
      },
      py::arg("regime"), py::arg("delta"), py::arg("rho"), py::arg("model"), py::arg("d_list"));
  m.def(
      "sweep_csv",
      [](const std::string& regime, double delta, double rho, int k, double c, double alpha,
         const std::string& window_mode, const std::vector<int>& d_list) {
        const auto rows =
            run_quotient_sweep(make_spec(regime, delta, rho, k, c, alpha, window_mode), d_list);
        std::ostringstream os;
        emit_csv(rows, os);
        return os.str();
      },
      py::arg("regime"), py::arg("delta"), py::arg("rho") = 0.0, py::arg("k") = 0,
      py::arg("c") = 0.0, py::arg("alpha") = 0.5, py::arg("window_mode") = "upper",
      py::arg("d_list"));
}
