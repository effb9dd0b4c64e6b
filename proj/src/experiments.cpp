#include "conefaces/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "conefaces/bigcomb.hpp"

namespace conefaces::experiments {

namespace {

long half_up(double x) { return static_cast<long>(std::floor(x + 0.5)); }

ConeIndex checked_triple(int d, long N, long k) {
  if (k < 1 || k >= d || N <= d) {
    throw std::domain_error("make_sequence: d=" + std::to_string(d) +
                            " is below the regime's validity floor (needs 0 < k < d < N)");
  }
  ConeIndex idx{d, static_cast<int>(N), static_cast<int>(k)};
  idx.validate();
  return idx;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string fmt_px(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

void SequenceSpec::validate() const {
  const bool delta_open = delta > 0.0 && delta < 1.0;
  switch (regime) {
    case Regime::FixedRatio:
      if (!delta_open) throw std::domain_error("SequenceSpec: fixed-ratio needs delta in (0,1)");
      if (!(rho > 0.0 && rho < 1.0)) throw std::domain_error("SequenceSpec: fixed-ratio needs rho in (0,1)");
      return;
    case Regime::FixedK:
      if (!delta_open) throw std::domain_error("SequenceSpec: fixed-k needs delta in (0,1)");
      if (k_fixed < 1) throw std::domain_error("SequenceSpec: fixed-k needs k_fixed >= 1");
      return;
    case Regime::SqrtWindow:
      if (!delta_open) throw std::domain_error("SequenceSpec: sqrt-window needs delta in (0,1)");
      if (window.mode != asymptotics::WindowMode::SqrtWindow) {
        throw std::domain_error("SequenceSpec: sqrt-window regime needs a sqrt-window spec");
      }
      window.validate();
      return;
    case Regime::PowerWindow:
      if (!delta_open) throw std::domain_error("SequenceSpec: power-window needs delta in (0,1)");
      if (window.mode == asymptotics::WindowMode::SqrtWindow) {
        throw std::domain_error("SequenceSpec: power-window regime needs a power-window spec");
      }
      window.validate();
      return;
    case Regime::Oscillating:
      if (!(delta > 0.5 && delta < 1.0)) {
        throw std::domain_error("SequenceSpec: oscillating needs delta in (1/2,1)");
      }
      return;
  }
  throw std::domain_error("SequenceSpec: unknown regime");
}

ConeIndex make_sequence(const SequenceSpec& spec, int d) {
  spec.validate();
  if (d < 1) throw std::domain_error("make_sequence: d must be >= 1");
  switch (spec.regime) {
    case Regime::FixedRatio:
      return checked_triple(d, half_up(d / spec.delta), half_up(spec.rho * d));
    case Regime::FixedK:
      return checked_triple(d, half_up(d / spec.delta), spec.k_fixed);
    case Regime::SqrtWindow:
    case Regime::PowerWindow: {
      const long N = half_up(d / spec.delta);
      const long k = 2L * d - N + half_up(spec.window.c * std::pow(d, spec.window.alpha));
      return checked_triple(d, N, k);
    }
    case Regime::Oscillating:
      return oscillating_construction(spec.delta, d).idx;
  }
  throw std::domain_error("make_sequence: unknown regime");
}

OscillatingPoint oscillating_construction(double delta, int d) {
  if (!(delta > 0.5 && delta < 1.0)) {
    throw std::domain_error("oscillating_construction: delta must lie in (1/2,1)");
  }
  if (d < 2) throw std::domain_error("oscillating_construction: d must be >= 2");
  const int N = static_cast<int>(std::floor(d / delta));
  const double level = ((d % 2 == 0 ? 0.5 : -0.5) + 1.0) * std::log(static_cast<double>(N)) / N;
  const auto f = [&](double r) { return asymptotics::g_exponent(delta, r) - level; };

  double lo = asymptotics::rho_strong(delta) + 1e-9;
  double hi = asymptotics::rho_weak(delta);
  if (!(f(lo) < 0.0)) {
    throw RootSolveError("oscillating_construction: level not above G at the strong threshold (d=" + std::to_string(d) + ")");
  }
  for (int guard = 0; !(f(hi) > 0.0); ++guard) {
    // G keeps growing toward the weak ridge; widen toward 1 if needed.
    hi = (hi + 1.0) / 2.0;
    if (guard > 60 || hi >= 1.0 - 1e-12) {
      throw RootSolveError("oscillating_construction: no bracket up to rho -> 1 (d=" + std::to_string(d) + ")");
    }
  }
  while (std::nextafter(lo, hi) < hi) {
    const double mid = lo + (hi - lo) / 2.0;
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  const double rho = std::fabs(f(lo)) <= std::fabs(f(hi)) ? lo : hi;
  if (!(std::fabs(f(rho)) <= 1e-12)) {
    throw RootSolveError("oscillating_construction: residual above 1e-12 (d=" + std::to_string(d) + ")");
  }
  const long k = static_cast<long>(std::floor(rho * d));
  return {checked_triple(d, N, k), rho, level};
}

std::optional<double> predicted_quotient_limit(const SequenceSpec& spec) {
  spec.validate();
  switch (spec.regime) {
    case Regime::FixedRatio: {
      const double rw = asymptotics::rho_weak(spec.delta);
      if (std::fabs(spec.rho - rw) <= 1e-12) return 0.5;  // on the weak line
      return spec.rho < rw ? 1.0 : 0.0;
    }
    case Regime::FixedK:
      if (spec.delta >= 0.5) return 1.0;
      return std::pow(2.0 * spec.delta, spec.k_fixed);
    case Regime::SqrtWindow:
      // The window construction tracks the weak line, so rho -> rho_weak.
      return asymptotics::window_limit_ce(asymptotics::rho_weak(spec.delta), spec.window.c);
    case Regime::PowerWindow:
      switch (spec.window.mode) {
        case asymptotics::WindowMode::UpperPower:
          return 0.0;
        case asymptotics::WindowMode::TwoSidedPower:
          return 0.5;
        case asymptotics::WindowMode::LowerPower:
          return 1.0;
        default:
          break;
      }
      throw std::domain_error("predicted_quotient_limit: bad window mode");
    case Regime::Oscillating:
      return std::nullopt;
  }
  throw std::domain_error("predicted_quotient_limit: unknown regime");
}

namespace {

SweepRow base_row(const ConeIndex& idx) {
  SweepRow row;
  row.d = idx.d;
  row.N = idx.N;
  row.k = idx.k;
  row.delta_d = static_cast<double>(idx.d) / idx.N;
  row.rho_d = static_cast<double>(idx.k) / idx.d;
  return row;
}

std::vector<int> ascending(std::vector<int> ds) {
  std::sort(ds.begin(), ds.end());
  return ds;
}

}  // namespace

std::vector<SweepRow> run_quotient_sweep(const SequenceSpec& spec, const std::vector<int>& d_list) {
  spec.validate();
  const auto limit = predicted_quotient_limit(spec);
  std::vector<SweepRow> rows;
  rows.reserve(d_list.size());
  for (int d : ascending(d_list)) {
    SweepRow row = base_row(make_sequence(spec, d));
    const ConeIndex idx{row.d, row.N, row.k};
    row.quotient_dt = to_double(bigcomb::quotient_dt(idx));
    row.quotient_ce = to_double(bigcomb::quotient_ce(idx));
    row.predicted_limit = limit;
    rows.push_back(row);
  }
  return rows;
}

std::vector<SweepRow> run_difference_sweep(const SequenceSpec& spec, const std::vector<int>& d_list,
                                           ConeModel model) {
  spec.validate();
  if (spec.regime == Regime::FixedRatio) {
    if (!(spec.delta > 0.5 && spec.delta < 1.0)) {
      throw std::domain_error("run_difference_sweep: needs 1/2 < delta < 1");
    }
    if (!(spec.rho > 0.0 && spec.rho < asymptotics::rho_weak(spec.delta))) {
      throw std::domain_error("run_difference_sweep: needs 0 < rho < rho_weak(delta)");
    }
  } else if (spec.regime != Regime::Oscillating) {
    throw std::domain_error("run_difference_sweep: regime must be fixed-ratio or oscillating");
  }
  std::vector<SweepRow> rows;
  rows.reserve(d_list.size());
  for (int d : ascending(d_list)) {
    SweepRow row = base_row(make_sequence(spec, d));
    const ConeIndex idx{row.d, row.N, row.k};
    const double diff_log = bigcomb::log_of_rational(bigcomb::difference(idx, model));
    const double envelope = asymptotics::difference_envelope(idx, model);
    if (model == ConeModel::DonohoTanner) {
      row.diff_log_dt = diff_log;
      row.envelope_dt = envelope;
    } else {
      row.diff_log_ce = diff_log;
      row.envelope_ce = envelope;
    }
    rows.push_back(row);
  }
  return rows;
}

DifferenceClass classify_difference(double delta, double rho) {
  return asymptotics::g_exponent(delta, rho) > 0.0 ? DifferenceClass::ToInfinity
                                                   : DifferenceClass::ToZero;
}

namespace {

constexpr char kCsvHeader[] =
    "d,N,k,delta_d,rho_d,quotient_dt,quotient_ce,diff_log_dt,diff_log_ce,envelope_dt,envelope_ce,"
    "predicted_limit";

void append_cell(std::string& line, const std::optional<double>& v) {
  line += ',';
  if (v) line += fmt17(*v);
}

std::optional<double> column_of(const SweepRow& row, const std::string& name) {
  if (name == "d") return static_cast<double>(row.d);
  if (name == "N") return static_cast<double>(row.N);
  if (name == "k") return static_cast<double>(row.k);
  if (name == "delta_d") return row.delta_d;
  if (name == "rho_d") return row.rho_d;
  if (name == "quotient_dt") return row.quotient_dt;
  if (name == "quotient_ce") return row.quotient_ce;
  if (name == "diff_log_dt") return row.diff_log_dt;
  if (name == "diff_log_ce") return row.diff_log_ce;
  if (name == "envelope_dt") return row.envelope_dt;
  if (name == "envelope_ce") return row.envelope_ce;
  if (name == "predicted_limit") return row.predicted_limit;
  throw std::invalid_argument("unknown column: " + name);
}

}  // namespace

void emit_csv(const std::vector<SweepRow>& rows, std::ostream& os) {
  if (rows.empty()) throw std::invalid_argument("emit_csv: no rows");
  os << kCsvHeader << '\n';
  for (const auto& r : rows) {
    std::string line = std::to_string(r.d) + ',' + std::to_string(r.N) + ',' + std::to_string(r.k);
    line += ',';
    line += fmt17(r.delta_d);
    line += ',';
    line += fmt17(r.rho_d);
    append_cell(line, r.quotient_dt);
    append_cell(line, r.quotient_ce);
    append_cell(line, r.diff_log_dt);
    append_cell(line, r.diff_log_ce);
    append_cell(line, r.envelope_dt);
    append_cell(line, r.envelope_ce);
    append_cell(line, r.predicted_limit);
    os << line << '\n';
  }
  if (!os) throw std::runtime_error("emit_csv: stream write failed");
}

void emit_csv(const std::vector<SweepRow>& rows, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("emit_csv: cannot open " + path);
  emit_csv(rows, os);
  os.flush();
  if (!os) throw std::runtime_error("emit_csv: write failed for " + path);
}

void emit_svg_lineplot(const std::vector<SweepRow>& rows, const std::string& x_column,
                       const std::vector<std::string>& y_columns, std::ostream& os) {
  if (rows.empty()) throw std::invalid_argument("emit_svg_lineplot: no rows");
  if (y_columns.empty()) throw std::invalid_argument("emit_svg_lineplot: no y columns");

  struct Series {
    std::string name;
    std::vector<std::pair<double, double>> pts;
  };
  std::vector<Series> series;
  for (const auto& name : y_columns) {
    Series s{name, {}};
    for (const auto& row : rows) {
      const auto x = column_of(row, x_column);
      const auto y = column_of(row, name);
      if (x && y && std::isfinite(*x) && std::isfinite(*y)) s.pts.emplace_back(*x, *y);
    }
    series.push_back(std::move(s));
  }

  std::optional<double> guide;
  for (const auto& row : rows) {
    if (row.predicted_limit && std::isfinite(*row.predicted_limit)) {
      guide = row.predicted_limit;
      break;
    }
  }

  double xlo = 0, xhi = 0, ylo = 0, yhi = 0;
  bool have_x = false, have_y = false;
  for (const auto& row : rows) {
    if (const auto x = column_of(row, x_column); x && std::isfinite(*x)) {
      xlo = have_x ? std::min(xlo, *x) : *x;
      xhi = have_x ? std::max(xhi, *x) : *x;
      have_x = true;
    }
  }
  for (const auto& s : series) {
    for (const auto& [x, y] : s.pts) {
      ylo = have_y ? std::min(ylo, y) : y;
      yhi = have_y ? std::max(yhi, y) : y;
      have_y = true;
    }
  }
  if (guide) {
    ylo = have_y ? std::min(ylo, *guide) : *guide;
    yhi = have_y ? std::max(yhi, *guide) : *guide;
    have_y = true;
  }
  if (!have_x || !have_y) throw std::invalid_argument("emit_svg_lineplot: no finite data points");
  if (xhi == xlo) {
    const double pad = xlo == 0 ? 1.0 : std::fabs(xlo) * 0.05;
    xlo -= pad;
    xhi += pad;
  }
  {
    // 5% padding beyond the data extrema on the y axis.
    const double span = yhi - ylo;
    const double pad = span > 0 ? 0.05 * span : (ylo == 0 ? 1.0 : std::fabs(ylo) * 0.05);
    ylo -= pad;
    yhi += pad;
  }

  const double W = 800, H = 500, ML = 70, MR = 24, MT = 24, MB = 48;
  const auto sx = [&](double x) { return ML + (x - xlo) / (xhi - xlo) * (W - ML - MR); };
  const auto sy = [&](double y) { return H - MB - (y - ylo) / (yhi - ylo) * (H - MT - MB); };
  static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
  constexpr int kPaletteSize = 8;

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"500\" "
        "viewBox=\"0 0 800 500\" font-family=\"monospace\" font-size=\"12\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"500\" fill=\"white\"/>\n";
  // Axes.
  os << "<line x1=\"" << fmt_px(ML) << "\" y1=\"" << fmt_px(H - MB) << "\" x2=\"" << fmt_px(W - MR)
     << "\" y2=\"" << fmt_px(H - MB) << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << fmt_px(ML) << "\" y1=\"" << fmt_px(MT) << "\" x2=\"" << fmt_px(ML)
     << "\" y2=\"" << fmt_px(H - MB) << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double fx = xlo + (xhi - xlo) * t / 4.0;
    const double fy = ylo + (yhi - ylo) * t / 4.0;
    os << "<line x1=\"" << fmt_px(sx(fx)) << "\" y1=\"" << fmt_px(H - MB) << "\" x2=\""
       << fmt_px(sx(fx)) << "\" y2=\"" << fmt_px(H - MB + 5) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << fmt_px(sx(fx)) << "\" y=\"" << fmt_px(H - MB + 18)
       << "\" text-anchor=\"middle\">" << fmt6(fx) << "</text>\n";
    os << "<line x1=\"" << fmt_px(ML - 5) << "\" y1=\"" << fmt_px(sy(fy)) << "\" x2=\"" << fmt_px(ML)
       << "\" y2=\"" << fmt_px(sy(fy)) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << fmt_px(ML - 8) << "\" y=\"" << fmt_px(sy(fy) + 4)
       << "\" text-anchor=\"end\">" << fmt6(fy) << "</text>\n";
  }
  os << "<text x=\"" << fmt_px((ML + W - MR) / 2) << "\" y=\"" << fmt_px(H - 8)
     << "\" text-anchor=\"middle\">" << x_column << "</text>\n";
  if (guide) {
    os << "<line x1=\"" << fmt_px(ML) << "\" y1=\"" << fmt_px(sy(*guide)) << "\" x2=\""
       << fmt_px(W - MR) << "\" y2=\"" << fmt_px(sy(*guide))
       << "\" stroke=\"#888888\" stroke-dasharray=\"6 4\"/>\n";
    os << "<text x=\"" << fmt_px(W - MR - 4) << "\" y=\"" << fmt_px(sy(*guide) - 5)
       << "\" text-anchor=\"end\" fill=\"#888888\">predicted limit " << fmt6(*guide)
       << "</text>\n";
  }
  for (size_t i = 0; i < series.size(); ++i) {
    const char* color = kPalette[i % kPaletteSize];
    if (!series[i].pts.empty()) {
      os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
      bool first = true;
      for (const auto& [x, y] : series[i].pts) {
        if (!first) os << ' ';
        os << fmt_px(sx(x)) << ',' << fmt_px(sy(y));
        first = false;
      }
      os << "\"/>\n";
    }
    const double ly = MT + 16 + 16 * static_cast<double>(i);
    os << "<line x1=\"" << fmt_px(W - MR - 150) << "\" y1=\"" << fmt_px(ly - 4) << "\" x2=\""
       << fmt_px(W - MR - 130) << "\" y2=\"" << fmt_px(ly - 4) << "\" stroke=\"" << color
       << "\" stroke-width=\"1.5\"/>\n";
    os << "<text x=\"" << fmt_px(W - MR - 124) << "\" y=\"" << fmt_px(ly) << "\">" << series[i].name
       << "</text>\n";
  }
  os << "</svg>\n";
  if (!os) throw std::runtime_error("emit_svg_lineplot: stream write failed");
}

void emit_svg_lineplot(const std::vector<SweepRow>& rows, const std::string& x_column,
                       const std::vector<std::string>& y_columns, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("emit_svg_lineplot: cannot open " + path);
  emit_svg_lineplot(rows, x_column, y_columns, os);
  os.flush();
  if (!os) throw std::runtime_error("emit_svg_lineplot: write failed for " + path);
}

std::vector<SweepRow> merge_rows(const std::vector<std::vector<SweepRow>>& sweeps) {
  if (sweeps.empty()) return {};
  std::vector<SweepRow> out = sweeps.front();
  const auto merge_cell = [](std::optional<double>& dst, const std::optional<double>& src) {
    if (!src) return;
    if (dst && !(*dst == *src)) {
      throw std::invalid_argument("merge_rows: conflicting cell values");
    }
    dst = src;
  };
  for (size_t s = 1; s < sweeps.size(); ++s) {
    if (sweeps[s].size() != out.size()) {
      throw std::invalid_argument("merge_rows: sweeps cover different d grids");
    }
    for (size_t i = 0; i < out.size(); ++i) {
      const SweepRow& src = sweeps[s][i];
      SweepRow& dst = out[i];
      if (src.d != dst.d || src.N != dst.N || src.k != dst.k) {
        throw std::invalid_argument("merge_rows: sweeps cover different triples");
      }
      merge_cell(dst.quotient_dt, src.quotient_dt);
      merge_cell(dst.quotient_ce, src.quotient_ce);
      merge_cell(dst.diff_log_dt, src.diff_log_dt);
      merge_cell(dst.diff_log_ce, src.diff_log_ce);
      merge_cell(dst.envelope_dt, src.envelope_dt);
      merge_cell(dst.envelope_ce, src.envelope_ce);
      merge_cell(dst.predicted_limit, src.predicted_limit);
    }
  }
  return out;
}

}  // namespace conefaces::experiments
