// Copyright 2026 The luderscope Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Parameter-grid scans over the trine family Λ(0,0) vs Λ(θ,φ) and the noisy
// family Z vs W(θ,p), with CSV/JSON writers and banded SVG heatmaps.

#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "json.hpp"
#include "luderscope/closed_form.hpp"
#include "luderscope/povm.hpp"
#include "luderscope/tester.hpp"

namespace luderscope {

enum class Family { trine, noisy };
enum class ScanMode { measurement, instrument, both };
enum class OutputFormat { csv, json };

inline const char* to_string(Family f) { return f == Family::trine ? "trine" : "noisy"; }

inline ScanMode parse_scan_mode(std::string_view s) {
  if (s == "measurement") return ScanMode::measurement;
  if (s == "instrument") return ScanMode::instrument;
  if (s == "both") return ScanMode::both;
  throw InputError("unknown scan mode '" + std::string(s) + "'");
}

inline OutputFormat parse_format(std::string_view s) {
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  throw InputError("unknown format '" + std::string(s) + "'");
}

struct Range {
  double lo = 0.0;
  double hi = 1.0;
};

/// "lo:hi" -> Range; requires lo < hi.
inline Range parse_range(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw InputError("range must look like lo:hi");
  Range r;
  try {
    std::size_t used = 0;
    const std::string a(text.substr(0, colon)), b(text.substr(colon + 1));
    r.lo = std::stod(a, &used);
    if (used != a.size()) throw InputError("bad range bound '" + a + "'");
    r.hi = std::stod(b, &used);
    if (used != b.size()) throw InputError("bad range bound '" + b + "'");
  } catch (const std::logic_error&) {
    throw InputError("cannot parse range '" + std::string(text) + "'");
  }
  if (!(r.lo < r.hi)) throw InputError("range needs lo < hi");
  return r;
}

struct ScanConfig {
  Family family = Family::trine;
  int grid_n = 50;
  Range theta_range{0.0, 2.0 * std::numbers::pi};
  Range second_axis_range{0.0, std::numbers::pi};  // φ for trine, p for noisy
  ScanMode mode = ScanMode::both;
  std::string output_path;
  OutputFormat format = OutputFormat::csv;
  bool emit_heatmap = false;
  double level_spacing = 0.002;
  double advantage_level_spacing = 0.00165;
  int threads = 0;  // 0: LUDERSCOPE_THREADS or hardware concurrency

  static ScanConfig defaults(Family f) {
    ScanConfig c;
    c.family = f;
    if (f == Family::noisy) c.second_axis_range = {0.0, 1.0};
    return c;
  }

  void validate() const {
    if (grid_n < 2) throw InputError("grid must have at least 2 points per axis");
    if (!(theta_range.lo < theta_range.hi) || !(second_axis_range.lo < second_axis_range.hi))
      throw InputError("scan ranges need lo < hi");
    if (family == Family::noisy && (second_axis_range.lo < 0.0 || second_axis_range.hi > 1.0))
      throw InputError("noise range must lie within [0, 1]");
    if (!(level_spacing > 0.0) || !(advantage_level_spacing > 0.0)) throw InputError("level spacing must be positive");
  }
};

struct ScanRow {
  double axis1 = 0.0;
  double axis2 = 0.0;
  std::optional<double> p_meas;
  std::optional<double> p_inst;
  std::optional<double> advantage;
  std::optional<double> gap_meas;
  std::optional<double> gap_inst;
  // Noisy family at θ = 0 only.
  std::optional<double> p_meas_analytic;
  std::optional<double> locc_lower;
  bool flagged = false;
  std::string note;
};

/// θ is an angle axis sampled on [lo, hi) so a full period has no duplicate
/// column; the second axis is sampled on the closed interval.
inline std::vector<double> axis_points(const Range& r, int n, bool half_open) {
  std::vector<double> out(n);
  const double step = (r.hi - r.lo) / (half_open ? n : n - 1);
  for (int k = 0; k < n; ++k) out[k] = r.lo + step * k;
  if (!half_open) out.back() = r.hi;
  return out;
}

inline int worker_count(int requested) {
  int n = requested;
  if (n <= 0) {
    n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (const char* env = std::getenv("LUDERSCOPE_THREADS")) {
      const int cap = std::atoi(env);
      if (cap >= 1) n = std::min(n, cap);
    }
  }
  return std::max(1, n);
}

/// Runs `job(i)` for i in [0, n) on a worker pool; results are written by
/// index so the gather order never depends on scheduling.
inline void parallel_for(int n, int threads, const std::function<void(int)>& job) {
  const int workers = std::min(worker_count(threads), std::max(1, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) job(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) job(i);
    });
}

namespace detail {

inline void solve_point(ScanRow& row, const Povm& a, const Povm& b, ScanMode mode) {
  TesterOptions opt;
  opt.symmetry_reduction = true;
  const std::vector<double> priors{0.5, 0.5};
  auto run = [&](bool instrument, std::optional<double>& value, std::optional<double>& gap) {
    const auto e = instrument ? luders_ensemble({a, b}, priors) : measurement_ensemble({a, b}, priors);
    const auto sol = optimize_tester(e, opt);
    value = sol.report.primal_value;
    gap = sol.report.gap;
    if (sol.report.status != SdpStatus::optimal) {
      row.flagged = true;
      row.note += std::string(instrument ? "instrument" : "measurement") + " solve " + to_string(sol.report.status) + "; ";
    }
  };
  try {
    if (mode != ScanMode::instrument) run(false, row.p_meas, row.gap_meas);
    if (mode != ScanMode::measurement) run(true, row.p_inst, row.gap_inst);
  } catch (const Error& e) {
    row.flagged = true;
    row.note += e.what();
  }
  if (row.p_meas && row.p_inst) {
    const double dm = 4.0 * *row.p_meas - 2.0;
    if (dm > kAdvantageGuard) row.advantage = (4.0 * *row.p_inst - 2.0) / dm;
  }
}

template <class MakePair>
std::vector<ScanRow> run_grid(const ScanConfig& cfg, MakePair make_pair) {
  cfg.validate();
  const auto t = axis_points(cfg.theta_range, cfg.grid_n, true);
  const auto s = axis_points(cfg.second_axis_range, cfg.grid_n, false);
  std::vector<ScanRow> rows(static_cast<std::size_t>(cfg.grid_n) * cfg.grid_n);
  parallel_for(static_cast<int>(rows.size()), cfg.threads, [&](int k) {
    ScanRow& row = rows[k];
    row.axis1 = t[k / cfg.grid_n];
    row.axis2 = s[k % cfg.grid_n];
    try {
      const auto [a, b] = make_pair(row.axis1, row.axis2);
      solve_point(row, a, b, cfg.mode);
    } catch (const Error& e) {
      row.flagged = true;
      row.note += e.what();
    }
  });
  return rows;
}

}  // namespace detail

/// Λ(0,0) vs Λ(θ,φ) at equal priors; rows in row-major (θ outer) order.
inline std::vector<ScanRow> run_scan_trine(const ScanConfig& cfg) {
  if (cfg.family != Family::trine) throw InputError("run_scan_trine needs family=trine");
  const Povm ref = trine_povm(0.0, 0.0);
  return detail::run_grid(cfg, [&](double theta, double phi) { return std::pair{ref, trine_povm(theta, phi)}; });
}

/// Z vs W(θ,p) at equal priors. At θ = 0 the analytic columns ½ + p/2 and
/// the entanglement-free optimum 1/(2 − √p) are attached.
inline std::vector<ScanRow> run_scan_noisy(const ScanConfig& cfg) {
  if (cfg.family != Family::noisy) throw InputError("run_scan_noisy needs family=noisy");
  const Povm z = computational_povm(2);
  auto rows = detail::run_grid(cfg, [&](double theta, double p) { return std::pair{z, noisy_z_povm(theta, p)}; });
  for (auto& r : rows) {
    if (r.axis1 != 0.0) continue;
    r.p_meas_analytic = thm2_measurement_success(r.axis2);
    r.locc_lower = thm2_locc_optimum(r.axis2);
  }
  return rows;
}

inline std::vector<ScanRow> run_scan(const ScanConfig& cfg) {
  return cfg.family == Family::trine ? run_scan_trine(cfg) : run_scan_noisy(cfg);
}

struct RowViolation {
  std::size_t index;
  std::string what;
};

/// ½ − tol ≤ p_meas ≤ p_inst + tol ≤ 1 + tol on every unflagged row, and
/// p_meas / p_inst against the analytic θ = 0 columns when present.
inline std::vector<RowViolation> check_rows(const std::vector<ScanRow>& rows, double tol = 1e-6) {
  std::vector<RowViolation> bad;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& r = rows[k];
    if (r.flagged) continue;
    auto fail = [&](const std::string& w) { bad.push_back({k, w}); };
    if (r.p_meas && *r.p_meas < 0.5 - tol) fail("p_meas below 1/2");
    if (r.p_inst && *r.p_inst < 0.5 - tol) fail("p_inst below 1/2");
    if (r.p_meas && r.p_inst && *r.p_meas > *r.p_inst + tol) fail("p_meas exceeds p_inst");
    if (r.p_inst && *r.p_inst > 1.0 + tol) fail("p_inst above 1");
    if (r.p_meas && *r.p_meas > 1.0 + tol) fail("p_meas above 1");
    if (r.p_meas && r.p_meas_analytic && std::abs(*r.p_meas - *r.p_meas_analytic) > tol)
      fail("p_meas differs from the closed form");
    if (r.p_inst && r.locc_lower && *r.p_inst < *r.locc_lower - tol) fail("p_inst below the entanglement-free value");
  }
  return bad;
}

inline void assert_row_invariants(const std::vector<ScanRow>& rows, double tol = 1e-6) {
  const auto bad = check_rows(rows, tol);
  if (bad.empty()) return;
  std::ostringstream os;
  os << bad.size() << " scan rows violate the dominance invariant; first: row " << bad.front().index << " ("
     << bad.front().what << ")";
  throw NumericError(os.str());
}

// ---------------------------------------------------------------------------
// Output

/// 9 significant digits; "-0" is printed as "0".
inline std::string format9(double v) {
  if (v == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

inline std::string format9(const std::optional<double>& v) { return v ? format9(*v) : std::string(); }

inline bool has_analytic_columns(const std::vector<ScanRow>& rows) {
  return std::any_of(rows.begin(), rows.end(), [](const ScanRow& r) { return r.p_meas_analytic.has_value(); });
}

inline std::string rows_to_csv(const std::vector<ScanRow>& rows) {
  const bool extra = has_analytic_columns(rows);
  std::string out = "axis1,axis2,p_meas,p_inst,advantage,gap_meas,gap_inst";
  if (extra) out += ",p_meas_analytic,locc_lower";
  out += '\n';
  for (const auto& r : rows) {
    out += format9(r.axis1) + ',' + format9(r.axis2) + ',' + format9(r.p_meas) + ',' + format9(r.p_inst) + ',' +
           format9(r.advantage) + ',' + format9(r.gap_meas) + ',' + format9(r.gap_inst);
    if (extra) out += ',' + format9(r.p_meas_analytic) + ',' + format9(r.locc_lower);
    out += '\n';
  }
  return out;
}

inline nlohmann::json rows_to_json(const std::vector<ScanRow>& rows) {
  auto num = [](const std::optional<double>& v) -> nlohmann::json {
    if (!v) return nullptr;
    return round_significant(*v, 9);
  };
  const bool extra = has_analytic_columns(rows);
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json o{{"axis1", round_significant(r.axis1, 9)},
                     {"axis2", round_significant(r.axis2, 9)},
                     {"p_meas", num(r.p_meas)},
                     {"p_inst", num(r.p_inst)},
                     {"advantage", num(r.advantage)},
                     {"gap_meas", num(r.gap_meas)},
                     {"gap_inst", num(r.gap_inst)}};
    if (extra) {
      o["p_meas_analytic"] = num(r.p_meas_analytic);
      o["locc_lower"] = num(r.locc_lower);
    }
    if (r.flagged) o["flag"] = r.note;
    arr.push_back(std::move(o));
  }
  return arr;
}

namespace detail {

// Viridis anchors, interpolated linearly.
inline std::string band_color(double t) {
  static constexpr std::array<std::array<int, 3>, 5> anchors{
      {{68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};
  t = std::clamp(t, 0.0, 1.0) * (anchors.size() - 1);
  const auto k = std::min<std::size_t>(static_cast<std::size_t>(t), anchors.size() - 2);
  const double f = t - static_cast<double>(k);
  char buf[8];
  int c[3];
  for (int j = 0; j < 3; ++j)
    c[j] = static_cast<int>(std::lround(anchors[k][j] + f * (anchors[k + 1][j] - anchors[k][j])));
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c[0], c[1], c[2]);
  return buf;
}

}  // namespace detail

/// One cell per grid point, colored by the value quantized to `spacing`;
/// undefined cells are grey. θ runs left to right, the second axis bottom to top.
inline std::string heatmap_svg(const std::vector<ScanRow>& rows, int grid_n,
                               std::optional<double> ScanRow::*metric, double spacing, const std::string& title) {
  constexpr int cell = 8, margin = 40;
  const int size = grid_n * cell;
  double lo = 1e300, hi = -1e300;
  for (const auto& r : rows)
    if (r.*metric) {
      lo = std::min(lo, *(r.*metric));
      hi = std::max(hi, *(r.*metric));
    }
  const double base = lo <= hi ? std::floor(lo / spacing) * spacing : 0.0;
  const double span = lo <= hi ? std::max(spacing, hi - base) : 1.0;

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size + 2 * margin << "\" height=\""
     << size + 2 * margin << "\">\n";
  os << "<text x=\"" << margin << "\" y=\"" << margin / 2 << "\" font-size=\"12\">" << title << " (band "
     << format9(spacing) << ", range " << (lo <= hi ? format9(lo) + " to " + format9(hi) : "empty") << ")</text>\n";
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const int i = static_cast<int>(k) / grid_n, j = static_cast<int>(k) % grid_n;
    const auto& v = rows[k].*metric;
    std::string fill = "#bbbbbb";
    if (v) {
      const double band = std::floor((*v - base) / spacing + 1e-9) * spacing;
      fill = detail::band_color(band / span);
    }
    os << "<rect x=\"" << margin + i * cell << "\" y=\"" << margin + (grid_n - 1 - j) * cell << "\" width=\"" << cell
       << "\" height=\"" << cell << "\" fill=\"" << fill << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << text;
  out.flush();
  if (!out) throw InputError("failed writing '" + path.string() + "'");
}

/// Writes the table (and optional heatmaps next to it as <stem>_<metric>.svg).
/// Returns every file written.
inline std::vector<std::filesystem::path> write_outputs(const std::vector<ScanRow>& rows, const ScanConfig& cfg) {
  if (cfg.output_path.empty()) throw InputError("no output path given");
  const std::filesystem::path out(cfg.output_path);
  std::vector<std::filesystem::path> written;
  if (cfg.format == OutputFormat::csv)
    write_text(out, rows_to_csv(rows));
  else
    write_text(out, rows_to_json(rows).dump(1) + "\n");
  written.push_back(out);
  if (cfg.emit_heatmap) {
    const auto stem = out.parent_path() / out.stem();
    const std::array<std::tuple<const char*, std::optional<double> ScanRow::*, double>, 3> metrics{
        {{"p_meas", &ScanRow::p_meas, cfg.level_spacing},
         {"p_inst", &ScanRow::p_inst, cfg.level_spacing},
         {"advantage", &ScanRow::advantage, cfg.advantage_level_spacing}}};
    for (const auto& [name, field, spacing] : metrics) {
      const bool any = std::any_of(rows.begin(), rows.end(), [&](const ScanRow& r) { return (r.*field).has_value(); });
      if (!any) continue;
      const std::filesystem::path svg = stem.string() + "_" + name + ".svg";
      write_text(svg, heatmap_svg(rows, cfg.grid_n, field, spacing, std::string(to_string(cfg.family)) + " " + name));
      written.push_back(svg);
    }
  }
  return written;
}

// ---------------------------------------------------------------------------
// Advantage curves

struct AdvantagePoint {
  double p = 0.0;
  double d_meas = 0.0;
  double d_inst = 0.0;
  std::optional<double> advantage;
  std::optional<double> advantage_analytic;  // θ = 0 only
  std::optional<double> bias_ratio;          // (p + √p)/(2p), θ = 0 only
  bool flagged = false;
};

/// Δ(Z, W(θ,p)) for p = lo, ..., hi in `steps` equally spaced points.
inline std::vector<AdvantagePoint> run_advantage_curve(double theta, Range p_range, int steps, int threads = 0) {
  if (steps < 2) throw InputError("advantage curve needs at least 2 steps");
  if (p_range.lo < 0.0 || p_range.hi > 1.0 || !(p_range.lo < p_range.hi)) throw InputError("p range must lie in [0, 1]");
  const auto ps = axis_points(p_range, steps, false);
  std::vector<AdvantagePoint> out(steps);
  const Povm z = computational_povm(2);
  parallel_for(steps, threads, [&](int k) {
    auto& pt = out[k];
    pt.p = ps[k];
    TesterOptions opt;
    opt.symmetry_reduction = true;
    try {
      const Povm w = noisy_z_povm(theta, pt.p);
      const auto dm = measurement_distance_report(z, w, opt);
      const auto dl = luders_distance_report(z, w, opt);
      pt.d_meas = dm.value;
      pt.d_inst = dl.value;
      pt.flagged = dm.report.status != SdpStatus::optimal || dl.report.status != SdpStatus::optimal;
      if (pt.d_meas > kAdvantageGuard) pt.advantage = pt.d_inst / pt.d_meas;
    } catch (const Error&) {
      pt.flagged = true;
    }
    if (theta == 0.0 && pt.p > 0.0) {
      pt.advantage_analytic = thm2_advantage(pt.p);
      pt.bias_ratio = thm2_bias_lower(pt.p);
    }
  });
  return out;
}

inline std::string advantage_to_csv(const std::vector<AdvantagePoint>& pts) {
  std::string out = "p,d_meas,d_inst,advantage,advantage_analytic,bias_ratio\n";
  for (const auto& pt : pts)
    out += format9(pt.p) + ',' + format9(pt.d_meas) + ',' + format9(pt.d_inst) + ',' + format9(pt.advantage) + ',' +
           format9(pt.advantage_analytic) + ',' + format9(pt.bias_ratio) + '\n';
  return out;
}

}  // namespace luderscope
