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

// luderscope command line: discriminate, scan-trine, scan-noisy, advantage,
// verify. Exit codes: 0 ok, 1 input error, 2 solver failure.

#include <algorithm>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "luderscope/ensemble_io.hpp"
#include "luderscope/scan.hpp"
#include "luderscope/verify.hpp"

namespace {

using namespace luderscope;

constexpr int kExitInput = 1;
constexpr int kExitSolver = 2;

struct ScanArgs {
  int grid = 50;
  std::string theta;
  std::string second;
  std::string mode = "both";
  std::string out;
  std::string format = "csv";
  bool heatmap = false;
  double spacing = 0.002;
  double advantage_spacing = 0.00165;
};

void add_scan_options(CLI::App* cmd, ScanArgs& a, const char* second_flag, const char* second_help) {
  cmd->add_option("--grid", a.grid, "points per axis")->capture_default_str();
  cmd->add_option("--theta", a.theta, "theta range lo:hi in radians, sampled on [lo, hi)");
  cmd->add_option(second_flag, a.second, second_help);
  cmd->add_option("--mode", a.mode, "measurement | instrument | both")->capture_default_str();
  cmd->add_option("--out", a.out, "output file")->required();
  cmd->add_option("--format", a.format, "csv | json")->capture_default_str();
  cmd->add_flag("--heatmap", a.heatmap, "write banded SVG heatmaps next to the output");
  cmd->add_option("--levels", a.spacing, "band spacing for success probabilities")->capture_default_str();
  cmd->add_option("--advantage-levels", a.advantage_spacing, "band spacing for the advantage map")
      ->capture_default_str();
}

int run_scan_command(Family family, const ScanArgs& a) {
  auto cfg = ScanConfig::defaults(family);
  cfg.grid_n = a.grid;
  if (!a.theta.empty()) cfg.theta_range = parse_range(a.theta);
  if (!a.second.empty()) cfg.second_axis_range = parse_range(a.second);
  cfg.mode = parse_scan_mode(a.mode);
  cfg.output_path = a.out;
  cfg.format = parse_format(a.format);
  cfg.emit_heatmap = a.heatmap;
  cfg.level_spacing = a.spacing;
  cfg.advantage_level_spacing = a.advantage_spacing;
  cfg.validate();

  const auto rows = run_scan(cfg);
  for (const auto& f : write_outputs(rows, cfg)) std::cerr << "wrote " << f.string() << '\n';
  const auto flagged = std::count_if(rows.begin(), rows.end(), [](const ScanRow& r) { return r.flagged; });
  if (flagged) std::cerr << flagged << " grid points flagged by the solver\n";
  assert_row_invariants(rows);
  return flagged ? kExitSolver : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrimination of quantum measurements with and without post-measurement states"};
  app.require_subcommand(1);

  std::string input, mode = "instrument", priors;
  auto* disc = app.add_subcommand("discriminate", "optimal success probability for a JSON ensemble of POVMs");
  disc->add_option("--input", input, "ensemble JSON file")->required();
  disc->add_option("--mode", mode, "measurement | instrument")->capture_default_str();
  disc->add_option("--priors", priors, "comma-separated priors overriding the file");

  ScanArgs trine_args, noisy_args;
  auto* trine = app.add_subcommand("scan-trine", "grid scan of trine POVMs L(0,0) vs L(theta,phi)");
  add_scan_options(trine, trine_args, "--phi", "phi range lo:hi in radians");
  auto* noisy = app.add_subcommand("scan-noisy", "grid scan of Z vs noisy W(theta,p)");
  add_scan_options(noisy, noisy_args, "--p", "noise range lo:hi within [0, 1]");

  std::string family = "noisy", p_spec = "0.01:1:12";
  double theta = 0.0;
  auto* adv = app.add_subcommand("advantage", "advantage d_L/d_M along a noise curve");
  adv->add_option("--family", family, "only 'noisy' is supported")->capture_default_str();
  adv->add_option("--theta", theta, "rotation angle in radians")->capture_default_str();
  adv->add_option("--p", p_spec, "lo:hi:steps")->capture_default_str();

  bool mutation = false, timings = false;
  int criterion = 0;
  auto* ver = app.add_subcommand("verify", "run the analytic-vs-SDP acceptance checks");
  ver->add_flag("--mutation", mutation, "perturb oracle constants; the suite must then fail");
  ver->add_option("--criterion", criterion, "run a single criterion 1-9");
  ver->add_flag("--timings", timings, "include wall-clock times (report is no longer byte-stable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitInput;
  }

  try {
    if (*disc) {
      auto spec = load_ensemble(input);
      if (!priors.empty()) {
        spec.priors = parse_priors(priors);
        check_priors(spec.priors, spec.povms.size());
      }
      const auto result = discriminate(spec, parse_mode(mode));
      std::cout << result.dump(2) << '\n';
      return result["tester_report"]["status"] == "optimal" ? 0 : kExitSolver;
    }
    if (*trine) return run_scan_command(Family::trine, trine_args);
    if (*noisy) return run_scan_command(Family::noisy, noisy_args);
    if (*adv) {
      if (family != "noisy") throw InputError("advantage curves are implemented for --family noisy only");
      const auto last = p_spec.rfind(':');
      if (last == std::string::npos) throw InputError("--p must look like lo:hi:steps");
      const Range r = parse_range(p_spec.substr(0, last));
      int steps = 0;
      try {
        steps = std::stoi(p_spec.substr(last + 1));
      } catch (const std::logic_error&) {
        throw InputError("bad step count in --p");
      }
      const auto pts = run_advantage_curve(theta, r, steps);
      std::cout << advantage_to_csv(pts);
      const bool flagged = std::any_of(pts.begin(), pts.end(), [](const AdvantagePoint& p) { return p.flagged; });
      return flagged ? kExitSolver : 0;
    }
    if (*ver) {
      VerifyOptions o;
      o.mutation = mutation;
      std::vector<CriterionResult> results;
      if (criterion != 0)
        results.push_back(run_criterion(criterion, o));
      else
        results = run_verify(o);
      std::cout << format_report(results, timings);
      const bool ok = std::all_of(results.begin(), results.end(), [](const CriterionResult& c) { return c.passed(); });
      return ok ? 0 : 1;
    }
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const SolverError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kExitSolver;
  } catch (const NumericError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitSolver;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return 0;
}
