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

// JSON ensembles of POVMs and the single-problem discrimination driver.
//
// Input layout:
//   {"dim": 2, "priors": [0.5, 0.5],
//    "povms": [[M_0, M_1, ...], ...]}
// where every effect M_a is a list of rows and every entry is either a real
// number or a pair [re, im].

#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "luderscope/povm.hpp"
#include "luderscope/tester.hpp"

namespace luderscope {

enum class Mode { measurement, instrument };

inline Mode parse_mode(std::string_view s) {
  if (s == "measurement") return Mode::measurement;
  if (s == "instrument") return Mode::instrument;
  throw InputError("unknown mode '" + std::string(s) + "' (expected measurement or instrument)");
}

inline const char* to_string(Mode m) { return m == Mode::measurement ? "measurement" : "instrument"; }

struct EnsembleSpec {
  std::vector<double> priors;
  std::vector<Povm> povms;
};

namespace detail {

inline Complex parse_entry(const nlohmann::json& v) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  throw InputError("matrix entry must be a number or [re, im]");
}

inline CMatrix parse_matrix(const nlohmann::json& rows, int dim) {
  if (!rows.is_array() || static_cast<int>(rows.size()) != dim) throw InputError("effect must have dim rows");
  CMatrix m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const auto& row = rows[i];
    if (!row.is_array() || static_cast<int>(row.size()) != dim) throw InputError("effect rows must have dim entries");
    for (int j = 0; j < dim; ++j) m(i, j) = parse_entry(row[j]);
  }
  return m;
}

}  // namespace detail

inline void check_priors(const std::vector<double>& priors, std::size_t n) {
  if (priors.size() != n) throw InputError("number of priors differs from number of POVMs");
  double total = 0.0;
  for (double p : priors) {
    if (!(p >= 0.0)) throw InputError("priors must be nonnegative");
    total += p;
  }
  if (std::abs(total - 1.0) > kPriorTolerance) throw InputError("priors must sum to 1");
}

/// Parses and validates an ensemble. Every failure is an InputError; invalid
/// POVMs carry the validate_povm report.
inline EnsembleSpec parse_ensemble(const nlohmann::json& doc) {
  if (!doc.is_object()) throw InputError("ensemble must be a JSON object");
  if (!doc.contains("dim") || !doc["dim"].is_number_integer()) throw InputError("missing integer field 'dim'");
  const int dim = doc["dim"].get<int>();
  if (dim < 1 || dim > 16) throw InputError("'dim' must lie in [1, 16]");
  if (!doc.contains("povms") || !doc["povms"].is_array() || doc["povms"].empty())
    throw InputError("missing non-empty array 'povms'");

  EnsembleSpec spec;
  int index = 0;
  for (const auto& pj : doc["povms"]) {
    if (!pj.is_array() || pj.empty()) throw InputError("every POVM must be a non-empty list of effects");
    std::vector<HermitianOperator> effects;
    for (const auto& ej : pj) {
      const CMatrix m = detail::parse_matrix(ej, dim);
      if (!all_finite(m)) throw InputError("POVM " + std::to_string(index) + " has non-finite entries");
      const double asym = max_abs(m - m.adjoint());
      if (asym > kHermiticityTolerance) {
        std::ostringstream os;
        os << "POVM " << index << " has a non-Hermitian effect (max |M - M^dagger| = " << asym << ")";
        throw InputError(os.str());
      }
      effects.emplace_back(m);
    }
    Povm p(std::move(effects));
    const auto report = validate_povm(p);
    if (!report.passed) throw InputError("POVM " + std::to_string(index) + ": " + report.summary());
    spec.povms.push_back(std::move(p));
    ++index;
  }

  const auto n = spec.povms.size();
  if (doc.contains("priors")) {
    if (!doc["priors"].is_array()) throw InputError("'priors' must be an array");
    for (const auto& v : doc["priors"]) {
      if (!v.is_number()) throw InputError("priors must be numbers");
      spec.priors.push_back(v.get<double>());
    }
  } else {
    spec.priors.assign(n, 1.0 / static_cast<double>(n));
  }
  check_priors(spec.priors, n);
  return spec;
}

inline EnsembleSpec load_ensemble(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("malformed JSON in '" + path + "': " + e.what());
  }
  return parse_ensemble(doc);
}

/// "0.3,0.7" -> {0.3, 0.7}
inline std::vector<double> parse_priors(std::string_view text) {
  std::vector<double> out;
  std::string item;
  std::istringstream is{std::string(text)};
  while (std::getline(is, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw InputError("cannot parse prior '" + item + "'");
    }
    if (used != item.size()) throw InputError("cannot parse prior '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw InputError("empty prior list");
  return out;
}

inline Ensemble make_ensemble(const EnsembleSpec& spec, Mode mode) {
  return mode == Mode::measurement ? measurement_ensemble(spec.povms, spec.priors)
                                   : luders_ensemble(spec.povms, spec.priors);
}

/// Solves one ensemble and reports success, distance (two hypotheses at
/// equal priors only, otherwise null), the SDP report, tester residuals and
/// per-hypothesis Choi diagnostics.
inline nlohmann::json discriminate(const EnsembleSpec& spec, Mode mode, const TesterOptions& options = {}) {
  const auto e = make_ensemble(spec, mode);
  const auto sol = optimize_tester(e, options);
  const auto check = validate_tester(sol.tester, e.out_dim());

  nlohmann::json out;
  out["mode"] = to_string(mode);
  out["success"] = round_significant(sol.report.primal_value);
  const bool pair = e.size() == 2 && std::abs(e.priors[0] - 0.5) <= kPriorTolerance;
  if (pair)
    out["distance"] = round_significant(std::max(0.0, 4.0 * sol.report.primal_value - 2.0));
  else
    out["distance"] = nullptr;
  out["tester_report"] = sol.report.to_json();
  out["tester_report"]["normalization_residual"] = round_significant(check.normalization_residual, 3);
  out["tester_report"]["valid"] = check.passed;
  auto& diag = out["choi_diagnostics"] = nlohmann::json::array();
  for (const auto& c : e.chois) {
    const auto r = validate_choi(c);
    diag.push_back({{"dims", c.dims().factors()},
                    {"min_eigenvalue", round_significant(r.min_eigenvalue, 3)},
                    {"tp_residual", round_significant(r.tp_residual, 3)},
                    {"valid", r.completely_positive && r.trace_preserving}});
  }
  return out;
}

}  // namespace luderscope
