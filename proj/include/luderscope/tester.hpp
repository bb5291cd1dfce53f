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

// Minimum-error discrimination of channels through the tester SDP
//
//   max Σ_x p_x Tr(C_x T_x)   s.t.  T_x ⪰ 0,  Σ_x T_x = σ ⊗ 1_out,  Tr σ = 1,
//
// plus the diamond distances it induces between measurements (outcome only)
// and between their Lüders channels, and the sequential entanglement-free
// strategies used as a cross-check.
//
// Hermitian variables are handed to the real solver through the embedding
// X ↦ [[Re X, -Im X], [Im X, Re X]], which doubles every trace; all constraint
// and objective matrices are halved to compensate. σ is eliminated: the
// constraints say that Σ_x T_x is orthogonal to every H ⊗ G with G traceless
// and has trace d_out, which forces Σ_x T_x = σ ⊗ 1 with Tr σ = 1.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "luderscope/matrix.hpp"
#include "luderscope/povm.hpp"
#include "luderscope/sdp.hpp"

namespace luderscope {

inline constexpr double kPriorTolerance = 1e-9;
inline constexpr double kTesterTolerance = 1e-7;
inline constexpr double kAdvantageGuard = 1e-9;

// ---------------------------------------------------------------------------
// Ensemble

struct Ensemble {
  std::vector<double> priors;
  std::vector<ChoiOperator> chois;

  /// Throws InputError / DimensionError when the invariants fail.
  void validate() const {
    if (chois.empty()) throw InputError("ensemble has no hypotheses");
    if (priors.size() != chois.size()) throw InputError("ensemble needs one prior per hypothesis");
    double s = 0.0;
    for (double p : priors) {
      if (!(p >= 0.0) || !std::isfinite(p)) throw InputError("priors must be finite and nonnegative");
      s += p;
    }
    if (std::abs(s - 1.0) > kPriorTolerance) {
      std::ostringstream os;
      os << "priors sum to " << s << ", not 1";
      throw InputError(os.str());
    }
    for (const auto& c : chois)
      if (!(c.dims() == chois.front().dims()))
        throw DimensionError("ensemble Choi operators have different dims: " + c.dims().str() + " vs " +
                             chois.front().dims().str());
  }

  [[nodiscard]] int size() const { return static_cast<int>(chois.size()); }
  [[nodiscard]] int in_dim() const { return chois.front().in_dim(); }
  [[nodiscard]] int out_dim() const { return chois.front().out_dim(); }
};

/// Pads every POVM with zero effects up to the largest outcome count.
inline std::vector<Povm> pad_to_common(const std::vector<Povm>& povms) {
  int n = 0;
  for (const auto& p : povms) n = std::max(n, p.outcomes());
  std::vector<Povm> out;
  out.reserve(povms.size());
  for (const auto& p : povms) out.push_back(p.padded(n));
  return out;
}

inline Ensemble measurement_ensemble(const std::vector<Povm>& povms, std::vector<double> priors) {
  Ensemble e{std::move(priors), {}};
  for (const auto& p : pad_to_common(povms)) e.chois.push_back(mp_channel_choi(p));
  e.validate();
  return e;
}

inline Ensemble luders_ensemble(const std::vector<Povm>& povms, std::vector<double> priors) {
  Ensemble e{std::move(priors), {}};
  for (const auto& p : pad_to_common(povms)) e.chois.push_back(luders_channel_choi(p));
  e.validate();
  return e;
}

// ---------------------------------------------------------------------------
// Tester

struct Tester {
  std::vector<HermitianOperator> operators;
  HermitianOperator sigma;
};

struct TesterReport {
  std::vector<double> min_eigenvalues;
  double normalization_residual = 0.0;
  double sigma_min_eigenvalue = 0.0;
  double sigma_trace_residual = 0.0;
  bool passed = false;
};

inline TesterReport validate_tester(const Tester& t, int out_dim) {
  TesterReport r;
  if (t.operators.empty()) return r;
  const int d_in = t.sigma.dim();
  const int dim = d_in * out_dim;
  CMatrix sum = CMatrix::Zero(dim, dim);
  bool psd = true;
  for (const auto& op : t.operators) {
    if (op.dim() != dim) throw DimensionError("tester operator does not act on in ⊗ out");
    const double lo = min_eigenvalue(op);
    r.min_eigenvalues.push_back(lo);
    psd = psd && lo >= -kTesterTolerance;
    sum += op.matrix();
  }
  r.normalization_residual = max_abs(sum - kron(t.sigma.matrix(), CMatrix::Identity(out_dim, out_dim)));
  r.sigma_min_eigenvalue = min_eigenvalue(t.sigma);
  r.sigma_trace_residual = std::abs(t.sigma.trace() - 1.0);
  r.passed = psd && r.normalization_residual <= kTesterTolerance && r.sigma_min_eigenvalue >= -kTesterTolerance &&
             r.sigma_trace_residual <= kTesterTolerance;
  return r;
}

/// Σ_x p_x Tr(C_x T_x)
inline double tester_success(const Tester& t, const Ensemble& e) {
  if (t.operators.size() != e.chois.size()) throw DimensionError("tester and ensemble have different sizes");
  double s = 0.0;
  for (int x = 0; x < e.size(); ++x) {
    if (t.operators[x].dim() != e.chois[x].op().dim()) throw DimensionError("tester operator dimension mismatch");
    s += e.priors[x] * e.chois[x].op().trace_with(t.operators[x]);
  }
  return s;
}

// ---------------------------------------------------------------------------
// SDP report

enum class SdpStatus { optimal, max_iter, infeasible };

inline const char* to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::optimal:
      return "optimal";
    case SdpStatus::max_iter:
      return "max-iter";
    case SdpStatus::infeasible:
      return "infeasible";
  }
  return "unknown";
}

/// Rounds to 12 significant digits so the JSON text is stable.
inline double round_significant(double v, int digits = 12) {
  if (!std::isfinite(v) || v == 0.0) return v;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return std::strtod(buf, nullptr);
}

struct SdpReport {
  double primal_value = 0.0;
  double dual_bound = 0.0;
  double gap = 0.0;
  SdpStatus status = SdpStatus::max_iter;
  int iterations = 0;

  [[nodiscard]] nlohmann::json to_json() const {
    return {{"primal", round_significant(primal_value)},
            {"dual", round_significant(dual_bound)},
            {"gap", round_significant(gap)},
            {"status", to_string(status)},
            {"iterations", iterations}};
  }
};

struct TesterOptions {
  bool symmetry_reduction = false;
  sdp::Options solver{};
};

struct TesterSolution {
  Tester tester;
  SdpReport report;
};

namespace detail {

struct SparseTerm {
  int row;
  int col;
  Complex value;
};
using SparseHermitian = std::vector<SparseTerm>;

/// Basis of Hermitian d×d matrices: E_jj, E_jk + E_kj, i(E_jk - E_kj).
inline std::vector<SparseHermitian> hermitian_basis(int d, bool traceless) {
  std::vector<SparseHermitian> out;
  if (traceless) {
    for (int k = 1; k < d; ++k) out.push_back({{0, 0, 1.0}, {k, k, -1.0}});
  } else {
    for (int j = 0; j < d; ++j) out.push_back({{j, j, 1.0}});
  }
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) {
      out.push_back({{j, k, 1.0}, {k, j, 1.0}});
      out.push_back({{j, k, Complex(0, 1)}, {k, j, Complex(0, -1)}});
    }
  return out;
}

inline SparseHermitian sparse_kron(const SparseHermitian& a, const SparseHermitian& b, int b_dim) {
  SparseHermitian out;
  for (const auto& x : a)
    for (const auto& y : b) out.push_back({x.row * b_dim + y.row, x.col * b_dim + y.col, x.value * y.value});
  return out;
}

inline SparseHermitian sparse_identity(int d) {
  SparseHermitian out;
  for (int j = 0; j < d; ++j) out.push_back({j, j, 1.0});
  return out;
}

// Halved real embedding of a sparse Hermitian matrix of size n.
inline std::vector<sdp::Entry> embed(const SparseHermitian& h, int n, double scale = 0.5) {
  std::vector<sdp::Entry> out;
  for (const auto& t : h) {
    const double re = scale * t.value.real(), im = scale * t.value.imag();
    if (re != 0.0) {
      out.push_back({t.row, t.col, re});
      out.push_back({t.row + n, t.col + n, re});
    }
    if (im != 0.0) {
      out.push_back({t.row + n, t.col, im});
      out.push_back({t.row, t.col + n, -im});
    }
  }
  return out;
}

inline sdp::MatrixXd embed(const CMatrix& h, double scale = 0.5) {
  const auto n = h.rows();
  sdp::MatrixXd out(2 * n, 2 * n);
  out << h.real(), -h.imag(), h.imag(), h.real();
  return scale * out;
}

// Inverse of the embedding, averaging over the two copies.
inline CMatrix unembed(const sdp::MatrixXd& x) {
  const auto n = x.rows() / 2;
  CMatrix out(n, n);
  const sdp::MatrixXd re = 0.5 * (x.topLeftCorner(n, n) + x.bottomRightCorner(n, n));
  const sdp::MatrixXd im = 0.5 * (x.bottomLeftCorner(n, n) - x.topRightCorner(n, n));
  out.real() = re;
  out.imag() = im;
  return out;
}

struct Formulation {
  sdp::Problem problem;
  // block index of (x, a); a is 0 in the unreduced formulation
  std::vector<std::vector<int>> block_of;
  int flag_blocks = 1;
};

inline Formulation unreduced_formulation(const Ensemble& e) {
  Formulation f;
  const int n_hyp = e.size();
  const int d_in = e.in_dim(), d_out = e.out_dim();
  const int dim = d_in * d_out;
  for (int x = 0; x < n_hyp; ++x) {
    f.problem.block_sizes.push_back(2 * dim);
    f.problem.objective.push_back(embed(e.chois[x].op().matrix(), 0.5 * e.priors[x]));
    f.block_of.push_back({x});
  }
  auto add = [&](const SparseHermitian& a, double rhs) {
    sdp::Constraint c;
    c.rhs = rhs;
    const auto entries = embed(a, dim);
    for (int x = 0; x < n_hyp; ++x) c.terms.push_back({x, entries});
    f.problem.constraints.push_back(std::move(c));
  };
  const auto in_basis = hermitian_basis(d_in, false);
  const auto out_traceless = hermitian_basis(d_out, true);
  for (const auto& h : in_basis)
    for (const auto& g : out_traceless) add(sparse_kron(h, g, d_out), 0.0);
  add(sparse_identity(dim), d_out);
  return f;
}

// Testers restricted to Σ_a σ_{a|x} ⊗ |a><a| for Choi operators that are
// block diagonal in the trailing flag factor.
inline Formulation reduced_formulation(const Ensemble& e) {
  Formulation f;
  const int n_hyp = e.size();
  const int d_in = e.in_dim();
  const int n_flag = e.chois.front().flag_dim();
  const int d_mid = e.out_dim() / n_flag;
  const int sub = d_in * d_mid;
  f.flag_blocks = n_flag;
  for (int x = 0; x < n_hyp; ++x) {
    const CMatrix& c = e.chois[x].op().matrix();
    CMatrix diag_part = CMatrix::Zero(c.rows(), c.cols());
    std::vector<int> blocks;
    for (int a = 0; a < n_flag; ++a) {
      CMatrix part(sub, sub);
      for (int r = 0; r < sub; ++r)
        for (int s = 0; s < sub; ++s) {
          part(r, s) = c(r * n_flag + a, s * n_flag + a);
          diag_part(r * n_flag + a, s * n_flag + a) = part(r, s);
        }
      blocks.push_back(static_cast<int>(f.problem.block_sizes.size()));
      f.problem.block_sizes.push_back(2 * sub);
      f.problem.objective.push_back(embed(part, 0.5 * e.priors[x]));
    }
    if (max_abs(c - diag_part) > 1e-12)
      throw DomainError("symmetry reduction needs Choi operators block diagonal in the outcome flag");
    f.block_of.push_back(std::move(blocks));
  }
  const auto in_basis = hermitian_basis(d_in, false);
  const auto mid_traceless = hermitian_basis(d_mid, true);
  for (int a = 0; a < n_flag; ++a)
    for (const auto& h : in_basis)
      for (const auto& g : mid_traceless) {
        sdp::Constraint c;
        const auto entries = embed(sparse_kron(h, g, d_mid), sub);
        for (int x = 0; x < n_hyp; ++x) c.terms.push_back({f.block_of[x][a], entries});
        f.problem.constraints.push_back(std::move(c));
      }
  // every flag value sees the same input state
  for (int a = 1; a < n_flag; ++a)
    for (const auto& h : in_basis) {
      sdp::Constraint c;
      const auto plus = embed(sparse_kron(h, sparse_identity(d_mid), d_mid), sub);
      auto minus = plus;
      for (auto& m : minus) m.value = -m.value;
      for (int x = 0; x < n_hyp; ++x) {
        c.terms.push_back({f.block_of[x][a], plus});
        c.terms.push_back({f.block_of[x][0], minus});
      }
      f.problem.constraints.push_back(std::move(c));
    }
  sdp::Constraint trace;
  trace.rhs = d_mid;
  const auto id = embed(sparse_identity(sub), sub);
  for (int x = 0; x < n_hyp; ++x) trace.terms.push_back({f.block_of[x][0], id});
  f.problem.constraints.push_back(std::move(trace));
  return f;
}

}  // namespace detail

/// Maximizes the ensemble success probability over testers. The returned
/// dual bound is certified: if the solver's dual slack has a small negative
/// eigenvalue λ, |λ|·Σ_x Tr(T_x) = |λ|·d_out is added to b·y.
inline TesterSolution optimize_tester(const Ensemble& e, const TesterOptions& options = {}) {
  e.validate();
  const int d_in = e.in_dim(), d_out = e.out_dim();
  const auto form =
      options.symmetry_reduction ? detail::reduced_formulation(e) : detail::unreduced_formulation(e);
  const sdp::Solver solver(form.problem);
  const auto res = solver.solve(options.solver);

  const int dim = d_in * d_out;
  std::vector<HermitianOperator> ops;
  CMatrix total = CMatrix::Zero(dim, dim);
  for (int x = 0; x < e.size(); ++x) {
    CMatrix t = CMatrix::Zero(dim, dim);
    const auto& blocks = form.block_of[x];
    if (blocks.size() == 1) {
      t = detail::unembed(res.x[blocks[0]]);
    } else {
      const int n_flag = form.flag_blocks;
      for (int a = 0; a < n_flag; ++a) {
        const CMatrix part = detail::unembed(res.x[blocks[a]]);
        for (int r = 0; r < part.rows(); ++r)
          for (int s = 0; s < part.cols(); ++s) t(r * n_flag + a, s * n_flag + a) = part(r, s);
      }
    }
    total += t;
    ops.push_back(HermitianOperator::symmetrized(t));
  }
  const SystemDims io{d_in, d_out};
  auto sigma = HermitianOperator::symmetrized(partial_trace(total, io, {0}) / static_cast<double>(d_out));
  Tester tester{std::move(ops), std::move(sigma)};

  const auto slack = solver.apply_at(res.y);
  double worst = 0.0;
  for (std::size_t b = 0; b < slack.size(); ++b) {
    sdp::MatrixXd zb = slack[b] - form.problem.objective[b];
    zb = 0.5 * (zb + zb.transpose());
    Eigen::SelfAdjointEigenSolver<sdp::MatrixXd> es(zb, Eigen::EigenvaluesOnly);
    worst = std::max(worst, -es.eigenvalues()(0));
  }

  SdpReport report;
  report.iterations = res.iterations;
  report.primal_value = tester_success(tester, e);
  // Every embedded feasible tester has Σ_b tr(X_b) = 2·d_out.
  report.dual_bound = res.dual_objective + 2.0 * worst * d_out;
  report.gap = report.dual_bound - report.primal_value;
  const auto check = validate_tester(tester, d_out);
  if (res.status == sdp::Status::infeasible) {
    report.status = SdpStatus::infeasible;
  } else if (check.passed && report.gap <= kTesterTolerance && report.gap >= -1e-9) {
    report.status = SdpStatus::optimal;
  } else {
    report.status = SdpStatus::max_iter;
  }
  return {std::move(tester), report};
}

// ---------------------------------------------------------------------------
// Distances

struct DiamondDistance {
  double value = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  SdpReport report;
};

/// ‖C_a - C_b‖◇ from the equal-prior optimum p: d = 4p - 2.
inline DiamondDistance diamond_distance(const ChoiOperator& a, const ChoiOperator& b,
                                        const TesterOptions& options = {}) {
  if (!(a.dims() == b.dims())) throw DimensionError("diamond_distance: Choi dims differ");
  const Ensemble e{{0.5, 0.5}, {a, b}};
  const auto sol = optimize_tester(e, options);
  DiamondDistance d;
  d.report = sol.report;
  d.lo = std::max(0.0, 4.0 * (sol.report.primal_value - 0.5));
  d.hi = std::max(d.lo, 4.0 * (sol.report.dual_bound - 0.5));
  d.value = d.lo;
  return d;
}

inline DiamondDistance measurement_distance_report(const Povm& p1, const Povm& p2, const TesterOptions& o = {}) {
  if (p1.dim() != p2.dim()) throw DimensionError("POVMs act on different dimensions");
  const auto padded = pad_to_common({p1, p2});
  return diamond_distance(mp_channel_choi(padded[0]), mp_channel_choi(padded[1]), o);
}

inline DiamondDistance luders_distance_report(const Povm& p1, const Povm& p2, const TesterOptions& o = {}) {
  if (p1.dim() != p2.dim()) throw DimensionError("POVMs act on different dimensions");
  const auto padded = pad_to_common({p1, p2});
  return diamond_distance(luders_channel_choi(padded[0]), luders_channel_choi(padded[1]), o);
}

/// d_M: diamond distance between the measure-and-prepare channels.
inline double measurement_distance(const Povm& p1, const Povm& p2, const TesterOptions& o = {}) {
  return measurement_distance_report(p1, p2, o).value;
}

/// d_L: diamond distance between the Lüders channels.
inline double luders_distance(const Povm& p1, const Povm& p2, const TesterOptions& o = {}) {
  return luders_distance_report(p1, p2, o).value;
}

inline double advantage_ratio(double d_luders, double d_measurement) {
  if (!(d_measurement > kAdvantageGuard)) {
    std::ostringstream os;
    os << "instrument advantage undefined: measurement distance " << d_measurement << " <= " << kAdvantageGuard;
    throw UndefinedAdvantageError(os.str());
  }
  return d_luders / d_measurement;
}

/// Δ = d_L / d_M.
inline double instrument_advantage(const Povm& p1, const Povm& p2, const TesterOptions& o = {}) {
  const double dm = measurement_distance(p1, p2, o);
  if (!(dm > kAdvantageGuard)) return advantage_ratio(0.0, dm);
  return advantage_ratio(luders_distance(p1, p2, o), dm);
}

// ---------------------------------------------------------------------------
// Sequential (entanglement-free) strategies

/// Probe state plus, for every instrument outcome a, a measurement on the
/// post-measurement state whose element x means "guess hypothesis x".
struct SequentialStrategy {
  HermitianOperator input_state;
  std::vector<Povm> adaptive_povms;
  bool degenerate = false;
};

inline double sequential_success(const std::array<Povm, 2>& povms, const std::array<double, 2>& priors,
                                 const SequentialStrategy& s) {
  require_state(s.input_state);
  const auto padded = pad_to_common({povms[0], povms[1]});
  const int n = padded[0].outcomes();
  if (static_cast<int>(s.adaptive_povms.size()) < n) throw DimensionError("strategy lacks an adaptive POVM per outcome");
  double total = 0.0;
  for (int x = 0; x < 2; ++x) {
    const auto instr = luders_instrument(padded[x]);
    for (int a = 0; a < n; ++a) {
      const Povm& guess = s.adaptive_povms[a];
      if (guess.outcomes() < 2 || guess.dim() != instr.dim()) throw DimensionError("adaptive POVM has the wrong shape");
      const double prob = padded[x][a].trace_with(s.input_state);
      if (prob <= kZeroProbability) continue;
      const auto post = luders_post_state(instr, a, s.input_state);
      total += priors[x] * post.probability * post.state.trace_with(guess[x]);
    }
  }
  return total;
}

}  // namespace luderscope
