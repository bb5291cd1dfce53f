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

// Analytic success probabilities used as oracles for the tester SDP:
// Helstrom discrimination, dichotomic projective qubit pairs with and
// without post-measurement states, the noisy-Z family {|0><0| + p|1><1|,
// (1-p)|1><1|} against Z, and the optimal entanglement-free strategy for
// projective pairs.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <utility>

#include "luderscope/matrix.hpp"
#include "luderscope/povm.hpp"
#include "luderscope/tester.hpp"

namespace luderscope {

/// ½(1 + ‖p1 ρ1 − p2 ρ2‖₁)
inline double helstrom(double p1, const HermitianOperator& rho1, double p2, const HermitianOperator& rho2) {
  if (rho1.dim() != rho2.dim()) throw DimensionError("helstrom: states of different dimension");
  if (std::abs(p1 + p2 - 1.0) > kPriorTolerance || p1 < 0.0 || p2 < 0.0) throw DomainError("helstrom: bad priors");
  return 0.5 * (1.0 + trace_norm(p1 * rho1 - p2 * rho2));
}

/// Two-outcome measurement attaining the Helstrom value: element 0 projects
/// onto the nonnegative eigenspace of pA ρA − pB ρB (zero eigenvalues go to A).
inline Povm helstrom_measurement(double pa, const HermitianOperator& rho_a, double pb,
                                 const HermitianOperator& rho_b) {
  const auto e = eig_hermitian(pa * rho_a - pb * rho_b);
  const int d = rho_a.dim();
  CMatrix proj = CMatrix::Zero(d, d);
  for (int k = 0; k < d; ++k)
    if (e.values(k) >= 0.0) proj += e.vectors.col(k) * e.vectors.col(k).adjoint();
  const auto first = HermitianOperator::symmetrized(proj);
  return Povm({first, HermitianOperator::identity(d) - first});
}

// ---------------------------------------------------------------------------
// Projective qubit pairs

/// Measurements {|ψ><ψ|, |ψ⊥><ψ⊥|} and {|φ><φ|, |φ⊥><φ⊥|} with priors.
class ProjectivePair {
 public:
  ProjectivePair(PureState psi, PureState phi, double p_psi = 0.5, double p_phi = 0.5)
      : psi_(std::move(psi)), phi_(std::move(phi)), p_psi_(p_psi), p_phi_(p_phi) {
    if (psi_.dim() != 2 || phi_.dim() != 2 || !psi_.normalized() || !phi_.normalized())
      throw DomainError("projective pair needs normalized qubit states");
    if (p_psi < 0.0 || p_phi < 0.0 || std::abs(p_psi + p_phi - 1.0) > 1e-12)
      throw DomainError("projective pair priors must be nonnegative and sum to 1");
  }

  [[nodiscard]] const PureState& psi() const { return psi_; }
  [[nodiscard]] const PureState& phi() const { return phi_; }
  [[nodiscard]] double p_psi() const { return p_psi_; }
  [[nodiscard]] double p_phi() const { return p_phi_; }
  /// |<ψ|φ>|²
  [[nodiscard]] double overlap() const { return std::min(1.0, std::norm(psi_.inner(phi_))); }
  /// 1 − |<ψ|φ>|², computed as |<ψ⊥|φ>|² so it keeps its digits near 0.
  [[nodiscard]] double complement() const {
    return std::clamp(std::norm(psi_.qubit_orthogonal().inner(phi_)), 0.0, 1.0);
  }

  [[nodiscard]] Povm first() const { return projective_qubit_povm(psi_); }
  [[nodiscard]] Povm second() const { return projective_qubit_povm(phi_); }

 private:
  PureState psi_;
  PureState phi_;
  double p_psi_;
  double p_phi_;
};

/// With post-measurement states: ½(1 + sqrt(1 − 4 p_ψ p_φ |<ψ|φ>|⁴)).
/// The radicands are rewritten with c = 1 − x as (p_ψ − p_φ)² + 4 p_ψ p_φ c(2 − c)
/// and (p_ψ − p_φ)² + 4 p_ψ p_φ c, which avoids cancellation when ψ ≈ φ.
inline double thm1_success(const ProjectivePair& pair) {
  const double c = pair.complement(), q = 4.0 * pair.p_psi() * pair.p_phi(), d = pair.p_psi() - pair.p_phi();
  return 0.5 * (1.0 + std::sqrt(d * d + q * c * (2.0 - c)));
}

/// Outcome only: ½(1 + sqrt(1 − 4 p_ψ p_φ |<ψ|φ>|²)).
inline double one_copy_success(const ProjectivePair& pair) {
  const double c = pair.complement(), q = 4.0 * pair.p_psi() * pair.p_phi(), d = pair.p_psi() - pair.p_phi();
  return 0.5 * (1.0 + std::sqrt(d * d + q * c));
}

struct ProjectiveAdvantage {
  double value;
  bool degenerate;  // identical measurements; value is the limit sqrt(2)
};

/// sqrt(1 + |<ψ|φ>|²) at equal priors.
inline ProjectiveAdvantage projective_advantage(const PureState& psi, const PureState& phi) {
  const double x = std::min(1.0, std::norm(psi.inner(phi)));
  return {std::sqrt(1.0 + x), 1.0 - x < 1e-12};
}

// ---------------------------------------------------------------------------
// Noisy Z family

/// Noise parameter p ∈ [0, 1] and a qubit probe state ρ.
class NoisyZParams {
 public:
  NoisyZParams(double p, HermitianOperator rho) : p_(p), rho_(std::move(rho)) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("noise parameter p must lie in [0, 1]");
    if (rho_.dim() != 2) throw DimensionError("probe state must be a qubit");
    require_state(rho_);
  }

  [[nodiscard]] double p() const { return p_; }
  [[nodiscard]] const HermitianOperator& rho() const { return rho_; }

 private:
  double p_;
  HermitianOperator rho_;
};

inline void require_unit_interval(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("noise parameter p must lie in [0, 1]");
}

/// Optimal outcome-only success against Z: ½ + p/2.
inline double thm2_measurement_success(double p) {
  require_unit_interval(p);
  return 0.5 + 0.5 * p;
}

/// Difference of the Lüders channel outputs (noisy − Z) on probe ρ, on
/// out ⊗ flag: pρ₁₁|10><10| + √p ρ₀₁|00><10| + √p ρ₁₀|10><00| − pρ₁₁|11><11|.
inline HermitianOperator thm2_operator(const NoisyZParams& params) {
  const double p = params.p(), s = std::sqrt(p);
  const auto& r = params.rho();
  CMatrix m = CMatrix::Zero(4, 4);
  m(2, 2) = p * r(1, 1).real();
  m(0, 2) = s * r(0, 1);
  m(2, 0) = s * r(1, 0);
  m(3, 3) = -p * r(1, 1).real();
  return HermitianOperator(m);
}

/// Eigenvalues of thm2_operator, in the order
/// (0, (pρ₁₁ − R)/2, (pρ₁₁ + R)/2, −pρ₁₁) with R = sqrt(p²ρ₁₁² + 4p|ρ₀₁|²).
inline std::array<double, 4> thm2_eigenvalues(const NoisyZParams& params) {
  const double p = params.p();
  const double r11 = params.rho()(1, 1).real();
  const double c = std::norm(params.rho()(0, 1));
  const double root = std::sqrt(p * p * r11 * r11 + 4.0 * p * c);
  return {0.0, 0.5 * (p * r11 - root), 0.5 * (p * r11 + root), -p * r11};
}

/// Success of the entanglement-free strategy probing with ρ and measuring the
/// outputs optimally: ½ + ¼ ‖thm2_operator‖₁.
inline double thm2_locc_success(const NoisyZParams& params) {
  const auto l = thm2_eigenvalues(params);
  return 0.5 + 0.25 * (std::abs(l[0]) + std::abs(l[1]) + std::abs(l[2]) + std::abs(l[3]));
}

/// Probe maximizing thm2_locc_success: the real pure state with
/// ρ₁₁ = 1/(2 − √p).
inline HermitianOperator thm2_optimal_probe(double p) {
  require_unit_interval(p);
  const double t = 1.0 / (2.0 - std::sqrt(p));
  CVector v(2);
  v << std::sqrt(1.0 - t), std::sqrt(t);
  return HermitianOperator::projector(PureState::normalize(v));
}

/// max_ρ thm2_locc_success = 1/(2 − √p). It also equals the unrestricted
/// (entangled) Lüders optimum, as the tester SDP confirms.
inline double thm2_locc_optimum(double p) {
  require_unit_interval(p);
  return 1.0 / (2.0 - std::sqrt(p));
}

/// Exact Δ(Z, W^p) = d_L/d_M = 1/(√p (2 − √p)); diverges as p → 0.
inline double thm2_advantage(double p) {
  if (!(p > 0.0 && p <= 1.0)) throw DomainError("advantage needs p in (0, 1]");
  const double s = std::sqrt(p);
  return 1.0 / (s * (2.0 - s));
}

/// (p + √p)/(2p). Exceeds thm2_advantage(p) for every p in (0, 1), so it is
/// not a valid lower bound on the advantage; kept for comparison.
inline double thm2_bias_lower(double p) {
  if (!(p > 0.0 && p <= 1.0)) throw DomainError("bias ratio needs p in (0, 1]");
  return (p + std::sqrt(p)) / (2.0 * p);
}

// ---------------------------------------------------------------------------
// Entanglement-free strategy for projective pairs

inline std::array<double, 3> bloch_vector(const PureState& s) {
  if (s.dim() != 2) throw DimensionError("Bloch vector needs a qubit");
  const Complex a = s(0), b = s(1);
  const Complex ab = std::conj(a) * b;
  return {2.0 * ab.real(), 2.0 * ab.imag(), std::norm(a) - std::norm(b)};
}

inline HermitianOperator bloch_state(const std::array<double, 3>& n) {
  return HermitianOperator::symmetrized(0.5 * (CMatrix::Identity(2, 2) + n[0] * pauli_x() + n[1] * pauli_y() +
                                               n[2] * pauli_z()));
}

/// Equal-prior optimal sequential strategy: probe along the bisector of the
/// Bloch vectors of ψ and φ⊥; after outcome 0 discriminate ψ (guess 0) from φ
/// (guess 1), after outcome 1 discriminate φ⊥ (guess 1) from ψ⊥ (guess 0),
/// both with priors (p_M, 1 − p_M), p_M = one_copy_success(pair).
inline SequentialStrategy optimal_sequential_strategy(const ProjectivePair& pair) {
  if (std::abs(pair.p_psi() - 0.5) > 1e-12)
    throw DomainError("sequential strategy construction needs equal priors");
  const auto psi_perp = pair.psi().qubit_orthogonal();
  const auto phi_perp = pair.phi().qubit_orthogonal();
  const auto u = bloch_vector(pair.psi());
  const auto v = bloch_vector(phi_perp);
  std::array<double, 3> n{u[0] + v[0], u[1] + v[1], u[2] + v[2]};
  double norm = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
  bool degenerate = false;
  if (norm < 1e-9) {
    // Antipodal: any unit vector orthogonal to u. Cross u with the basis axis
    // it is least aligned with.
    degenerate = true;
    int k = 0;
    for (int j = 1; j < 3; ++j)
      if (std::abs(u[j]) < std::abs(u[k])) k = j;
    std::array<double, 3> e{0.0, 0.0, 0.0};
    e[k] = 1.0;
    n = {u[1] * e[2] - u[2] * e[1], u[2] * e[0] - u[0] * e[2], u[0] * e[1] - u[1] * e[0]};
    norm = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
  }
  for (double& c : n) c /= norm;

  const double pm = one_copy_success(pair);
  const auto psi = HermitianOperator::projector(pair.psi());
  const auto phi = HermitianOperator::projector(pair.phi());
  const auto psi_p = HermitianOperator::projector(psi_perp);
  const auto phi_p = HermitianOperator::projector(phi_perp);

  // Element x of each adaptive POVM means "guess x".
  const Povm after0 = helstrom_measurement(pm, psi, 1.0 - pm, phi);
  const Povm after1_raw = helstrom_measurement(pm, phi_p, 1.0 - pm, psi_p);
  const Povm after1({after1_raw[1], after1_raw[0]});
  return {bloch_state(n), {after0, after1}, degenerate};
}

/// (|ψ><ψ| ⊗ 1)|φ₂⁺> with normalized φ₂⁺; equals (1/√2)|ψ> ⊗ conj(|ψ>).
inline PureState entangled_collapse(const PureState& psi) {
  if (psi.dim() != 2) throw DimensionError("entangled collapse is defined for qubits");
  const CVector phi = max_entangled(2, true).amplitudes();
  const CMatrix proj = psi.amplitudes() * psi.amplitudes().adjoint();
  return PureState(kron(proj, CMatrix::Identity(2, 2)) * phi, Normalization::unnormalized);
}

}  // namespace luderscope
