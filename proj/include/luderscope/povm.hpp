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

// POVMs, their Lüders instruments, and the Choi operators of the two channels
// that represent a measurement: measure-and-prepare (outcome only) and the
// Lüders channel (post-measurement state plus outcome flag).

#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "luderscope/matrix.hpp"

namespace luderscope {

inline constexpr double kPovmPsdTolerance = 1e-9;
inline constexpr double kPovmCompletenessTolerance = 1e-9;
inline constexpr double kInstrumentTolerance = 1e-8;
inline constexpr double kChoiTolerance = 1e-8;
inline constexpr double kZeroProbability = 1e-12;

/// Ordered list of effects on a common Hilbert space. Construction only checks
/// shapes; use validate_povm / require_valid for the positivity and
/// completeness invariants.
class Povm {
 public:
  explicit Povm(std::vector<HermitianOperator> elements) : elements_(std::move(elements)) {
    if (elements_.empty()) throw DimensionError("POVM needs at least one element");
    for (const auto& e : elements_)
      if (e.dim() != elements_.front().dim()) throw DimensionError("POVM elements have different dimensions");
  }

  [[nodiscard]] int dim() const { return elements_.front().dim(); }
  [[nodiscard]] int outcomes() const { return static_cast<int>(elements_.size()); }
  [[nodiscard]] const HermitianOperator& operator[](int a) const { return elements_.at(a); }
  [[nodiscard]] const std::vector<HermitianOperator>& elements() const { return elements_; }

  /// Appends zero effects up to `n` outcomes.
  [[nodiscard]] Povm padded(int n) const {
    if (n < outcomes()) throw DimensionError("cannot pad a POVM to fewer outcomes");
    auto e = elements_;
    while (static_cast<int>(e.size()) < n) e.push_back(HermitianOperator::zero(dim()));
    return Povm(std::move(e));
  }

 private:
  std::vector<HermitianOperator> elements_;
};

struct PovmReport {
  std::vector<double> min_eigenvalues;
  double completeness_residual = 0.0;
  bool passed = false;

  [[nodiscard]] std::string summary() const {
    std::ostringstream os;
    os << (passed ? "valid" : "invalid") << " POVM: min eigenvalues [";
    for (std::size_t a = 0; a < min_eigenvalues.size(); ++a) os << (a ? ", " : "") << min_eigenvalues[a];
    os << "], completeness residual " << completeness_residual;
    return os.str();
  }
};

inline PovmReport validate_povm(const Povm& p) {
  PovmReport r;
  CMatrix sum = CMatrix::Zero(p.dim(), p.dim());
  bool psd = true;
  for (const auto& e : p.elements()) {
    const double lo = min_eigenvalue(e);
    r.min_eigenvalues.push_back(lo);
    psd = psd && lo >= -kPovmPsdTolerance;
    sum += e.matrix();
  }
  r.completeness_residual = max_abs(sum - CMatrix::Identity(p.dim(), p.dim()));
  r.passed = psd && r.completeness_residual <= kPovmCompletenessTolerance;
  return r;
}

inline void require_valid(const Povm& p) {
  const auto r = validate_povm(p);
  if (!r.passed) throw InputError(r.summary());
}

// ---------------------------------------------------------------------------
// Lüders instrument

class LudersInstrument {
 public:
  /// Kraus operators must be PSD and satisfy Σ K_a² = 1 within 1e-8.
  explicit LudersInstrument(std::vector<HermitianOperator> kraus) : kraus_(std::move(kraus)) {
    if (kraus_.empty()) throw DimensionError("instrument needs at least one Kraus operator");
    const int d = kraus_.front().dim();
    CMatrix sum = CMatrix::Zero(d, d);
    for (const auto& k : kraus_) {
      if (k.dim() != d) throw DimensionError("Kraus operators have different dimensions");
      if (min_eigenvalue(k) < -kInstrumentTolerance) throw DomainError("Lüders Kraus operators must be PSD");
      sum += k.matrix() * k.matrix();
    }
    const double res = max_abs(sum - CMatrix::Identity(d, d));
    if (res > kInstrumentTolerance) {
      std::ostringstream os;
      os << "Kraus operators are not complete (residual " << res << ")";
      throw DomainError(os.str());
    }
  }

  [[nodiscard]] int dim() const { return kraus_.front().dim(); }
  [[nodiscard]] int outcomes() const { return static_cast<int>(kraus_.size()); }
  [[nodiscard]] const HermitianOperator& operator[](int a) const { return kraus_.at(a); }
  [[nodiscard]] const std::vector<HermitianOperator>& kraus() const { return kraus_; }

 private:
  std::vector<HermitianOperator> kraus_;
};

inline LudersInstrument luders_instrument(const Povm& p) {
  require_valid(p);
  std::vector<HermitianOperator> k;
  k.reserve(p.elements().size());
  for (const auto& e : p.elements()) k.push_back(psd_sqrt(e));
  return LudersInstrument(std::move(k));
}

/// M_a = K_a† K_a.
inline Povm instrument_povm(const LudersInstrument& instr) {
  std::vector<HermitianOperator> m;
  for (const auto& k : instr.kraus()) m.push_back(HermitianOperator::symmetrized(k.matrix().adjoint() * k.matrix()));
  return Povm(std::move(m));
}

struct PostMeasurement {
  double probability;
  HermitianOperator state;
};

inline void require_state(const HermitianOperator& rho) {
  if (std::abs(rho.trace() - 1.0) > kPovmCompletenessTolerance) throw DomainError("input is not unit trace");
  if (min_eigenvalue(rho) < -kPovmPsdTolerance) throw DomainError("input is not positive semidefinite");
}

/// Outcome probability Tr(M_a ρ) and normalized state K_a ρ K_a / prob.
inline PostMeasurement luders_post_state(const LudersInstrument& instr, int a, const HermitianOperator& rho) {
  if (a < 0 || a >= instr.outcomes()) throw DimensionError("outcome index out of range");
  if (rho.dim() != instr.dim()) throw DimensionError("state dimension does not match instrument");
  require_state(rho);
  const CMatrix& k = instr[a].matrix();
  const CMatrix out = k * rho.matrix() * k;
  const double prob = out.trace().real();
  if (prob <= kZeroProbability) {
    std::ostringstream os;
    os << "outcome " << a << " has probability " << prob << "; post-measurement state undefined";
    throw UndefinedPostStateError(os.str());
  }
  return {prob, HermitianOperator::symmetrized(out / prob)};
}

// ---------------------------------------------------------------------------
// Choi operators

/// Choi operator on in ⊗ out_1 ⊗ ... ; dims[0] is the input factor and the
/// last factor is the classical outcome flag for every channel built here.
class ChoiOperator {
 public:
  ChoiOperator(HermitianOperator op, SystemDims dims) : op_(std::move(op)), dims_(std::move(dims)) {
    if (dims_.size() < 2) throw DimensionError("Choi operator needs input and output factors");
    if (dims_.total() != op_.dim())
      throw DimensionError("Choi operator of size " + std::to_string(op_.dim()) + " does not match dims " +
                           dims_.str());
  }

  [[nodiscard]] const HermitianOperator& op() const { return op_; }
  [[nodiscard]] const SystemDims& dims() const { return dims_; }
  [[nodiscard]] int in_dim() const { return dims_[0]; }
  [[nodiscard]] int out_dim() const { return dims_.total() / dims_[0]; }
  [[nodiscard]] int flag_dim() const { return dims_[dims_.size() - 1]; }

 private:
  HermitianOperator op_;
  SystemDims dims_;
};

struct ChoiReport {
  double min_eigenvalue = 0.0;
  double tp_residual = 0.0;
  bool completely_positive = false;
  bool trace_preserving = false;
};

inline ChoiReport validate_choi(const ChoiOperator& c) {
  ChoiReport r;
  r.min_eigenvalue = min_eigenvalue(c.op());
  const CMatrix reduced = partial_trace(c.op().matrix(), c.dims(), {0});
  r.tp_residual = max_abs(reduced - CMatrix::Identity(c.in_dim(), c.in_dim()));
  r.completely_positive = r.min_eigenvalue >= -kChoiTolerance;
  r.trace_preserving = r.tp_residual <= kChoiTolerance;
  return r;
}

inline CMatrix flag_projector(int n, int a) {
  CMatrix f = CMatrix::Zero(n, n);
  f(a, a) = 1.0;
  return f;
}

/// Σ_a M_a^T ⊗ |a><a| on (in, n).
inline ChoiOperator mp_channel_choi(const Povm& p) {
  require_valid(p);
  const int n = p.outcomes();
  CMatrix c = CMatrix::Zero(p.dim() * n, p.dim() * n);
  for (int a = 0; a < n; ++a) c += kron(transpose(p[a].matrix()), flag_projector(n, a));
  return ChoiOperator(HermitianOperator::symmetrized(c), SystemDims{p.dim(), n});
}

/// Σ_a (1 ⊗ K_a)|Φ+><Φ+|(1 ⊗ K_a) ⊗ |a><a| on (in, in, n), with K_a = sqrt(M_a).
inline ChoiOperator luders_channel_choi(const Povm& p) {
  const auto instr = luders_instrument(p);
  const int d = p.dim();
  const int n = p.outcomes();
  const CVector phi = max_entangled(d, false).amplitudes();
  const CMatrix id = CMatrix::Identity(d, d);
  CMatrix c = CMatrix::Zero(d * d * n, d * d * n);
  for (int a = 0; a < n; ++a) {
    const CVector v = kron(id, instr[a].matrix()) * phi;
    c += kron(v * v.adjoint(), flag_projector(n, a));
  }
  return ChoiOperator(HermitianOperator::symmetrized(c), SystemDims{d, d, n});
}

// ---------------------------------------------------------------------------
// Measurement families

/// {|ψ><ψ|, 1 - |ψ><ψ|}
inline Povm projective_qubit_povm(const PureState& psi) {
  if (psi.dim() != 2 || !psi.normalized()) throw DomainError("projective qubit POVM needs a normalized qubit state");
  const auto proj = HermitianOperator::projector(psi);
  return Povm({proj, HermitianOperator::identity(2) - proj});
}

inline Povm computational_povm(int d = 2) {
  std::vector<HermitianOperator> e;
  for (int k = 0; k < d; ++k) e.push_back(HermitianOperator::projector(PureState::basis(d, k)));
  return Povm(std::move(e));
}

/// {|+><+|, |-><-|}
inline Povm hadamard_povm() {
  CVector plus(2);
  plus << 1.0, 1.0;
  return projective_qubit_povm(PureState::normalize(plus));
}

/// Three scaled projectors (1 + n_j·σ)/3 with
/// n_j = (cos(θ + 2πj/3), sin(θ + 2πj/3) cos φ, sin(θ + 2πj/3) sin φ).
inline Povm trine_povm(double theta, double phi) {
  std::vector<HermitianOperator> e;
  for (int j = 0; j < 3; ++j) {
    const double t = theta + 2.0 * std::numbers::pi * j / 3.0;
    const CMatrix m = (CMatrix::Identity(2, 2) + std::cos(t) * pauli_x() + std::sin(t) * std::cos(phi) * pauli_y() +
                       std::sin(t) * std::sin(phi) * pauli_z()) /
                      3.0;
    e.push_back(HermitianOperator(m));
  }
  return Povm(std::move(e));
}

/// |θ> = cos(θ/2)|0> + sin(θ/2)|1>.
inline PureState zx_ket(double theta) {
  CVector v(2);
  v << std::cos(theta / 2.0), std::sin(theta / 2.0);
  return PureState(std::move(v));
}

/// {|θ><θ| + p|θ⊥><θ⊥|, (1-p)|θ⊥><θ⊥|} with |θ⊥> = -sin(θ/2)|0> + cos(θ/2)|1>.
inline Povm noisy_z_povm(double theta, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("noise parameter p must lie in [0, 1]");
  const auto up = HermitianOperator::projector(zx_ket(theta));
  const auto down = HermitianOperator::projector(zx_ket(theta + std::numbers::pi));
  return Povm({up + p * down, (1.0 - p) * down});
}

}  // namespace luderscope
