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

// Dense complex linear algebra used throughout the library: tensor products,
// partial traces, Hermitian eigendecomposition, PSD square roots, trace norm
// and the universal NOT map.
//
// Subsystem convention: factor 0 of a SystemDims is the leftmost tensor factor,
// so for dims (d0, d1, d2) the row index of |i0 i1 i2> is (i0 * d1 + i1) * d2 + i2.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "luderscope/error.hpp"

namespace luderscope {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kHermiticityTolerance = 1e-10;
inline constexpr double kNormTolerance = 1e-10;
inline constexpr double kSqrtPsdTolerance = 1e-10;
inline constexpr double kEigResidualTolerance = 1e-9;

/// Largest entrywise modulus, the ‖·‖_max used by every residual in the library.
inline double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline bool all_finite(const CMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
  return true;
}

inline CMatrix transpose(const CMatrix& m) { return m.transpose(); }
inline CMatrix conj(const CMatrix& m) { return m.conjugate(); }
inline CMatrix dagger(const CMatrix& m) { return m.adjoint(); }

// ---------------------------------------------------------------------------
// SystemDims

class SystemDims {
 public:
  SystemDims() = default;
  SystemDims(std::initializer_list<int> dims) : dims_(dims) { check(); }
  explicit SystemDims(std::vector<int> dims) : dims_(std::move(dims)) { check(); }

  [[nodiscard]] int total() const {
    return std::accumulate(dims_.begin(), dims_.end(), 1, std::multiplies<>());
  }
  [[nodiscard]] std::size_t size() const { return dims_.size(); }
  [[nodiscard]] bool empty() const { return dims_.empty(); }
  [[nodiscard]] int operator[](std::size_t k) const { return dims_.at(k); }
  [[nodiscard]] const std::vector<int>& factors() const { return dims_; }

  [[nodiscard]] std::string str() const {
    std::ostringstream os;
    os << '(';
    for (std::size_t k = 0; k < dims_.size(); ++k) os << (k ? "," : "") << dims_[k];
    os << ')';
    return os.str();
  }

  friend bool operator==(const SystemDims&, const SystemDims&) = default;

 private:
  void check() const {
    for (int d : dims_)
      if (d < 1) throw DimensionError("subsystem dimension must be >= 1");
  }

  std::vector<int> dims_;
};

// ---------------------------------------------------------------------------
// PureState

enum class Normalization { normalized, unnormalized };

class PureState {
 public:
  explicit PureState(CVector amplitudes, Normalization n = Normalization::normalized)
      : amplitudes_(std::move(amplitudes)), normalization_(n) {
    if (amplitudes_.size() < 1) throw DimensionError("pure state needs at least one amplitude");
    if (!all_finite(amplitudes_)) throw DomainError("pure state has non-finite amplitudes");
    if (n == Normalization::normalized && std::abs(amplitudes_.norm() - 1.0) > kNormTolerance) {
      std::ostringstream os;
      os << "pure state is not normalized (norm " << amplitudes_.norm() << ")";
      throw DomainError(os.str());
    }
  }

  /// Computational basis ket |k> in dimension d.
  static PureState basis(int d, int k) {
    if (k < 0 || k >= d) throw DimensionError("basis index out of range");
    CVector v = CVector::Zero(d);
    v(k) = 1.0;
    return PureState(std::move(v));
  }

  /// Normalizes an arbitrary nonzero vector.
  static PureState normalize(const CVector& v) {
    const double n = v.norm();
    if (!(n > 0.0)) throw DomainError("cannot normalize the zero vector");
    return PureState(v / n);
  }

  [[nodiscard]] int dim() const { return static_cast<int>(amplitudes_.size()); }
  [[nodiscard]] const CVector& amplitudes() const { return amplitudes_; }
  [[nodiscard]] bool normalized() const { return normalization_ == Normalization::normalized; }
  [[nodiscard]] Complex operator()(int k) const { return amplitudes_(k); }

  /// <this|other>
  [[nodiscard]] Complex inner(const PureState& other) const {
    if (other.dim() != dim()) throw DimensionError("inner product of states of different dimension");
    return amplitudes_.dot(other.amplitudes_);
  }

  /// Orthogonal qubit ket -conj(b)|0> + conj(a)|1>.
  [[nodiscard]] PureState qubit_orthogonal() const {
    if (dim() != 2) throw DimensionError("orthogonal complement ket is only defined for qubits");
    CVector v(2);
    v << -std::conj(amplitudes_(1)), std::conj(amplitudes_(0));
    return PureState(std::move(v), normalization_);
  }

 private:
  CVector amplitudes_;
  Normalization normalization_;
};

// ---------------------------------------------------------------------------
// HermitianOperator

class HermitianOperator {
 public:
  /// Validates squareness, finiteness and Hermiticity within kHermiticityTolerance,
  /// then stores the symmetrized matrix (H + H†)/2.
  explicit HermitianOperator(const CMatrix& m) {
    check_shape(m);
    const double asym = max_abs(m - m.adjoint());
    if (asym > kHermiticityTolerance) {
      std::ostringstream os;
      os << "operator is not Hermitian (max |H - H^dagger| = " << asym << ")";
      throw NotHermitianError(os.str());
    }
    m_ = (m + m.adjoint()) * 0.5;
  }

  /// Symmetrizes without the tolerance check; for results that are Hermitian
  /// by construction but may have drifted through long products.
  static HermitianOperator symmetrized(const CMatrix& m) {
    check_shape(m);
    HermitianOperator h;
    h.m_ = (m + m.adjoint()) * 0.5;
    return h;
  }

  static HermitianOperator identity(int d) { return HermitianOperator(CMatrix::Identity(d, d)); }
  static HermitianOperator zero(int d) { return HermitianOperator(CMatrix::Zero(d, d)); }

  static HermitianOperator projector(const PureState& s) {
    return symmetrized(s.amplitudes() * s.amplitudes().adjoint());
  }

  static HermitianOperator diagonal(const std::vector<double>& d) {
    CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
    for (std::size_t k = 0; k < d.size(); ++k) m(k, k) = d[k];
    return HermitianOperator(m);
  }

  [[nodiscard]] int dim() const { return static_cast<int>(m_.rows()); }
  [[nodiscard]] const CMatrix& matrix() const { return m_; }
  [[nodiscard]] Complex operator()(int i, int j) const { return m_(i, j); }
  [[nodiscard]] double trace() const { return m_.trace().real(); }

  /// Re Tr(this * other); exact for Hermitian arguments.
  [[nodiscard]] double trace_with(const HermitianOperator& other) const {
    if (other.dim() != dim()) throw DimensionError("trace of product of operators of different dimension");
    return (m_.cwiseProduct(other.m_.transpose())).sum().real();
  }

  HermitianOperator& operator+=(const HermitianOperator& o) {
    if (o.dim() != dim()) throw DimensionError("sum of operators of different dimension");
    m_ += o.m_;
    return *this;
  }
  HermitianOperator& operator-=(const HermitianOperator& o) {
    if (o.dim() != dim()) throw DimensionError("difference of operators of different dimension");
    m_ -= o.m_;
    return *this;
  }
  HermitianOperator& operator*=(double s) {
    m_ *= s;
    return *this;
  }

  friend HermitianOperator operator+(HermitianOperator a, const HermitianOperator& b) { return a += b; }
  friend HermitianOperator operator-(HermitianOperator a, const HermitianOperator& b) { return a -= b; }
  friend HermitianOperator operator*(double s, HermitianOperator a) { return a *= s; }
  friend HermitianOperator operator*(HermitianOperator a, double s) { return a *= s; }

 private:
  HermitianOperator() = default;

  static void check_shape(const CMatrix& m) {
    if (m.rows() < 1 || m.rows() != m.cols()) throw DimensionError("Hermitian operator must be square and non-empty");
    if (!all_finite(m)) throw DomainError("operator has non-finite entries");
  }

  CMatrix m_;
};

// ---------------------------------------------------------------------------
// Tensor products

/// (a⊗b)[i*rb + k][j*cb + l] = a[i][j] * b[k][l]
inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b) {
  return HermitianOperator::symmetrized(kron(a.matrix(), b.matrix()));
}

inline PureState kron(const PureState& a, const PureState& b) {
  const bool normalized = a.normalized() && b.normalized();
  return PureState(kron(CMatrix(a.amplitudes()), CMatrix(b.amplitudes())),
                   normalized ? Normalization::normalized : Normalization::unnormalized);
}

namespace detail {

// Splits a flat index into per-factor digits, factor 0 most significant.
inline void unravel(int flat, const std::vector<int>& dims, std::vector<int>& digits) {
  for (std::size_t k = dims.size(); k-- > 0;) {
    digits[k] = flat % dims[k];
    flat /= dims[k];
  }
}

inline int ravel(const std::vector<int>& digits, const std::vector<int>& dims) {
  int flat = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) flat = flat * dims[k] + digits[k];
  return flat;
}

}  // namespace detail

/// Traces out every factor not listed in `keep`; kept factors stay in their original order.
inline CMatrix partial_trace(const CMatrix& m, const SystemDims& dims, const std::vector<int>& keep) {
  if (m.rows() != m.cols() || m.rows() != dims.total()) {
    throw DimensionError("partial_trace: operator of size " + std::to_string(m.rows()) +
                         " does not match dims " + dims.str());
  }
  std::vector<bool> kept(dims.size(), false);
  for (int k : keep) {
    if (k < 0 || static_cast<std::size_t>(k) >= dims.size()) throw DimensionError("partial_trace: bad factor index");
    if (kept[k]) throw DimensionError("partial_trace: duplicate factor index");
    kept[k] = true;
  }
  std::vector<int> kdims;
  for (std::size_t k = 0; k < dims.size(); ++k)
    if (kept[k]) kdims.push_back(dims[k]);
  const int out_dim = std::accumulate(kdims.begin(), kdims.end(), 1, std::multiplies<>());

  CMatrix out = CMatrix::Zero(out_dim, out_dim);
  const auto& f = dims.factors();
  std::vector<int> ri(f.size()), ci(f.size()), rk, ck;
  for (int r = 0; r < m.rows(); ++r) {
    detail::unravel(r, f, ri);
    for (int c = 0; c < m.cols(); ++c) {
      detail::unravel(c, f, ci);
      bool diag = true;
      for (std::size_t k = 0; k < f.size() && diag; ++k)
        if (!kept[k] && ri[k] != ci[k]) diag = false;
      if (!diag) continue;
      rk.clear();
      ck.clear();
      for (std::size_t k = 0; k < f.size(); ++k)
        if (kept[k]) {
          rk.push_back(ri[k]);
          ck.push_back(ci[k]);
        }
      out(detail::ravel(rk, kdims), detail::ravel(ck, kdims)) += m(r, c);
    }
  }
  return out;
}

inline HermitianOperator partial_trace(const HermitianOperator& m, const SystemDims& dims,
                                       const std::vector<int>& keep) {
  return HermitianOperator::symmetrized(partial_trace(m.matrix(), dims, keep));
}

// ---------------------------------------------------------------------------
// Spectral routines

struct EigenDecomposition {
  RVector values;   // ascending
  CMatrix vectors;  // orthonormal columns
};

inline EigenDecomposition eig_hermitian(const HermitianOperator& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h.matrix());
  if (es.info() != Eigen::Success) throw NumericError("Hermitian eigensolver did not converge");
  EigenDecomposition out{es.eigenvalues(), es.eigenvectors()};
  const CMatrix& v = out.vectors;
  const double scale = std::max(1.0, max_abs(h.matrix()));
  const double recon = max_abs(h.matrix() - v * out.values.cast<Complex>().asDiagonal() * v.adjoint());
  const double ortho = max_abs(v.adjoint() * v - CMatrix::Identity(v.cols(), v.cols()));
  if (recon > kEigResidualTolerance * scale || ortho > kEigResidualTolerance) {
    std::ostringstream os;
    os << "eigendecomposition residual out of tolerance (reconstruction " << recon << ", orthogonality " << ortho
       << ")";
    throw NumericError(os.str());
  }
  return out;
}

inline double min_eigenvalue(const HermitianOperator& h) { return eig_hermitian(h).values(0); }

/// Unique PSD square root; eigenvalues in [-1e-10, 0) are clamped to zero.
/// Eigenvalues at roundoff level (below dim·eps·|λ|max) count as exact zeros,
/// otherwise sqrt(1e-17) ~ 3e-9 leaks into Kraus operators of projectors.
inline HermitianOperator psd_sqrt(const HermitianOperator& h) {
  const auto e = eig_hermitian(h);
  if (e.values(0) < -kSqrtPsdTolerance) {
    std::ostringstream os;
    os << "psd_sqrt: operator is not PSD (min eigenvalue " << e.values(0) << ")";
    throw NotPsdError(os.str());
  }
  const double floor =
      h.dim() * std::numeric_limits<double>::epsilon() * std::max(1.0, e.values.cwiseAbs().maxCoeff());
  RVector roots = e.values.unaryExpr([floor](double v) { return v <= floor ? 0.0 : std::sqrt(v); });
  return HermitianOperator::symmetrized(e.vectors * roots.cast<Complex>().asDiagonal() * e.vectors.adjoint());
}

/// Sum of absolute eigenvalues.
inline double trace_norm(const HermitianOperator& h) { return eig_hermitian(h).values.cwiseAbs().sum(); }

/// Universal NOT map (Tr(A)·1 - A)/(d - 1).
inline HermitianOperator universal_not(const HermitianOperator& a) {
  const int d = a.dim();
  if (d < 2) throw DomainError("universal NOT needs dimension >= 2");
  return HermitianOperator::symmetrized((a.matrix().trace() * CMatrix::Identity(d, d) - a.matrix()) /
                                        static_cast<double>(d - 1));
}

/// Universal NOT applied to tensor factor `factor` only (identity on the rest).
inline HermitianOperator universal_not_on(const HermitianOperator& a, const SystemDims& dims, int factor) {
  if (a.dim() != dims.total()) throw DimensionError("universal_not_on: dims do not match operator");
  if (factor < 0 || static_cast<std::size_t>(factor) >= dims.size()) throw DimensionError("bad factor index");
  const int dk = dims[factor];
  if (dk < 2) throw DomainError("universal NOT needs dimension >= 2");
  const auto& f = dims.factors();
  const CMatrix& m = a.matrix();
  // Tr_k(A) ⊗_k 1, assembled in place.
  CMatrix reduced = CMatrix::Zero(m.rows(), m.cols());
  std::vector<int> ri(f.size()), ci(f.size());
  for (int r = 0; r < m.rows(); ++r) {
    detail::unravel(r, f, ri);
    for (int c = 0; c < m.cols(); ++c) {
      detail::unravel(c, f, ci);
      if (ri[factor] != ci[factor]) continue;
      Complex s = 0.0;
      auto rr = ri, cc = ci;
      for (int t = 0; t < dk; ++t) {
        rr[factor] = t;
        cc[factor] = t;
        s += m(detail::ravel(rr, f), detail::ravel(cc, f));
      }
      reduced(r, c) = s;
    }
  }
  return HermitianOperator::symmetrized((reduced - m) / static_cast<double>(dk - 1));
}

/// Σ_j |j>|j>, scaled by 1/sqrt(d) when normalized.
inline PureState max_entangled(int d, bool normalized) {
  if (d < 2) throw DomainError("maximally entangled state needs d >= 2");
  CVector v = CVector::Zero(static_cast<Eigen::Index>(d) * d);
  for (int j = 0; j < d; ++j) v(j * d + j) = 1.0;
  if (normalized) return PureState(v / std::sqrt(static_cast<double>(d)));
  return PureState(std::move(v), Normalization::unnormalized);
}

// ---------------------------------------------------------------------------
// Pauli matrices

inline CMatrix pauli_x() {
  CMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
inline CMatrix pauli_y() {
  CMatrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}
inline CMatrix pauli_z() {
  CMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

}  // namespace luderscope
