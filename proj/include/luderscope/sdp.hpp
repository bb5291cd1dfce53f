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

// Primal-dual interior-point solver for block-diagonal real symmetric SDPs
//
//   (P)  max  Σ_b tr(C_b X_b)   s.t.  Σ_b tr(A_ib X_b) = b_i,  X_b ⪰ 0
//   (D)  min  b·y               s.t.  Z_b = Σ_i y_i A_ib - C_b ⪰ 0
//
// Infeasible-start path following with the HKM search direction and a
// Mehrotra predictor-corrector step. Constraint matrices are sparse; the
// Schur complement is assembled entry by entry from their nonzeros, which is
// what makes the small, very sparse tester problems cheap.

#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "luderscope/error.hpp"

namespace luderscope::sdp {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct Entry {
  int row;
  int col;
  double value;
};

/// Part of a constraint living in one block. Entries list both triangles of
/// the symmetric matrix; duplicates are summed.
struct BlockTerm {
  int block;
  std::vector<Entry> entries;
};

struct Constraint {
  std::vector<BlockTerm> terms;
  double rhs = 0.0;
};

struct Problem {
  std::vector<int> block_sizes;
  std::vector<MatrixXd> objective;
  std::vector<Constraint> constraints;
};

struct Options {
  double tolerance = 1e-9;   // relative gap and infeasibilities at termination
  int max_iterations = 500;
  double step_fraction = 0.95;
};

enum class Status { optimal, max_iterations, infeasible };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::optimal:
      return "optimal";
    case Status::max_iterations:
      return "max-iter";
    case Status::infeasible:
      return "infeasible";
  }
  return "unknown";
}

struct Result {
  Status status = Status::max_iterations;
  std::vector<MatrixXd> x;
  std::vector<MatrixXd> z;
  VectorXd y;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  double complementarity = 0.0;
  int iterations = 0;
};

/// Adds value at (r, c) and, off the diagonal, at (c, r).
inline void add_symmetric(std::vector<Entry>& entries, int r, int c, double value) {
  entries.push_back({r, c, value});
  if (r != c) entries.push_back({c, r, value});
}

namespace detail {

struct TermRef {
  int constraint;
  const std::vector<Entry>* entries;
};

// Largest α with M + α·D ⪰ 0 (infinity when D keeps M inside the cone).
inline double max_step(const MatrixXd& m, const MatrixXd& d) {
  Eigen::LLT<MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) return 0.0;
  MatrixXd w = llt.matrixL().solve(d);
  w = llt.matrixL().solve(w.transpose()).transpose();
  w = 0.5 * (w + w.transpose());
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(w, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues()(0);
  return lo >= 0.0 ? std::numeric_limits<double>::infinity() : -1.0 / lo;
}

}  // namespace detail

class Solver {
 public:
  explicit Solver(const Problem& problem) : p_(problem) {
    nb_ = static_cast<int>(p_.block_sizes.size());
    m_ = static_cast<int>(p_.constraints.size());
    if (nb_ == 0 || static_cast<int>(p_.objective.size()) != nb_) throw DimensionError("sdp: block/objective mismatch");
    for (int b = 0; b < nb_; ++b) {
      if (p_.objective[b].rows() != p_.block_sizes[b] || p_.objective[b].cols() != p_.block_sizes[b])
        throw DimensionError("sdp: objective block has the wrong size");
      const MatrixXd& c = p_.objective[b];
      if ((c - c.transpose()).lpNorm<Eigen::Infinity>() > 1e-12 * (1.0 + c.lpNorm<Eigen::Infinity>()))
        throw DomainError("sdp: objective block is not symmetric");
      n_total_ += p_.block_sizes[b];
    }
    by_block_.resize(nb_);
    rhs_ = VectorXd(m_);
    for (int i = 0; i < m_; ++i) {
      rhs_(i) = p_.constraints[i].rhs;
      for (const auto& t : p_.constraints[i].terms) {
        if (t.block < 0 || t.block >= nb_) throw DimensionError("sdp: constraint refers to a missing block");
        for (const auto& e : t.entries)
          if (e.row < 0 || e.col < 0 || e.row >= p_.block_sizes[t.block] || e.col >= p_.block_sizes[t.block])
            throw DimensionError("sdp: constraint entry out of range");
        by_block_[t.block].push_back({i, &t.entries});
      }
    }

    // Gram matrix of the constraints, G_ij = Σ_b tr(A_ib A_jb), used to pull
    // search directions back onto {A(X) = b} when the Schur solve loses digits.
    std::vector<int> offset(nb_ + 1, 0);
    for (int b = 0; b < nb_; ++b) offset[b + 1] = offset[b] + p_.block_sizes[b] * p_.block_sizes[b];
    std::vector<Eigen::Triplet<double>> trip;
    for (int b = 0; b < nb_; ++b)
      for (const auto& t : by_block_[b])
        for (const auto& e : *t.entries)
          trip.emplace_back(t.constraint, offset[b] + e.row * p_.block_sizes[b] + e.col, e.value);
    Eigen::SparseMatrix<double> a(m_, offset[nb_]);
    a.setFromTriplets(trip.begin(), trip.end());
    const Eigen::SparseMatrix<double> gram = a * a.transpose();
    gram_ldlt_.compute(gram);
    if (gram_ldlt_.info() != Eigen::Success) throw DimensionError("sdp: constraints are linearly dependent");
  }

  Result solve(const Options& opt) const {
    Result res;
    std::vector<MatrixXd> x(nb_), z(nb_);
    VectorXd y = VectorXd::Zero(m_);

    double c_norm = 0.0;
    for (const auto& c : p_.objective) c_norm += c.squaredNorm();
    c_norm = std::sqrt(c_norm);
    const double b_norm = rhs_.norm();

    // Starting point: scaled identities, sized so that tr(X) roughly matches
    // the constraint right-hand sides and Z dominates the objective.
    const double xi = std::max(1.0, b_norm / std::sqrt(static_cast<double>(n_total_)));
    const double eta = std::max(1.0, c_norm);
    for (int b = 0; b < nb_; ++b) {
      const int n = p_.block_sizes[b];
      x[b] = xi * MatrixXd::Identity(n, n);
      z[b] = eta * MatrixXd::Identity(n, n);
    }

    int stalls = 0;
    for (int iter = 0;; ++iter) {
      const VectorXd rp = rhs_ - apply_a(x);
      std::vector<MatrixXd> rd = apply_at(y);
      double pobj = 0.0, xz = 0.0, rd_norm = 0.0;
      for (int b = 0; b < nb_; ++b) {
        rd[b] = p_.objective[b] + z[b] - rd[b];
        pobj += p_.objective[b].cwiseProduct(x[b]).sum();
        xz += x[b].cwiseProduct(z[b]).sum();
        rd_norm += rd[b].squaredNorm();
      }
      const double dobj = rhs_.dot(y);
      const double pinf = rp.norm() / (1.0 + b_norm);
      const double dinf = std::sqrt(rd_norm) / (1.0 + c_norm);
      const double denom = 1.0 + std::abs(pobj) + std::abs(dobj);
      const double relgap = std::max(std::abs(dobj - pobj), std::abs(xz)) / denom;

      res.iterations = iter;
      res.primal_objective = pobj;
      res.dual_objective = dobj;
      res.primal_infeasibility = pinf;
      res.dual_infeasibility = dinf;
      res.complementarity = xz;

      if (pinf <= opt.tolerance && dinf <= opt.tolerance && relgap <= opt.tolerance) {
        res.status = Status::optimal;
        break;
      }
      if (!std::isfinite(pobj) || !std::isfinite(dobj) || y.lpNorm<Eigen::Infinity>() > 1e12) {
        res.status = Status::infeasible;
        break;
      }
      if (iter >= opt.max_iterations || stalls >= 5) {
        res.status = Status::max_iterations;
        break;
      }

      const double mu = xz / n_total_;
      std::vector<MatrixXd> zinv(nb_);
      bool ok = true;
      for (int b = 0; b < nb_ && ok; ++b) {
        Eigen::LLT<MatrixXd> llt(z[b]);
        if (llt.info() != Eigen::Success) {
          ok = false;
          break;
        }
        zinv[b] = llt.solve(MatrixXd::Identity(z[b].rows(), z[b].cols()));
        zinv[b] = 0.5 * (zinv[b] + zinv[b].transpose());
      }
      if (!ok) {
        res.status = Status::max_iterations;
        break;
      }

      const MatrixXd schur = schur_complement(x, zinv);
      Eigen::LLT<MatrixXd> schur_llt(schur);
      Eigen::LDLT<MatrixXd> schur_ldlt;
      const bool use_llt = schur_llt.info() == Eigen::Success;
      if (!use_llt) schur_ldlt.compute(schur);
      auto solve_schur = [&](const VectorXd& r) -> VectorXd {
        return use_llt ? VectorXd(schur_llt.solve(r)) : VectorXd(schur_ldlt.solve(r));
      };

      // X·Rd·Z^{-1}, shared by predictor and corrector.
      std::vector<MatrixXd> x_rd_zinv(nb_);
      for (int b = 0; b < nb_; ++b) x_rd_zinv[b] = x[b] * rd[b] * zinv[b];

      auto direction = [&](double mu_target, const std::vector<MatrixXd>* dxa, const std::vector<MatrixXd>* dza,
                           std::vector<MatrixXd>& dx, VectorXd& dy, std::vector<MatrixXd>& dz) {
        std::vector<MatrixXd> h(nb_), g(nb_);
        for (int b = 0; b < nb_; ++b) {
          h[b] = mu_target * zinv[b] - x[b];
          if (dxa) h[b] -= (*dxa)[b] * (*dza)[b] * zinv[b];
          g[b] = h[b] + x_rd_zinv[b];
        }
        dy = solve_schur(apply_a(g) - rp);
        dz = apply_at(dy);
        dx.resize(nb_);
        for (int b = 0; b < nb_; ++b) {
          dz[b] -= rd[b];
          MatrixXd t = h[b] - x[b] * dz[b] * zinv[b];
          dx[b] = 0.5 * (t + t.transpose());
        }
        const VectorXd drift = rp - apply_a(dx);
        const std::vector<MatrixXd> fix = apply_at(gram_ldlt_.solve(drift));
        for (int b = 0; b < nb_; ++b) dx[b] += fix[b];
      };

      auto step_lengths = [&](const std::vector<MatrixXd>& dx, const std::vector<MatrixXd>& dz) {
        double ap = std::numeric_limits<double>::infinity(), ad = ap;
        for (int b = 0; b < nb_; ++b) {
          ap = std::min(ap, detail::max_step(x[b], dx[b]));
          ad = std::min(ad, detail::max_step(z[b], dz[b]));
        }
        return std::pair{ap, ad};
      };

      std::vector<MatrixXd> dxa, dza;
      VectorXd dya;
      direction(0.0, nullptr, nullptr, dxa, dya, dza);
      auto [ap_aff, ad_aff] = step_lengths(dxa, dza);
      ap_aff = std::min(1.0, ap_aff);
      ad_aff = std::min(1.0, ad_aff);
      double xz_aff = 0.0;
      for (int b = 0; b < nb_; ++b)
        xz_aff += (x[b] + ap_aff * dxa[b]).cwiseProduct(z[b] + ad_aff * dza[b]).sum();
      const double ratio = std::clamp(xz_aff / xz, 0.0, 1.0);
      const double sigma = ratio * ratio * ratio;

      std::vector<MatrixXd> dx, dz;
      VectorXd dy;
      direction(sigma * mu, &dxa, &dza, dx, dy, dz);
      auto [ap, ad] = step_lengths(dx, dz);
      ap = std::min(1.0, opt.step_fraction * ap);
      ad = std::min(1.0, opt.step_fraction * ad);
      stalls = (std::max(ap, ad) < 1e-10) ? stalls + 1 : 0;

      for (int b = 0; b < nb_; ++b) {
        x[b] += ap * dx[b];
        z[b] += ad * dz[b];
      }
      y += ad * dy;
    }

    res.x = std::move(x);
    res.z = std::move(z);
    res.y = std::move(y);
    return res;
  }

  /// Σ_b tr(A_ib V_b) for every constraint i; V need not be symmetric.
  VectorXd apply_a(const std::vector<MatrixXd>& v) const {
    VectorXd out = VectorXd::Zero(m_);
    for (int b = 0; b < nb_; ++b)
      for (const auto& t : by_block_[b]) {
        double s = 0.0;
        for (const auto& e : *t.entries) s += e.value * v[b](e.col, e.row);
        out(t.constraint) += s;
      }
    return out;
  }

  /// Σ_i y_i A_i, per block.
  std::vector<MatrixXd> apply_at(const VectorXd& y) const {
    std::vector<MatrixXd> out(nb_);
    for (int b = 0; b < nb_; ++b) {
      out[b] = MatrixXd::Zero(p_.block_sizes[b], p_.block_sizes[b]);
      for (const auto& t : by_block_[b])
        for (const auto& e : *t.entries) out[b](e.row, e.col) += y(t.constraint) * e.value;
    }
    return out;
  }

 private:
  // M_ij = Σ_b tr(A_ib X_b A_jb Z_b^{-1}), using only the nonzeros of A_i and A_j.
  MatrixXd schur_complement(const std::vector<MatrixXd>& x, const std::vector<MatrixXd>& zinv) const {
    MatrixXd m = MatrixXd::Zero(m_, m_);
    for (int b = 0; b < nb_; ++b) {
      const auto& terms = by_block_[b];
      const MatrixXd& xb = x[b];
      const MatrixXd& wb = zinv[b];
      for (std::size_t p = 0; p < terms.size(); ++p) {
        const auto& ei = *terms[p].entries;
        for (std::size_t q = p; q < terms.size(); ++q) {
          const auto& ej = *terms[q].entries;
          double s = 0.0;
          for (const auto& a : ei)
            for (const auto& c : ej) s += a.value * c.value * xb(a.col, c.row) * wb(c.col, a.row);
          const int i = terms[p].constraint, j = terms[q].constraint;
          m(i, j) += s;
          if (p != q) m(j, i) += s;
        }
      }
    }
    return 0.5 * (m + m.transpose());
  }

  const Problem& p_;
  int nb_ = 0;
  int m_ = 0;
  int n_total_ = 0;
  VectorXd rhs_;
  std::vector<std::vector<detail::TermRef>> by_block_;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> gram_ldlt_;
};

inline Result solve(const Problem& problem, const Options& options = {}) {
  return Solver(problem).solve(options);
}

}  // namespace luderscope::sdp
