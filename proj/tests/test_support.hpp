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

#pragma once

#include <random>

#include "luderscope/matrix.hpp"
#include "luderscope/povm.hpp"

namespace luderscope::fixtures {

inline CVector random_vector(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> n;
  CVector v(d);
  for (int k = 0; k < d; ++k) v(k) = Complex(n(rng), n(rng));
  return v;
}

inline PureState random_state(std::mt19937_64& rng, int d = 2) { return PureState::normalize(random_vector(rng, d)); }

inline CMatrix random_matrix(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> n;
  CMatrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = Complex(n(rng), n(rng));
  return m;
}

inline HermitianOperator random_hermitian(std::mt19937_64& rng, int d) {
  return HermitianOperator::symmetrized(random_matrix(rng, d));
}

inline HermitianOperator random_psd(std::mt19937_64& rng, int d) {
  const CMatrix g = random_matrix(rng, d);
  return HermitianOperator::symmetrized(g * g.adjoint());
}

inline HermitianOperator random_density(std::mt19937_64& rng, int d) {
  const auto p = random_psd(rng, d);
  return HermitianOperator::symmetrized(p.matrix() / p.trace());
}

inline CMatrix random_unitary(std::mt19937_64& rng, int d) {
  Eigen::HouseholderQR<CMatrix> qr(random_matrix(rng, d));
  return qr.householderQ();
}

/// Random POVM with n elements: G_a = S^{-1/2} P_a S^{-1/2}, S = Σ P_a.
inline Povm random_povm(std::mt19937_64& rng, int d, int n) {
  std::vector<HermitianOperator> ps;
  CMatrix s = CMatrix::Zero(d, d);
  for (int a = 0; a < n; ++a) {
    ps.push_back(random_psd(rng, d));
    s += ps.back().matrix();
  }
  const auto e = eig_hermitian(HermitianOperator::symmetrized(s));
  const CMatrix inv_sqrt = e.vectors * e.values.cwiseSqrt().cwiseInverse().cast<Complex>().asDiagonal() *
                           e.vectors.adjoint();
  std::vector<HermitianOperator> out;
  for (const auto& p : ps) out.push_back(HermitianOperator::symmetrized(inv_sqrt * p.matrix() * inv_sqrt));
  return Povm(std::move(out));
}

inline CVector ket(std::initializer_list<Complex> amps) {
  CVector v(static_cast<Eigen::Index>(amps.size()));
  Eigen::Index k = 0;
  for (const auto& a : amps) v(k++) = a;
  return v;
}

}  // namespace luderscope::fixtures
