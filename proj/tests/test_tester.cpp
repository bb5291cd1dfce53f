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

#include <cmath>
#include <numbers>
#include <random>

#include "gtest/gtest.h"
#include "luderscope/closed_form.hpp"
#include "luderscope/tester.hpp"
#include "test_support.hpp"

using namespace luderscope;

namespace {

const double kHelstromZX = std::pow(std::cos(std::numbers::pi / 8.0), 2);  // 0.8535533906
const double kLudersZX = 0.5 + std::sqrt(3.0) / 4.0;                       // 0.9330127019

Povm z() { return computational_povm(2); }
Povm x() { return hadamard_povm(); }

Povm conjugated(const Povm& p, const CMatrix& u) {
  std::vector<HermitianOperator> e;
  for (const auto& m : p.elements()) e.push_back(HermitianOperator::symmetrized(u * m.matrix() * u.adjoint()));
  return Povm(std::move(e));
}

void expect_certified(const TesterSolution& s, int out_dim) {
  EXPECT_EQ(s.report.status, SdpStatus::optimal);
  EXPECT_GE(s.report.gap, -1e-9);
  EXPECT_LE(s.report.gap, 1e-7);
  EXPECT_LE(s.report.primal_value, s.report.dual_bound + 1e-9);
  const auto r = validate_tester(s.tester, out_dim);
  EXPECT_TRUE(r.passed);
  EXPECT_LE(r.normalization_residual, 1e-7);
}

}  // namespace

TEST(optimize_tester, identical_hypotheses) {
  const auto e = luders_ensemble({z(), z()}, {0.5, 0.5});
  const auto s = optimize_tester(e);
  EXPECT_NEAR(s.report.primal_value, 0.5, 1e-7);
  expect_certified(s, e.out_dim());
}

TEST(optimize_tester, z_vs_x_measurement) {
  const auto e = measurement_ensemble({z(), x()}, {0.5, 0.5});
  const auto s = optimize_tester(e);
  EXPECT_NEAR(s.report.primal_value, kHelstromZX, 1e-6);
  EXPECT_NEAR(s.report.primal_value, 0.853553, 1e-6);
  expect_certified(s, e.out_dim());
}

TEST(optimize_tester, z_vs_x_luders) {
  const auto e = luders_ensemble({z(), x()}, {0.5, 0.5});
  const auto s = optimize_tester(e);
  EXPECT_NEAR(s.report.primal_value, kLudersZX, 1e-6);
  EXPECT_NEAR(s.report.primal_value, 0.933013, 1e-6);
  expect_certified(s, e.out_dim());
}

TEST(optimize_tester, symmetry_reduction_agrees) {
  TesterOptions reduced;
  reduced.symmetry_reduction = true;
  std::vector<std::pair<Povm, Povm>> pairs{
      {z(), x()}, {trine_povm(0, 0), trine_povm(1.0, 0.7)}, {z(), noisy_z_povm(0.4, 0.3)}, {z(), noisy_z_povm(0, 0.25)}};
  for (const auto& [a, b] : pairs)
    for (bool instrument : {false, true}) {
      const auto e = instrument ? luders_ensemble({a, b}, {0.4, 0.6}) : measurement_ensemble({a, b}, {0.4, 0.6});
      const auto full = optimize_tester(e);
      const auto red = optimize_tester(e, reduced);
      EXPECT_NEAR(full.report.primal_value, red.report.primal_value, 1e-7);
      expect_certified(red, e.out_dim());
    }
}

TEST(optimize_tester, trine_values_match_independent_solver) {
  // Reference values from an independent conic solver on the same Choi operators.
  const auto a = trine_povm(0.0, 0.0), b = trine_povm(1.0, 0.7);
  EXPECT_NEAR(optimize_tester(luders_ensemble({a, b}, {0.5, 0.5})).report.primal_value, 0.836855004794, 1e-6);
  EXPECT_NEAR(optimize_tester(measurement_ensemble({a, b}, {0.5, 0.5})).report.primal_value, 0.754969773453, 1e-6);
}

TEST(optimize_tester, three_hypotheses_and_padding) {
  // Z, X and the trivial one-outcome POVM; the latter is padded to two outcomes.
  const Povm trivial({HermitianOperator::identity(2)});
  const auto e = luders_ensemble({z(), x(), trivial}, {1.0 / 3, 1.0 / 3, 1.0 / 3});
  const auto s = optimize_tester(e);
  expect_certified(s, e.out_dim());
  EXPECT_GE(s.report.primal_value, 1.0 / 3 - 1e-7);
  EXPECT_LE(s.report.primal_value, 1.0 + 1e-7);
}

TEST(optimize_tester, ensemble_validation) {
  EXPECT_THROW(luders_ensemble({z(), x()}, {0.5, 0.6}), InputError);
  EXPECT_THROW(luders_ensemble({z(), x()}, {0.5}), InputError);
  EXPECT_THROW(luders_ensemble({z(), computational_povm(3)}, {0.5, 0.5}), DimensionError);
}

TEST(tester_success, uniform_guess_and_round_trip) {
  const auto e = luders_ensemble({z(), z()}, {0.5, 0.5});
  const int dim = e.in_dim() * e.out_dim();
  const auto t = HermitianOperator::symmetrized(CMatrix::Identity(dim, dim) / (2.0 * e.in_dim()));
  const Tester uniform{{t, t}, HermitianOperator::identity(e.in_dim()) * (1.0 / e.in_dim())};
  EXPECT_TRUE(validate_tester(uniform, e.out_dim()).passed);
  EXPECT_NEAR(tester_success(uniform, e), 0.5, 1e-12);

  const auto zx = luders_ensemble({z(), x()}, {0.5, 0.5});
  const auto s = optimize_tester(zx);
  EXPECT_NEAR(tester_success(s.tester, zx), s.report.primal_value, 1e-9);
  EXPECT_LE(tester_success(uniform, zx), kLudersZX + 1e-6);
}

TEST(validate_tester, detects_broken_normalization) {
  const auto e = luders_ensemble({z(), x()}, {0.5, 0.5});
  const auto s = optimize_tester(e);
  ASSERT_TRUE(validate_tester(s.tester, e.out_dim()).passed);
  Tester doubled = s.tester;
  doubled.operators[0] = doubled.operators[0] * 2.0;
  EXPECT_FALSE(validate_tester(doubled, e.out_dim()).passed);
  Tester sigma2 = s.tester;
  sigma2.sigma = sigma2.sigma * 2.0;
  EXPECT_FALSE(validate_tester(sigma2, e.out_dim()).passed);
}

TEST(sdp_report, json_layout) {
  const auto s = optimize_tester(measurement_ensemble({z(), x()}, {0.5, 0.5}));
  const auto j = s.report.to_json();
  for (const char* key : {"primal", "dual", "gap", "status", "iterations"}) EXPECT_TRUE(j.contains(key));
  EXPECT_EQ(j["status"], "optimal");
  EXPECT_EQ(round_significant(0.1234567890123456), 0.123456789012);
}

TEST(diamond_distance, examples) {
  const auto zz = diamond_distance(mp_channel_choi(z()), mp_channel_choi(z()));
  EXPECT_NEAR(zz.value, 0.0, 1e-7);
  EXPECT_NEAR(measurement_distance(z(), x()), std::sqrt(2.0), 1e-6);
  EXPECT_NEAR(luders_distance(z(), x()), std::sqrt(3.0), 1e-6);
  EXPECT_NEAR(measurement_distance(z(), z()), 0.0, 1e-7);
  EXPECT_NEAR(luders_distance(z(), z()), 0.0, 1e-7);
  const auto r = luders_distance_report(z(), x());
  EXPECT_LE(r.lo, r.value);
  EXPECT_LE(r.value, r.hi);
  EXPECT_LE(r.hi - r.lo, 4e-7);
  EXPECT_THROW(diamond_distance(mp_channel_choi(z()), luders_channel_choi(z())), DimensionError);
}

TEST(diamond_distance, noisy_family) {
  // d_M(Z, W^p) = 2p; d_L(Z, W^p) = 4/(2 − √p) − 2.
  for (double p : {0.25, 0.04}) {
    const auto w = noisy_z_povm(0.0, p);
    EXPECT_NEAR(measurement_distance(z(), w), 2.0 * p, 1e-6);
    EXPECT_NEAR(luders_distance(z(), w), 4.0 / (2.0 - std::sqrt(p)) - 2.0, 1e-6);
  }
}

TEST(instrument_advantage, examples) {
  EXPECT_NEAR(instrument_advantage(z(), x()), std::sqrt(1.5), 1e-5);
  EXPECT_THROW(instrument_advantage(z(), z()), UndefinedAdvantageError);
  // Exact value at p = 1/4 is 4/3; the ratio (p + √p)/(2p) = 1.5 overshoots it.
  EXPECT_NEAR(instrument_advantage(z(), noisy_z_povm(0.0, 0.25)), 4.0 / 3.0, 1e-5);
}

TEST(properties, dominance_bounds_and_projective_cap) {
  std::mt19937_64 rng(41);
  for (int k = 0; k < 20; ++k) {
    const auto a = fixtures::random_povm(rng, 2, 2 + k % 2), b = fixtures::random_povm(rng, 2, 2);
    const double pm = optimize_tester(measurement_ensemble({a, b}, {0.5, 0.5})).report.primal_value;
    const double pl = optimize_tester(luders_ensemble({a, b}, {0.5, 0.5})).report.primal_value;
    EXPECT_GE(pl, pm - 1e-7);
    EXPECT_GE(pm, 0.5 - 1e-7);
    EXPECT_LE(pl, 1.0 + 1e-7);

    const auto pa = projective_qubit_povm(fixtures::random_state(rng));
    const auto pb = projective_qubit_povm(fixtures::random_state(rng));
    EXPECT_LE(instrument_advantage(pa, pb), std::sqrt(2.0) + 1e-5);
  }
}

TEST(properties, unitary_covariance) {
  std::mt19937_64 rng(42);
  for (int k = 0; k < 5; ++k) {
    const auto a = fixtures::random_povm(rng, 2, 2), b = fixtures::random_povm(rng, 2, 3);
    const CMatrix u = fixtures::random_unitary(rng, 2);
    for (bool instrument : {false, true}) {
      auto value = [&](const Povm& p, const Povm& q) {
        const auto e = instrument ? luders_ensemble({p, q}, {0.3, 0.7}) : measurement_ensemble({p, q}, {0.3, 0.7});
        return optimize_tester(e).report.primal_value;
      };
      EXPECT_NEAR(value(a, b), value(conjugated(a, u), conjugated(b, u)), 1e-6);
    }
  }
}

TEST(properties, projective_pairs_match_closed_forms) {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    const double p = u(rng);
    const ProjectivePair pair(fixtures::random_state(rng), fixtures::random_state(rng), p, 1.0 - p);
    const std::vector<double> priors{p, 1.0 - p};
    EXPECT_NEAR(optimize_tester(luders_ensemble({pair.first(), pair.second()}, priors)).report.primal_value,
                thm1_success(pair), 1e-6);
    EXPECT_NEAR(optimize_tester(measurement_ensemble({pair.first(), pair.second()}, priors)).report.primal_value,
                one_copy_success(pair), 1e-6);
  }
}

TEST(sequential_success, constant_guess_and_zero_branches) {
  // Guess 0 whatever the outcome: success is the prior of hypothesis 0.
  const Povm guess0({HermitianOperator::identity(2), HermitianOperator::zero(2)});
  const SequentialStrategy s{HermitianOperator::identity(2) * 0.5, {guess0, guess0}, false};
  EXPECT_NEAR(sequential_success({z(), x()}, {0.3, 0.7}, s), 0.3, 1e-12);
  // |0> as probe never triggers outcome 1 of Z; the branch is skipped.
  const SequentialStrategy probe0{HermitianOperator::projector(PureState::basis(2, 0)), {guess0, guess0}, false};
  EXPECT_NEAR(sequential_success({z(), z()}, {0.5, 0.5}, probe0), 0.5, 1e-12);
}

TEST(sequential_success, optimal_strategy_for_z_vs_x) {
  const ProjectivePair pair(PureState::basis(2, 0), zx_ket(std::numbers::pi / 2));
  const auto s = optimal_sequential_strategy(pair);
  EXPECT_NEAR(sequential_success({z(), x()}, {0.5, 0.5}, s), kLudersZX, 1e-9);
}
