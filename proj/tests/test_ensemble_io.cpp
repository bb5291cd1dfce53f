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

#include <string>

#include "gtest/gtest.h"
#include "luderscope/ensemble_io.hpp"

using namespace luderscope;
using nlohmann::json;

namespace {

const json kZ = json::parse(R"([[[1, 0], [0, 0]], [[0, 0], [0, 1]]])");
const json kX = json::parse(R"([[[0.5, 0.5], [0.5, 0.5]], [[0.5, -0.5], [-0.5, 0.5]]])");

std::string samples(const char* name) { return std::string(LUDERSCOPE_SAMPLES) + "/" + name; }

}  // namespace

TEST(parse_ensemble, uniform_priors_by_default) {
  const auto spec = parse_ensemble({{"dim", 2}, {"povms", {kZ, kX}}});
  ASSERT_EQ(spec.povms.size(), 2u);
  EXPECT_DOUBLE_EQ(spec.priors[0], 0.5);
  EXPECT_DOUBLE_EQ(spec.priors[1], 0.5);
}

TEST(parse_ensemble, complex_entries) {
  const auto spec = load_ensemble(samples("z_vs_y.json"));
  EXPECT_EQ(spec.povms[1][0](0, 1), Complex(0, -0.5));
  EXPECT_EQ(spec.povms[1][0](1, 0), Complex(0, 0.5));
  EXPECT_DOUBLE_EQ(spec.priors[0], 0.3);
}

TEST(parse_ensemble, rejects_bad_documents) {
  EXPECT_THROW(parse_ensemble(json::array()), InputError);
  EXPECT_THROW(parse_ensemble({{"povms", {kZ}}}), InputError);
  EXPECT_THROW(parse_ensemble({{"dim", 0}, {"povms", {kZ}}}), InputError);
  EXPECT_THROW(parse_ensemble({{"dim", 17}, {"povms", {kZ}}}), InputError);
  EXPECT_THROW(parse_ensemble({{"dim", 2}, {"povms", json::array()}}), InputError);
  EXPECT_THROW(parse_ensemble({{"dim", 3}, {"povms", {kZ}}}), InputError);
  EXPECT_THROW(parse_ensemble({{"dim", 2}, {"povms", {kZ, kX}}, {"priors", {0.5}}}), InputError);
  EXPECT_THROW(parse_ensemble({{"dim", 2}, {"povms", {kZ, kX}}, {"priors", {0.5, 0.6}}}), InputError);
  EXPECT_THROW(parse_ensemble({{"dim", 2}, {"povms", {kZ, kX}}, {"priors", {1.5, -0.5}}}), InputError);
  const json skew = json::parse(R"([[[1, 1], [0, 0]], [[0, -1], [0, 1]]])");
  EXPECT_THROW(parse_ensemble({{"dim", 2}, {"povms", {skew}}}), InputError);
}

TEST(parse_ensemble, invalid_povm_reports_residual) {
  try {
    load_ensemble(samples("incomplete.json"));
    FAIL() << "incomplete POVM accepted";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("POVM 0"), std::string::npos);
  }
}

TEST(load_ensemble, missing_and_malformed_files) {
  EXPECT_THROW(load_ensemble(samples("does_not_exist.json")), InputError);
  EXPECT_THROW(parse_ensemble(json::parse("{\"dim\": 2, \"povms\": [[[[1, 0], [0, \"a\"]]]]}")), InputError);
}

TEST(parse_priors, parses_and_rejects) {
  const auto p = parse_priors("0.3,0.7");
  ASSERT_EQ(p.size(), 2u);
  EXPECT_DOUBLE_EQ(p[1], 0.7);
  EXPECT_THROW(parse_priors(""), InputError);
  EXPECT_THROW(parse_priors("0.3,x"), InputError);
  EXPECT_THROW(parse_priors("0.3,0.7abc"), InputError);
}

TEST(discriminate, z_vs_x_instrument) {
  const auto out = discriminate(load_ensemble(samples("z_vs_x.json")), Mode::instrument);
  EXPECT_EQ(out["mode"], "instrument");
  EXPECT_NEAR(out["success"].get<double>(), 0.933013, 1e-6);
  EXPECT_NEAR(out["distance"].get<double>(), std::sqrt(3.0), 1e-5);
  EXPECT_EQ(out["tester_report"]["status"], "optimal");
  EXPECT_TRUE(out["tester_report"]["valid"].get<bool>());
  ASSERT_EQ(out["choi_diagnostics"].size(), 2u);
  EXPECT_EQ(out["choi_diagnostics"][0]["dims"], json({2, 2, 2}));
  EXPECT_TRUE(out["choi_diagnostics"][0]["valid"].get<bool>());
}

TEST(discriminate, z_vs_x_measurement) {
  const auto out = discriminate(load_ensemble(samples("z_vs_x.json")), Mode::measurement);
  EXPECT_NEAR(out["success"].get<double>(), 0.853553, 1e-6);
  EXPECT_EQ(out["choi_diagnostics"][0]["dims"], json({2, 2}));
}

TEST(discriminate, single_hypothesis_and_unequal_priors) {
  const auto one = discriminate(load_ensemble(samples("single.json")), Mode::instrument);
  EXPECT_NEAR(one["success"].get<double>(), 1.0, 1e-6);
  EXPECT_TRUE(one["distance"].is_null());
  const auto zy = discriminate(load_ensemble(samples("z_vs_y.json")), Mode::measurement);
  EXPECT_TRUE(zy["distance"].is_null());
  EXPECT_GE(zy["success"].get<double>(), 0.7 - 1e-7);
}

TEST(discriminate, output_is_deterministic) {
  const auto spec = load_ensemble(samples("z_vs_y.json"));
  EXPECT_EQ(discriminate(spec, Mode::instrument).dump(), discriminate(spec, Mode::instrument).dump());
}

TEST(parse_mode, names) {
  EXPECT_EQ(parse_mode("measurement"), Mode::measurement);
  EXPECT_EQ(parse_mode("instrument"), Mode::instrument);
  EXPECT_THROW(parse_mode("both"), InputError);
}
