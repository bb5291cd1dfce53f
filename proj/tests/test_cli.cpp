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

// Runs the built executable and checks exit codes and output.

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "gtest/gtest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

fs::path scratch() {
  const auto d = fs::temp_directory_path() / "luderscope_cli";
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// stdout goes to a file; stderr is discarded.
Run run(const std::string& args) {
  const auto out = scratch() / "stdout.txt";
  const std::string cmd = std::string("'") + LUDERSCOPE_CLI + "' " + args + " > '" + out.string() + "' 2>/dev/null";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  return r;
}

std::string sample(const char* name) { return std::string("'") + LUDERSCOPE_SAMPLES + "/" + name + "'"; }

}  // namespace

TEST(cli, discriminate_z_vs_x) {
  const auto r = run("discriminate --input " + sample("z_vs_x.json") + " --mode instrument");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["success"].get<double>(), 0.933013, 1e-6);
  const auto m = nlohmann::json::parse(run("discriminate --input " + sample("z_vs_x.json") + " --mode measurement").out);
  EXPECT_NEAR(m["success"].get<double>(), 0.853553, 1e-6);
}

TEST(cli, discriminate_priors_override) {
  const auto r = run("discriminate --input " + sample("z_vs_x.json") + " --mode measurement --priors 1,0");
  ASSERT_EQ(r.code, 0);
  EXPECT_NEAR(nlohmann::json::parse(r.out)["success"].get<double>(), 1.0, 1e-6);
  EXPECT_EQ(run("discriminate --input " + sample("z_vs_x.json") + " --priors 0.5,0.6").code, 1);
}

TEST(cli, single_hypothesis) {
  const auto r = run("discriminate --input " + sample("single.json"));
  ASSERT_EQ(r.code, 0);
  EXPECT_NEAR(nlohmann::json::parse(r.out)["success"].get<double>(), 1.0, 1e-6);
}

TEST(cli, input_errors_exit_one) {
  const auto bad = scratch() / "malformed.json";
  std::ofstream(bad) << "{\"dim\": 2, \"povms\": [";
  EXPECT_EQ(run("discriminate --input '" + bad.string() + "'").code, 1);
  EXPECT_EQ(run("discriminate --input " + sample("incomplete.json")).code, 1);
  EXPECT_EQ(run("discriminate --input " + sample("z_vs_x.json") + " --mode both").code, 1);
  EXPECT_EQ(run("discriminate").code, 1);
  EXPECT_EQ(run("no-such-command").code, 1);
}

TEST(cli, scan_writes_table_and_heatmaps) {
  const auto dir = scratch() / "scan";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto out = dir / "noisy.csv";
  ASSERT_EQ(run("scan-noisy --grid 2 --out '" + out.string() + "' --heatmap").code, 0);
  const auto text = slurp(out);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 5);
  EXPECT_TRUE(fs::exists(dir / "noisy_p_inst.svg"));
  EXPECT_TRUE(fs::exists(dir / "noisy_advantage.svg"));
  EXPECT_EQ(run("scan-trine --grid 2 --out '" + (dir / "nope" / "t.csv").string() + "'").code, 1);
  EXPECT_EQ(run("scan-noisy --grid 2 --p 0:2 --out '" + out.string() + "'").code, 1);
}

TEST(cli, advantage_curve) {
  const auto r = run("advantage --family noisy --theta 0 --p 0.25:1:2");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("p,d_meas,d_inst,advantage"), std::string::npos);
  EXPECT_EQ(run("advantage --family trine").code, 1);
}

TEST(cli, verify_single_criterion_is_byte_stable) {
  const auto a = run("verify --criterion 4");
  const auto b = run("verify --criterion 4");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out.find("criterion 4: PASS"), std::string::npos);
}

TEST(cli, verify_mutation_fails) {
  const auto r = run("verify --criterion 4 --mutation");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("criterion 4: FAIL"), std::string::npos);
}
