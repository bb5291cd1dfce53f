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

// Acceptance runner. With --criterion N runs one criterion, otherwise all
// nine; prints "criterion N: PASS|FAIL" plus the individual checks and exits
// nonzero when any criterion fails.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "luderscope/verify.hpp"

int main(int argc, char** argv) {
  using namespace luderscope;
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--criterion" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::cerr << "usage: acceptance [--criterion N]\n";
      return 2;
    }
  }
  if (only < 0 || only > kCriterionCount) {
    std::cerr << "criterion must be in 1.." << kCriterionCount << '\n';
    return 2;
  }

  std::vector<CriterionResult> results;
  try {
    if (only)
      results.push_back(run_criterion(only));
    else
      results = run_verify();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }

  bool ok = true;
  for (const auto& c : results) {
    std::cout << format_criterion(c, true);
    ok = ok && c.passed();
  }
  return ok ? 0 : 1;
}
