#pragma once

#include <string>
#include <vector>

namespace chainlight::verify {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// The full verification suite: every analytic closed form of the library
// checked against its independent oracle (brute-force transforms, exact
// diagonalization, ODE integration, finite zone sums) at fixed tolerances.
// Deterministic; runs in well under two minutes.
std::vector<CheckResult> run_all();

}  // namespace chainlight::verify
