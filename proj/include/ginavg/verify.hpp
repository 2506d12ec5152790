#pragma once

#include <string>
#include <vector>

#include "ginavg/quadrature.hpp"

namespace ginavg::verify {

// One identity battery: pass iff every scaled residual stayed within the
// battery's pinned tolerance.  failing_instance carries the first violating
// input, serialized compactly enough to replay by hand.
struct CheckResult {
  std::string name;
  bool pass;
  double tolerance;
  double max_residual;
  std::string failing_instance;
};

const std::vector<std::string>& suite_names();  // pfaffian, identities, inner, end2end

// Throws std::invalid_argument for an unknown suite name.
std::vector<CheckResult> run_suite(const std::string& suite,
                                   const quadrature::QuadratureConfig& cfg);

bool all_pass(const std::vector<CheckResult>& results);

}  // namespace ginavg::verify
