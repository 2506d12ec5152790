#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <stdexcept>

#include "ginavg/verify.hpp"

using namespace ginavg::verify;
using ginavg::quadrature::QuadratureConfig;

namespace {
const QuadratureConfig kCfg;
}

TEST_CASE("suite catalogue") {
  CHECK(suite_names().size() == 4);
  CHECK_THROWS_AS(run_suite("everything", kCfg), std::invalid_argument);
}

TEST_CASE("every suite passes with residual headroom") {
  for (const std::string& suite : suite_names()) {
    CAPTURE(suite);
    const auto checks = run_suite(suite, kCfg);
    CHECK(!checks.empty());
    CHECK(all_pass(checks));
    for (const CheckResult& check : checks) {
      CAPTURE(check.name);
      CHECK(check.pass);
      CHECK(check.max_residual <= check.tolerance);
      CHECK(check.failing_instance.empty());
    }
  }
}

TEST_CASE("exact identity batteries report a zero residual") {
  for (const auto& check : run_suite("pfaffian", kCfg))
    if (check.name == "sign_product_identity") {
      CHECK(check.tolerance == 0.0);
      CHECK(check.max_residual == 0.0);
    }
  for (const auto& check : run_suite("inner", kCfg))
    if (check.name == "exact_antisymmetry") {
      CHECK(check.tolerance == 0.0);
      CHECK(check.max_residual == 0.0);
    }
}

TEST_CASE("all_pass flags any failed check") {
  CHECK(all_pass({}));
  CHECK(all_pass({{"a", true, 1e-8, 0.0, ""}}));
  CHECK_FALSE(all_pass({{"a", true, 1e-8, 0.0, ""},
                        {"b", false, 1e-8, 1.0, "instance"}}));
}
