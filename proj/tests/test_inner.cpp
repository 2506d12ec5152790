#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "ginavg/inner.hpp"

using ginavg::inner::GinoeMomentTable;
using ginavg::inner::GinueMomentTable;
using ginavg::inner::ginue_inner;
using ginavg::inner::one_sided_moment;
using ginavg::inner::skew_complex;
using ginavg::inner::skew_complex_reference;
using ginavg::inner::skew_real;
using ginavg::inner::skew_real_reference;
using ginavg::inner::skew_sum;
using ginavg::quadrature::QuadratureConfig;
using ginavg::weights::cd;
using ginavg::weights::CompleteFamily;
using ginavg::weights::MonicPolynomial;
using ginavg::weights::PsiSpec;

namespace {

const QuadratureConfig kCfg;
constexpr double kPi = 3.14159265358979323846;
const double kSqrtPi = std::sqrt(kPi);

MonicPolynomial mono(int d) { return MonicPolynomial::monomial(d); }

std::vector<PsiSpec> psi_battery() {
  return {PsiSpec::one(), PsiSpec::monomial(2), PsiSpec::shift(1.5),
          PsiSpec::poly({0.5, -1.0, 0.0, 2.0})};
}

}  // namespace

TEST_CASE("gaussian weight closed forms") {
  const PsiSpec one = PsiSpec::one();
  // <1, g>_R = 2 sqrt(pi); <1, g>_C = 2 sqrt(pi)(sqrt(2) - 1).
  const auto r01 = skew_real(mono(0), mono(1), one, kCfg);
  CHECK(r01.value == doctest::Approx(2.0 * kSqrtPi).epsilon(1e-10));
  CHECK(r01.value == doctest::Approx(3.544907701811032).epsilon(1e-12));
  CHECK(r01.est_error < 1e-8);
  const auto c01 = skew_complex(mono(0), mono(1), one, kCfg);
  CHECK(c01.value ==
        doctest::Approx(2.0 * kSqrtPi * (std::sqrt(2.0) - 1.0)).epsilon(1e-10));
  CHECK(c01.value == doctest::Approx(1.468348847450969).epsilon(1e-12));
  const auto s01 = skew_sum(mono(0), mono(1), one, kCfg);
  CHECK(s01.value ==
        doctest::Approx(std::pow(2.0, 1.5) * kSqrtPi).epsilon(1e-10));

  // <g, g^2>_R = -sqrt(pi) and <g, g^2>_C = +sqrt(pi): the full product
  // vanishes although neither half does.
  const auto r12 = skew_real(mono(1), mono(2), one, kCfg);
  CHECK(r12.value == doctest::Approx(-kSqrtPi).epsilon(1e-10));
  const auto c12 = skew_complex(mono(1), mono(2), one, kCfg);
  CHECK(c12.value == doctest::Approx(kSqrtPi).epsilon(1e-10));
  const auto s12 = skew_sum(mono(1), mono(2), one, kCfg);
  CHECK(std::abs(s12.value) < 1e-9);

  // <1, g^3>_R = 5 sqrt(pi), by parts against d(-(x^2+2)exp(-x^2/2)).
  const auto r03 = skew_real(mono(0), mono(3), one, kCfg);
  CHECK(r03.value == doctest::Approx(5.0 * kSqrtPi).epsilon(1e-10));

  // One-sided moments of even powers: int x^{2k} exp(-x^2/2).
  CHECK(one_sided_moment(mono(0), one, kCfg) ==
        doctest::Approx(std::sqrt(2.0 * kPi)).epsilon(1e-12));
  CHECK(one_sided_moment(mono(2), one, kCfg) ==
        doctest::Approx(std::sqrt(2.0 * kPi)).epsilon(1e-12));
  CHECK(std::abs(one_sided_moment(mono(1), one, kCfg)) < 1e-12);
}

TEST_CASE("skew products vanish exactly on the diagonal") {
  const CompleteFamily fam = CompleteFamily::random(5, 17);
  for (const auto& psi : psi_battery()) {
    for (const auto& p : fam.polys()) {
      const auto r = skew_real(p, p, psi, kCfg);
      CHECK(r.value == 0.0);
      CHECK(r.est_error == 0.0);
      const auto c = skew_complex(p, p, psi, kCfg);
      CHECK(c.value == 0.0);
      CHECK(c.est_error == 0.0);
    }
  }
}

TEST_CASE("argument swap is an exact negation") {
  const CompleteFamily fam = CompleteFamily::random(4, 91);
  for (const auto& psi : psi_battery()) {
    for (int i = 0; i < fam.size(); ++i) {
      for (int j = i + 1; j < fam.size(); ++j) {
        const auto rij = skew_real(fam.poly(i), fam.poly(j), psi, kCfg);
        const auto rji = skew_real(fam.poly(j), fam.poly(i), psi, kCfg);
        CHECK(rji.value == -rij.value);
        const auto cij = skew_complex(fam.poly(i), fam.poly(j), psi, kCfg);
        const auto cji = skew_complex(fam.poly(j), fam.poly(i), psi, kCfg);
        CHECK(cji.value == -cij.value);
      }
    }
  }
}

TEST_CASE("reduction matches the direct double-quadrature definition") {
  const std::vector<PsiSpec> psis = {PsiSpec::one(), PsiSpec::monomial(2)};
  const CompleteFamily fam = CompleteFamily::random(4, 7);
  for (const auto& psi : psis) {
    for (int i = 0; i < fam.size(); ++i) {
      for (int j = i + 1; j < fam.size(); ++j) {
        const double reduced = skew_real(fam.poly(i), fam.poly(j), psi, kCfg).value;
        const double direct =
            skew_real_reference(fam.poly(i), fam.poly(j), psi, kCfg);
        CHECK(reduced ==
              doctest::Approx(direct).epsilon(1e-7).scale(std::max(
                  1.0, std::abs(reduced))));
      }
    }
    const double red03 = skew_real(mono(0), mono(3), psi, kCfg).value;
    CHECK(red03 == doctest::Approx(skew_real_reference(mono(0), mono(3), psi,
                                                       kCfg)).epsilon(1e-7));
  }
}

TEST_CASE("half-plane form matches the full-plane definition") {
  const std::vector<PsiSpec> psis = {PsiSpec::one(), PsiSpec::monomial(2),
                                     PsiSpec::shift(1.5)};
  const CompleteFamily fam = CompleteFamily::random(4, 23);
  for (const auto& psi : psis) {
    for (int i = 0; i < fam.size(); ++i) {
      for (int j = i + 1; j < fam.size(); ++j) {
        const double folded =
            skew_complex(fam.poly(i), fam.poly(j), psi, kCfg).value;
        const double full =
            skew_complex_reference(fam.poly(i), fam.poly(j), psi, kCfg);
        CHECK(folded == doctest::Approx(full).epsilon(1e-7).scale(
                            std::max(1.0, std::abs(folded))));
      }
    }
  }
}

TEST_CASE("moment table agrees with the per-pair routes") {
  const int n = 6;
  for (const auto& psi : {PsiSpec::one(), PsiSpec::shift(1.5)}) {
    const GinoeMomentTable table = GinoeMomentTable::build(n, psi, kCfg);
    for (int a = 0; a < n; ++a) {
      CHECK(table.skew(a, a) == 0.0);
      CHECK(table.moment(a) ==
            doctest::Approx(one_sided_moment(mono(a), psi, kCfg))
                .epsilon(1e-9));
      for (int b = a + 1; b < n; ++b) {
        CHECK(table.skew_r(b, a) == -table.skew_r(a, b));
        CHECK(table.skew_c(b, a) == -table.skew_c(a, b));
        const auto s = skew_sum(mono(a), mono(b), psi, kCfg);
        CHECK(table.skew(a, b) ==
              doctest::Approx(s.value).epsilon(1e-9).scale(
                  std::max(1.0, std::abs(s.value))));
      }
    }
  }
}

TEST_CASE("table contraction is the bilinear extension") {
  const PsiSpec psi = PsiSpec::one();
  const GinoeMomentTable table = GinoeMomentTable::build(6, psi, kCfg);
  const CompleteFamily fam = CompleteFamily::random(6, 41);
  for (int i = 0; i < fam.size(); ++i) {
    CHECK(table.form(fam.poly(i), fam.poly(i)) == 0.0);
    CHECK(table.moment_of(fam.poly(i)) ==
          doctest::Approx(one_sided_moment(fam.poly(i), psi, kCfg))
              .epsilon(1e-9)
              .scale(10.0));
    for (int j = 0; j < fam.size(); ++j) {
      const double via_table = table.form(fam.poly(i), fam.poly(j));
      CHECK(table.form(fam.poly(j), fam.poly(i)) == -via_table);
      const double via_integral =
          skew_sum(fam.poly(i), fam.poly(j), psi, kCfg).value;
      CHECK(via_table == doctest::Approx(via_integral)
                             .epsilon(1e-9)
                             .scale(std::max(1.0, std::abs(via_table))));
    }
  }
}

TEST_CASE("plane inner product closed forms") {
  const PsiSpec one = PsiSpec::one();
  CHECK(ginue_inner(mono(0), mono(0), one, kCfg) ==
        doctest::Approx(2.0 * kPi).epsilon(1e-10));
  CHECK(ginue_inner(mono(1), mono(1), one, kCfg) ==
        doctest::Approx(4.0 * kPi).epsilon(1e-10));
  double factorial = 1.0;
  for (int a = 0; a <= 6; ++a) {
    if (a > 0) factorial *= a;
    const double expect = 2.0 * kPi * std::pow(2.0, a) * factorial;
    CHECK(ginue_inner(mono(a), mono(a), one, kCfg) ==
          doctest::Approx(expect).epsilon(1e-10));
  }
  for (int a = 0; a < 4; ++a) {
    for (int b = a + 1; b < 4; ++b) {
      CHECK(std::abs(ginue_inner(mono(a), mono(b), one, kCfg)) < 1e-9);
    }
  }

  // Modulus-squared weight shifts the radial moments by one factorial step.
  const PsiSpec modsq = PsiSpec::modulus_squared();
  factorial = 1.0;
  for (int a = 0; a <= 5; ++a) {
    factorial *= (a + 1);
    const double expect = 2.0 * kPi * std::pow(2.0, a + 1) * factorial;
    CHECK(ginue_inner(mono(a), mono(a), modsq, kCfg) ==
          doctest::Approx(expect).epsilon(1e-10));
  }

  // Shifted weight: <1|1> = 2 pi z because the linear term integrates to 0.
  CHECK(ginue_inner(mono(0), mono(0), PsiSpec::shift(1.5), kCfg) ==
        doctest::Approx(3.0 * kPi).epsilon(1e-10));
}

TEST_CASE("plane inner product symmetry and shift linearity") {
  const CompleteFamily fam = CompleteFamily::random(4, 57);
  // Symmetric only for weights that are real-valued off the axis; shift is
  // not (its imaginary part feeds the antisymmetric component instead).
  for (const auto& psi : {PsiSpec::one(), PsiSpec::modulus_squared()}) {
    for (int i = 0; i < fam.size(); ++i) {
      for (int j = i; j < fam.size(); ++j) {
        const double ij = ginue_inner(fam.poly(i), fam.poly(j), psi, kCfg);
        const double ji = ginue_inner(fam.poly(j), fam.poly(i), psi, kCfg);
        CHECK(ij == doctest::Approx(ji).epsilon(1e-9).scale(
                        std::max(1.0, std::abs(ij))));
      }
    }
  }
  // psi = z - g decomposes as z <P|Q>_1 - <P|g Q>_1.
  const double z = 1.5;
  for (int i = 0; i < fam.size(); ++i) {
    for (int j = 0; j < fam.size(); ++j) {
      const MonicPolynomial& q = fam.poly(j);
      std::vector<cd> lifted(static_cast<size_t>(q.degree()) + 1);
      lifted[0] = 0.0;
      for (int k = 0; k < q.degree(); ++k) lifted[static_cast<size_t>(k) + 1] = q.coeff(k);
      const MonicPolynomial gq(lifted);
      const double shifted =
          ginue_inner(fam.poly(i), q, PsiSpec::shift(z), kCfg);
      const double composed =
          z * ginue_inner(fam.poly(i), q, PsiSpec::one(), kCfg) -
          ginue_inner(fam.poly(i), gq, PsiSpec::one(), kCfg);
      CHECK(shifted == doctest::Approx(composed).epsilon(1e-9).scale(
                           std::max(1.0, std::abs(composed))));
    }
  }
}

TEST_CASE("plane moment table matches the direct route") {
  const int n = 5;
  for (const auto& psi : {PsiSpec::one(), PsiSpec::modulus_squared()}) {
    const GinueMomentTable table = GinueMomentTable::build(n, psi, kCfg);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        const double direct = ginue_inner(mono(a), mono(b), psi, kCfg);
        CHECK(table.gram(a, b) ==
              doctest::Approx(direct).epsilon(1e-9).scale(
                  std::max(1.0, std::abs(direct))));
      }
    }
    const CompleteFamily fam = CompleteFamily::random(n, 3);
    for (int i = 0; i < n; ++i) {
      const double via_table = table.form(fam.poly(i), fam.poly(n - 1 - i));
      const double direct =
          ginue_inner(fam.poly(i), fam.poly(n - 1 - i), psi, kCfg);
      CHECK(via_table == doctest::Approx(direct).epsilon(1e-9).scale(
                             std::max(1.0, std::abs(direct))));
    }
  }
}

TEST_CASE("preconditions are enforced") {
  const PsiSpec modsq = PsiSpec::modulus_squared();
  CHECK_THROWS_AS(skew_real(mono(0), mono(1), modsq, kCfg),
                  std::invalid_argument);
  CHECK_THROWS_AS(skew_complex(mono(0), mono(1), modsq, kCfg),
                  std::invalid_argument);
  CHECK_THROWS_AS(one_sided_moment(mono(0), modsq, kCfg),
                  std::invalid_argument);
  CHECK_THROWS_AS(GinoeMomentTable::build(3, modsq, kCfg),
                  std::invalid_argument);

  const MonicPolynomial complex_coeffs({cd(0.0, 1.0)});
  CHECK_THROWS_AS(skew_real(complex_coeffs, mono(1), PsiSpec::one(), kCfg),
                  std::invalid_argument);
  CHECK_THROWS_AS(ginue_inner(complex_coeffs, mono(1), PsiSpec::one(), kCfg),
                  std::invalid_argument);

  const GinoeMomentTable small = GinoeMomentTable::build(2, PsiSpec::one(), kCfg);
  CHECK_THROWS_AS(small.form(mono(0), mono(2)), std::invalid_argument);
  CHECK_THROWS_AS(small.skew(0, 2), std::invalid_argument);
}

TEST_CASE("halving the grid moves the values below tolerance") {
  const PsiSpec psi = PsiSpec::poly({0.5, -1.0, 0.0, 2.0});
  for (int d = 1; d <= 4; ++d) {
    const auto r = skew_real(mono(0), mono(d), psi, kCfg);
    CHECK(r.est_error <= 1e-8 * std::max(1.0, std::abs(r.value)));
    const auto c = skew_complex(mono(0), mono(d), psi, kCfg);
    CHECK(c.est_error <= 1e-8 * std::max(1.0, std::abs(c.value)));
  }
}
