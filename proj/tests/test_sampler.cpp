#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ginavg/averages.hpp"
#include "ginavg/sampler.hpp"

using namespace ginavg::sampler;
using ginavg::numerical_error;
using ginavg::quadrature::QuadratureConfig;
using ginavg::weights::PsiSpec;

namespace {

const QuadratureConfig kCfg;
constexpr double kPi = 3.14159265358979323846;

struct ThreadCountGuard {
  explicit ThreadCountGuard(int threads) {
    setenv("GINAVG_THREADS", std::to_string(threads).c_str(), 1);
  }
  ~ThreadCountGuard() { unsetenv("GINAVG_THREADS"); }
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream stream(text);
  while (std::getline(stream, item, sep)) out.push_back(item);
  return out;
}

}  // namespace

TEST_CASE("counter stream determinism and moments") {
  CHECK(normal_at(7, 123) == normal_at(7, 123));
  CHECK(normal_at(7, 123) != normal_at(8, 123));
  CHECK(normal_at(7, 123) != normal_at(7, 124));

  const int draws = 100000;
  double lo = 1.0, hi = 0.0, mean_u = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double u = uniform_at(11, i);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    mean_u += u;
  }
  mean_u /= draws;
  CHECK(lo > 0.0);
  CHECK(hi <= 1.0);
  CHECK(std::abs(mean_u - 0.5) < 4e-3);

  const int normals = 1000000;
  double sum = 0.0, sum_sq = 0.0, lag = 0.0, prev = 0.0;
  for (int i = 0; i < normals; ++i) {
    const double z = normal_at(3, i);
    sum += z;
    sum_sq += z * z;
    if (i > 0) lag += prev * z;
    prev = z;
  }
  const double mean = sum / normals;
  const double var = sum_sq / normals - mean * mean;
  CHECK(std::abs(mean) < 4e-3);
  CHECK(std::abs(var - 1.0) < 1e-2);
  CHECK(std::abs(lag / normals) < 4e-3);
}

TEST_CASE("matrix sampling is reproducible with disjoint streams") {
  const Eigen::MatrixXd a = sample_ginoe(4, 42);
  const Eigen::MatrixXd b = sample_ginoe(4, 42);
  CHECK((a.array() == b.array()).all());
  CHECK_FALSE((sample_ginoe(4, 42, 1).array() == a.array()).all());
  CHECK_FALSE((sample_ginoe(4, 43).array() == a.array()).all());

  const Eigen::MatrixXcd z = sample_ginue(3, 42);
  CHECK((z.array() == sample_ginue(3, 42).array()).all());

  // Entry moments of the complex ensemble: E z = 0 and E|z|^2 = 2.
  const int draws = 20000;
  std::complex<double> entry_sum = 0.0;
  double mod_sq_sum = 0.0;
  for (int i = 0; i < draws; ++i) {
    const Eigen::MatrixXcd s = sample_ginue(4, 7, i);
    entry_sum += s.sum();
    mod_sq_sum += s.squaredNorm();
  }
  const double entries = 16.0 * draws;
  CHECK(std::abs(entry_sum) / entries < 4e-2);
  CHECK(std::abs(mod_sq_sum / entries - 2.0) < 2e-2);

  CHECK_THROWS_AS(sample_ginoe(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(sample_ginue(-2, 1), std::invalid_argument);
}

TEST_CASE("spectrum classification") {
  using cd = std::complex<double>;

  const Spectrum all_real = classify_spectrum({cd(1.0), cd(2.0)});
  CHECK(all_real.l() == 2);
  CHECK(all_real.m() == 0);
  CHECK(all_real.n() == 2);

  const Spectrum one_pair = classify_spectrum({cd(0.0, 1.0), cd(0.0, -1.0)});
  CHECK(one_pair.l() == 0);
  CHECK(one_pair.m() == 1);
  CHECK(one_pair.pairs[0] == cd(0.0, 1.0));

  const Spectrum mixed =
      classify_spectrum({cd(3.0), cd(2.0, 1.0), cd(2.0, -1.0)});
  CHECK(mixed.l() == 1);
  CHECK(mixed.m() == 1);
  CHECK(mixed.reals[0] == 3.0);
  CHECK(mixed.pairs[0] == cd(2.0, 1.0));

  // Near-real values fold onto the axis under the relative threshold.
  const Spectrum folded = classify_spectrum({cd(5.0, 1e-12), cd(-1.0, 0.0)});
  CHECK(folded.l() == 2);

  CHECK_THROWS_AS(classify_spectrum({cd(0.0, 1.0), cd(0.0, 2.0)}),
                  numerical_error);
  CHECK_THROWS_AS(classify_spectrum({cd(1.0, 1.0), cd(1.0, -2.0)}),
                  numerical_error);
  CHECK_THROWS_AS(classify_spectrum({cd(1.0)}, 0.0), std::invalid_argument);

  // Sampled real matrices classify cleanly at the default threshold.
  for (int trial = 0; trial < 2000; ++trial) {
    const Eigen::MatrixXd mat = sample_ginoe(6, 31, trial);
    const Eigen::EigenSolver<Eigen::MatrixXd> solver(mat, false);
    std::vector<cd> eigenvalues(6);
    for (int i = 0; i < 6; ++i) eigenvalues[i] = solver.eigenvalues()(i);
    const Spectrum s = classify_spectrum(eigenvalues);
    CHECK(s.n() == 6);
    for (const cd& b : s.pairs) CHECK(b.imag() > 0.0);
  }
}

TEST_CASE("constant class function averages to exactly one") {
  const McEstimate real_one =
      mc_average(Ensemble::ginoe, 2, PsiSpec::one(), 20000, 5);
  CHECK(real_one.mean == 1.0);
  CHECK(real_one.std_error == 0.0);
  CHECK(real_one.samples == 20000);
  CHECK(real_one.seed == 5);
  CHECK(real_one.skipped == 0);

  const McEstimate plane_one =
      mc_average(Ensemble::ginue, 3, PsiSpec::one(), 10000, 5);
  CHECK(plane_one.mean == 1.0);
  CHECK(plane_one.std_error == 0.0);
}

TEST_CASE("monte carlo matches the moment oracles") {
  // E (det X)^2 = n! over the real ensemble.
  const McEstimate det_sq =
      mc_average(Ensemble::ginoe, 3, PsiSpec::monomial(2), 100000, 17);
  CHECK(det_sq.std_error > 0.0);
  CHECK(std::abs(det_sq.mean - 6.0) < 4.0 * det_sq.std_error);

  // E det X = 0 by sign symmetry.
  const McEstimate det =
      mc_average(Ensemble::ginoe, 2, PsiSpec::monomial(1), 100000, 29);
  CHECK(std::abs(det.mean) < 4.0 * det.std_error);

  // E |det Z|^2 = 2^n n! over the plane ensemble.
  const McEstimate mod_sq =
      mc_average(Ensemble::ginue, 2, PsiSpec::modulus_squared(), 100000, 11);
  CHECK(std::abs(mod_sq.mean - 8.0) < 4.0 * mod_sq.std_error);
}

TEST_CASE("monte carlo agrees with the deterministic routes") {
  using ginavg::averages::average_ginoe;
  using ginavg::averages::average_ginue;

  const PsiSpec quartic = PsiSpec::poly({0.5, -1.0, 0.0, 2.0});
  const double formula = average_ginoe(2, quartic, kCfg).value;
  const McEstimate mc = mc_average(Ensemble::ginoe, 2, quartic, 100000, 23);
  CHECK(std::abs(mc.mean - formula) < 4.0 * mc.std_error);

  // Plane samples have complex products; only the averaged real part
  // converges to the formula value.
  const PsiSpec shifted = PsiSpec::shift(1.5);
  const double plane_formula = average_ginue(2, shifted, kCfg).value;
  const McEstimate plane_mc =
      mc_average(Ensemble::ginue, 2, shifted, 100000, 37);
  CHECK(std::abs(plane_mc.mean - plane_formula) < 4.0 * plane_mc.std_error);
}

TEST_CASE("estimates are worker-count independent") {
  McEstimate runs[2];
  std::string csv_runs[2];
  for (int i = 0; i < 2; ++i) {
    ThreadCountGuard guard(i == 0 ? 1 : 3);
    std::ostringstream csv;
    runs[i] = mc_average(Ensemble::ginoe, 3, PsiSpec::monomial(2), 20000, 99,
                         kClassifyThreshold, &csv);
    csv_runs[i] = csv.str();
  }
  CHECK(runs[0].mean == runs[1].mean);
  CHECK(runs[0].std_error == runs[1].std_error);
  CHECK(runs[0].skipped == runs[1].skipped);
  CHECK(csv_runs[0] == csv_runs[1]);
  CHECK(!csv_runs[0].empty());
}

TEST_CASE("csv rows carry the classified sector per sample") {
  std::ostringstream csv;
  const McEstimate est = mc_average(Ensemble::ginoe, 3, PsiSpec::one(), 500,
                                    3, kClassifyThreshold, &csv);
  const std::vector<std::string> lines = split(csv.str(), '\n');
  CHECK(static_cast<std::int64_t>(lines.size()) ==
        est.samples - est.skipped);

  double mean_from_rows = 0.0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::vector<std::string> cols = split(lines[i], ',');
    REQUIRE(cols.size() == 4);
    CHECK(std::stoll(cols[0]) == static_cast<std::int64_t>(i));
    const int l = std::stoi(cols[1]);
    const int m = std::stoi(cols[2]);
    CHECK(l + 2 * m == 3);
    CHECK((l == 1 || l == 3));
    mean_from_rows += std::stod(cols[3]);
  }
  CHECK(mean_from_rows / static_cast<double>(lines.size()) ==
        doctest::Approx(est.mean).epsilon(1e-15));
}

TEST_CASE("monte carlo preconditions") {
  CHECK_THROWS_AS(
      mc_average(Ensemble::ginoe, 2, PsiSpec::modulus_squared(), 100, 1),
      std::invalid_argument);
  CHECK_THROWS_AS(mc_average(Ensemble::ginoe, 0, PsiSpec::one(), 100, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(mc_average(Ensemble::ginoe, 2, PsiSpec::one(), 0, 1),
                  std::invalid_argument);
  // The plane ensemble accepts the modulus-squared seed.
  CHECK_NOTHROW(
      mc_average(Ensemble::ginue, 1, PsiSpec::modulus_squared(), 100, 1));
}

TEST_CASE("real eigenvalue count distribution") {
  const RealCountHistogram single = real_count_distribution(1, 2000, 13);
  CHECK(single.counts[1] == 2000);
  CHECK(single.skipped == 0);
  CHECK(single.probability(1) == 1.0);

  const RealCountHistogram pair = real_count_distribution(2, 40000, 21);
  std::int64_t total = 0;
  for (std::int64_t c : pair.counts) total += c;
  CHECK(total == pair.samples - pair.skipped);
  // P(both real) = 1/sqrt(2); binomial 4 sigma band at 40000 samples.
  const double p = pair.probability(2);
  CHECK(std::abs(p - 1.0 / std::sqrt(2.0)) <
        4.0 * std::sqrt(p * (1.0 - p) / 40000.0));
  CHECK(pair.probability(0) + pair.probability(2) ==
        doctest::Approx(1.0).epsilon(1e-15));

  // Odd n forces an odd real count.
  const RealCountHistogram triple = real_count_distribution(3, 5000, 8);
  CHECK(triple.counts[0] == 0);
  CHECK(triple.counts[2] == 0);
  CHECK(triple.counts[1] + triple.counts[3] == 5000);

  CHECK_THROWS_AS(pair.probability(3), std::invalid_argument);
  CHECK_THROWS_AS(real_count_distribution(0, 10, 1), std::invalid_argument);
}

TEST_CASE("partial density point values") {
  using cd = std::complex<double>;

  // Single eigenvalue: the standard normal density.
  for (double a : {0.0, -0.5, 1.7, 3.2}) {
    const double want = std::exp(-0.5 * a * a) / std::sqrt(2.0 * kPi);
    CHECK(jpdf_partial({a}, {}, 1) == doctest::Approx(want).epsilon(1e-12));
  }

  CHECK(jpdf_partial({0.0, 0.0}, {}, 2) == 0.0);
  CHECK(jpdf_partial({1.0, -1.0}, {}, 2) > 0.0);

  // One conjugate pair: against the textbook erfc form (safe at small |y|).
  const double c2 = std::pow(2.0, 1.5) * std::sqrt(kPi);
  for (double y : {0.3, 1.0, 3.0}) {
    for (double x : {0.0, 1.2}) {
      const double naive =
          2.0 * y * std::erfc(std::sqrt(2.0) * y) * std::exp(y * y - x * x) /
          c2;
      CHECK(jpdf_partial({}, {cd(x, y)}, 2) ==
            doctest::Approx(naive).epsilon(1e-12));
    }
  }

  // Mixed sector by hand: |Delta| = 2|y| |a - beta|^2.
  const double a = 0.5;
  const cd beta(0.3, 0.8);
  const double c3 = 4.0 * kPi;
  const double by_hand = 2.0 * beta.imag() * std::norm(a - beta) *
                         std::exp(-0.5 * a * a) *
                         std::erfc(std::sqrt(2.0) * beta.imag()) *
                         std::exp(beta.imag() * beta.imag() -
                                  beta.real() * beta.real()) /
                         c3;
  CHECK(jpdf_partial({a}, {beta}, 3) ==
        doctest::Approx(by_hand).epsilon(1e-12));

  // Far off the axis the erfcx path underflows cleanly instead of blowing up.
  const double far = jpdf_partial({}, {cd(0.0, 40.0)}, 2);
  CHECK(std::isfinite(far));
  CHECK(far >= 0.0);

  CHECK_THROWS_AS(jpdf_partial({}, {cd(1.0, 0.0)}, 2), std::invalid_argument);
  CHECK_THROWS_AS(jpdf_partial({1.0}, {}, 2), std::invalid_argument);
  CHECK_THROWS_AS(jpdf_partial({}, {}, 0), std::invalid_argument);
}

TEST_CASE("sector probabilities at small n") {
  CHECK(jpdf_sector_probability(1, 1, 0, kCfg) ==
        doctest::Approx(1.0).epsilon(1e-9));

  const double both_real = jpdf_sector_probability(2, 2, 0, kCfg);
  const double one_pair = jpdf_sector_probability(2, 0, 1, kCfg);
  CHECK(both_real == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-6));
  CHECK(one_pair ==
        doctest::Approx(1.0 - 1.0 / std::sqrt(2.0)).epsilon(1e-6));
  CHECK(both_real + one_pair == doctest::Approx(1.0).epsilon(1e-6));

  // Quadrature cross-validates the sampled real-count frequencies.
  const RealCountHistogram hist = real_count_distribution(2, 40000, 77);
  const double p = hist.probability(2);
  CHECK(std::abs(p - both_real) < 4.0 * std::sqrt(p * (1.0 - p) / 40000.0));

  CHECK_THROWS_AS(jpdf_sector_probability(2, 1, 0, kCfg),
                  std::invalid_argument);
  CHECK_THROWS_AS(jpdf_sector_probability(3, 1, 1, kCfg),
                  std::invalid_argument);
}
