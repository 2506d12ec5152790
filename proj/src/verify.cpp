#include "ginavg/verify.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "ginavg/antisym.hpp"
#include "ginavg/averages.hpp"
#include "ginavg/combinat.hpp"
#include "ginavg/inner.hpp"
#include "ginavg/runconfig.hpp"
#include "ginavg/sampler.hpp"
#include "ginavg/weights.hpp"

namespace ginavg::verify {
namespace {

using antisym::AntisymmetricMatrix;
using quadrature::QuadratureConfig;
using runconfig::format_scalar;
using weights::cd;
using weights::CompleteFamily;
using weights::MonicPolynomial;
using weights::PsiSpec;

constexpr double kPi = 3.14159265358979323846;

// Accumulates scaled residuals against a pinned tolerance and keeps the
// first violating instance for replay.
class Battery {
 public:
  Battery(std::string name, double tol) : name_(std::move(name)), tol_(tol) {}

  void observe(double residual, const std::function<std::string()>& describe) {
    max_residual_ = std::max(max_residual_, residual);
    if (residual > tol_ && failing_.empty()) failing_ = describe();
  }

  CheckResult result() const {
    return {name_, failing_.empty(), tol_, max_residual_, failing_};
  }

 private:
  std::string name_;
  double tol_;
  double max_residual_ = 0.0;
  std::string failing_;
};

double rel_residual(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

AntisymmetricMatrix<double> random_antisym(int dim, std::uint64_t seed) {
  std::uint64_t counter = 0;
  return AntisymmetricMatrix<double>::from_upper(
      dim, [&](int, int) { return sampler::normal_at(seed, counter++); });
}

std::string serialize_antisym(const AntisymmetricMatrix<double>& a) {
  std::ostringstream out;
  antisym::write_matrix(out, a);
  return out.str();
}

std::string serialize_values(const std::vector<double>& values) {
  std::ostringstream out;
  for (std::size_t i = 0; i < values.size(); ++i)
    out << (i ? "," : "") << format_scalar(values[i]);
  return out.str();
}

Eigen::MatrixXd to_dense(const AntisymmetricMatrix<double>& a) {
  Eigen::MatrixXd m(a.dim(), a.dim());
  for (int j = 0; j < a.dim(); ++j)
    for (int k = 0; k < a.dim(); ++k) m(j, k) = a.at(j, k);
  return m;
}

CheckResult check_pf_squared_det() {
  Battery battery("pf_squared_equals_det", 1e-8);
  for (int dim = 2; dim <= 12; dim += 2)
    for (int instance = 0; instance < 3; ++instance) {
      const auto a = random_antisym(dim, 1000 + 10 * dim + instance);
      const double pf = antisym::pfaffian_elimination(a).value;
      const double det = to_dense(a).determinant();
      battery.observe(rel_residual(pf * pf, det),
                      [&] { return serialize_antisym(a); });
    }
  return battery.result();
}

CheckResult check_elimination_vs_combinatorial() {
  Battery battery("elimination_equals_combinatorial", 1e-10);
  for (int dim = 2; dim <= 12; dim += 2)
    for (int instance = 0; instance < 2; ++instance) {
      const auto a = random_antisym(dim, 2000 + 10 * dim + instance);
      const double fast = antisym::pfaffian_elimination(a).value;
      const double exact = antisym::pfaffian_combinatorial(a).value;
      battery.observe(rel_residual(fast, exact),
                      [&] { return serialize_antisym(a); });
    }
  return battery.result();
}

CheckResult check_minor_expansion() {
  Battery battery("pfaffian_minor_expansion", 1e-9);
  for (int dim = 2; dim <= 8; dim += 2)
    for (int instance = 0; instance < 3; ++instance) {
      const auto r = random_antisym(dim, 3000 + 10 * dim + instance);
      const auto c = random_antisym(dim, 4000 + 10 * dim + instance);
      const double whole = antisym::pfaffian_elimination(r + c).value;
      const double expanded = antisym::pfaffian_sum_expansion(r, c);
      battery.observe(rel_residual(expanded, whole), [&] {
        return "R:\n" + serialize_antisym(r) + "C:\n" + serialize_antisym(c);
      });
    }
  return battery.result();
}

CheckResult check_sign_identity() {
  Battery battery("sign_product_identity", 0.0);
  for (int instance = 0; instance < 200; ++instance) {
    const int l = 1 + instance % 7;
    std::vector<double> alpha(l);
    for (int i = 0; i < l; ++i)
      alpha[i] = 1.5 * sampler::normal_at(5000 + instance, i);
    double product = 1.0;
    for (int j = 0; j < l; ++j)
      for (int k = j + 1; k < l; ++k)
        product *= alpha[k] > alpha[j] ? 1.0 : (alpha[k] < alpha[j] ? -1.0 : 0.0);
    const double pf = antisym::sign_matrix_pf(alpha);
    battery.observe(std::abs(pf - product),
                    [&] { return "alpha=" + serialize_values(alpha); });
  }
  return battery.result();
}

CheckResult check_laplace_expansion() {
  Battery battery("laplace_expansion", 1e-10);
  for (int n = 2; n <= 7; ++n)
    for (int instance = 0; instance < 3; ++instance) {
      std::uint64_t counter = 0;
      Eigen::MatrixXd a(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          a(i, j) = sampler::normal_at(6000 + 10 * n + instance, counter++);
      const double direct = a.determinant();
      for (int k = 1; k < n; ++k) {
        double sum = 0.0;
        combinat::for_each_increasing(
            k, n, [&](const combinat::IncreasingMap& u) {
              Eigen::MatrixXd top(k, k), bottom(n - k, n - k);
              const auto& cols = u.image();
              const combinat::IncreasingMap comp = u.complement();
              const auto& rest = comp.image();
              for (int r = 0; r < k; ++r)
                for (int c = 0; c < k; ++c)
                  top(r, c) = a(r, combinat::idx0(cols[c]));
              for (int r = 0; r < n - k; ++r)
                for (int c = 0; c < n - k; ++c)
                  bottom(r, c) = a(k + r, combinat::idx0(rest[c]));
              sum += u.sign() * top.determinant() * bottom.determinant();
            });
        battery.observe(rel_residual(sum, direct), [&] {
          std::ostringstream out;
          out << "n=" << n << " k=" << k << " rowmajor=";
          for (int i = 0; i < n * n; ++i)
            out << (i ? "," : "") << format_scalar(a(i / n, i % n));
          return out.str();
        });
      }
    }
  return battery.result();
}

CheckResult check_delta_factorization() {
  Battery battery("abs_delta_factorization", 1e-9);
  int instance = 0;
  for (int round = 0; round < 7; ++round)
    for (int n = 1; n <= 6; ++n)
      for (int m = 0; 2 * m <= n; ++m) {
        const int l = n - 2 * m;
        const std::uint64_t seed = 7000 + instance;
        std::vector<double> alpha(l);
        for (int i = 0; i < l; ++i)
          alpha[i] = 1.5 * sampler::normal_at(seed, i);
        std::vector<cd> beta(m);
        for (int i = 0; i < m; ++i) {
          const double x = sampler::normal_at(seed, 100 + 2 * i);
          const double y =
              0.2 + std::abs(sampler::normal_at(seed, 101 + 2 * i));
          beta[i] = cd(x, (instance % 2) ? y : -y);
        }
        const CompleteFamily family =
            (round % 2) ? CompleteFamily::random(n, seed)
                        : CompleteFamily::monomials(n);
        const auto both =
            weights::abs_delta_factorization_check(alpha, beta, family);
        const double residual = std::abs(cd(both.direct) - both.expansion) /
                                std::max(1.0, both.direct);
        battery.observe(residual, [&] {
          std::ostringstream out;
          out << "L=" << l << " M=" << m << " alpha="
              << serialize_values(alpha) << " beta=";
          for (int i = 0; i < m; ++i)
            out << (i ? ";" : "") << format_scalar(beta[i].real()) << "+"
                << format_scalar(beta[i].imag()) << "i";
          out << " family_seed=" << seed << (round % 2 ? " random" : " monomial");
          return out.str();
        });
        ++instance;
      }
  return battery.result();
}

CheckResult check_closed_form_inners(const QuadratureConfig& cfg) {
  Battery battery("closed_form_skew_inners", 1e-7);
  const PsiSpec one = PsiSpec::one();
  const MonicPolynomial p0;
  const MonicPolynomial p1 = MonicPolynomial::monomial(1);

  const double real_part = inner::skew_real(p0, p1, one, cfg).value;
  const double plane_part = inner::skew_complex(p0, p1, one, cfg).value;
  const double want_real = 2.0 * std::sqrt(kPi);
  const double want_plane = 2.0 * std::sqrt(kPi) * (std::sqrt(2.0) - 1.0);

  battery.observe(std::abs(real_part - want_real) / want_real, [&] {
    return "<1,g>_R=" + format_scalar(real_part);
  });
  battery.observe(std::abs(plane_part - want_plane) / want_plane, [&] {
    return "<1,g>_C=" + format_scalar(plane_part);
  });
  // Their sum is the n=2 normalization constant.
  const double c2 = averages::constant_c(2).value();
  battery.observe(rel_residual(real_part + plane_part, c2), [&] {
    return "<1,g>=" + format_scalar(real_part + plane_part);
  });
  return battery.result();
}

CheckResult check_plane_monomial_gram(const QuadratureConfig& cfg) {
  Battery battery("plane_monomial_gram", 1e-9);
  const PsiSpec one = PsiSpec::one();
  double factorial = 1.0;
  for (int a = 0; a <= 4; ++a) {
    if (a > 0) factorial *= a;
    const MonicPolynomial mono = MonicPolynomial::monomial(a);
    const double got = inner::ginue_inner(mono, mono, one, cfg);
    const double want = 2.0 * kPi * std::pow(2.0, a) * factorial;
    battery.observe(rel_residual(got, want), [&] {
      return "a=" + std::to_string(a) + " <g^a|g^a>=" + format_scalar(got);
    });
  }
  return battery.result();
}

CheckResult check_exact_antisymmetry(const QuadratureConfig& cfg) {
  Battery battery("exact_antisymmetry", 0.0);
  const CompleteFamily family = CompleteFamily::random(5, 31);
  const PsiSpec psis[] = {PsiSpec::one(), PsiSpec::monomial(2),
                          PsiSpec::shift(1.5)};
  for (const PsiSpec& psi : psis)
    for (int a = 0; a < family.size(); ++a) {
      const double diag =
          inner::skew_sum(family.poly(a), family.poly(a), psi, cfg).value;
      battery.observe(std::abs(diag), [&] {
        return "psi=" + psi.str() + " diag a=" + std::to_string(a);
      });
      for (int b = a + 1; b < family.size(); ++b) {
        const double ab =
            inner::skew_sum(family.poly(a), family.poly(b), psi, cfg).value;
        const double ba =
            inner::skew_sum(family.poly(b), family.poly(a), psi, cfg).value;
        battery.observe(std::abs(ab + ba), [&] {
          return "psi=" + psi.str() + " pair (" + std::to_string(a) + "," +
                 std::to_string(b) + ")";
        });
      }
    }
  return battery.result();
}

CheckResult check_moment_table(const QuadratureConfig& cfg) {
  Battery battery("moment_table_consistency", 1e-9);
  const CompleteFamily family = CompleteFamily::random(4, 47);
  for (const PsiSpec& psi : {PsiSpec::one(), PsiSpec::monomial(2)}) {
    const auto table = inner::GinoeMomentTable::build(4, psi, cfg);
    for (int a = 0; a < family.size(); ++a)
      for (int b = a + 1; b < family.size(); ++b) {
        const double via_table = table.form(family.poly(a), family.poly(b));
        const double direct =
            inner::skew_sum(family.poly(a), family.poly(b), psi, cfg).value;
        battery.observe(
            std::abs(via_table - direct) /
                std::max({1.0, std::abs(via_table), std::abs(direct)}),
            [&] {
              return "ginoe psi=" + psi.str() + " pair (" +
                     std::to_string(a) + "," + std::to_string(b) + ")";
            });
      }
  }
  for (const PsiSpec& psi : {PsiSpec::one(), PsiSpec::shift(1.5)}) {
    const auto table = inner::GinueMomentTable::build(4, psi, cfg);
    for (int a = 0; a < family.size(); ++a)
      for (int b = 0; b < family.size(); ++b) {
        const double via_table = table.form(family.poly(a), family.poly(b));
        const double direct =
            inner::ginue_inner(family.poly(a), family.poly(b), psi, cfg);
        battery.observe(
            std::abs(via_table - direct) /
                std::max({1.0, std::abs(via_table), std::abs(direct)}),
            [&] {
              return "ginue psi=" + psi.str() + " pair (" +
                     std::to_string(a) + "," + std::to_string(b) + ")";
            });
      }
  }
  return battery.result();
}

CheckResult check_ginoe_normalization(const QuadratureConfig& cfg) {
  Battery battery("ginoe_normalization", 1e-6);
  for (int n = 1; n <= 8; ++n) {
    const double value = averages::average_ginoe(n, PsiSpec::one(), cfg).value;
    battery.observe(std::abs(value - 1.0), [&] {
      return "n=" + std::to_string(n) + " value=" + format_scalar(value);
    });
  }
  return battery.result();
}

CheckResult check_ginue_normalization(const QuadratureConfig& cfg) {
  Battery battery("ginue_normalization", 1e-6);
  for (int n = 1; n <= 6; ++n) {
    const double value = averages::average_ginue(n, PsiSpec::one(), cfg).value;
    battery.observe(std::abs(value - 1.0), [&] {
      return "n=" + std::to_string(n) + " value=" + format_scalar(value);
    });
  }
  return battery.result();
}

CheckResult check_ginoe_det_square(const QuadratureConfig& cfg) {
  Battery battery("ginoe_det_square_moment", 1e-5);
  double factorial = 1.0;
  for (int n = 1; n <= 6; ++n) {
    factorial *= n;
    const double value =
        averages::average_ginoe(n, PsiSpec::monomial(2), cfg).value;
    battery.observe(std::abs(value - factorial) / factorial, [&] {
      return "n=" + std::to_string(n) + " value=" + format_scalar(value);
    });
  }
  return battery.result();
}

CheckResult check_ginoe_det_mean(const QuadratureConfig& cfg) {
  Battery battery("ginoe_det_mean_zero", 1e-8);
  for (int n = 1; n <= 5; ++n) {
    const double value =
        averages::average_ginoe(n, PsiSpec::monomial(1), cfg).value;
    battery.observe(std::abs(value), [&] {
      return "n=" + std::to_string(n) + " value=" + format_scalar(value);
    });
  }
  return battery.result();
}

CheckResult check_ginue_det_square(const QuadratureConfig& cfg) {
  Battery battery("ginue_abs_det_square_moment", 1e-5);
  double want = 1.0;
  for (int n = 1; n <= 4; ++n) {
    want *= 2.0 * n;
    const double value =
        averages::average_ginue(n, PsiSpec::modulus_squared(), cfg).value;
    battery.observe(std::abs(value - want) / want, [&] {
      return "n=" + std::to_string(n) + " value=" + format_scalar(value);
    });
  }
  return battery.result();
}

CheckResult check_route_agreement(const QuadratureConfig& cfg) {
  Battery battery("route_agreement", 1e-6);
  auto spread = [&](const std::vector<double>& values, const std::string& tag) {
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    const double scale =
        std::max({1.0, std::abs(*lo), std::abs(*hi)});
    battery.observe((*hi - *lo) / scale, [&] { return tag; });
  };

  for (const PsiSpec& psi : {PsiSpec::one(), PsiSpec::monomial(2)}) {
    for (int n : {4, 6})
      spread({averages::average_ginoe(n, psi, cfg).value,
              averages::average_ginoe_skew(n, psi, cfg).value,
              averages::average_ginoe_parity(n, psi, cfg).value},
             "ginoe n=" + std::to_string(n) + " psi=" + psi.str());
    spread({averages::average_ginoe(3, psi, cfg).value,
            averages::average_ginoe_parity(3, psi, cfg).value},
           "ginoe n=3 psi=" + psi.str());
  }
  spread({averages::average_ginue(3, PsiSpec::shift(1.5), cfg).value,
          averages::average_ginue_orth(3, PsiSpec::shift(1.5), cfg).value},
         "ginue n=3 psi=shift:1.5");
  spread({averages::average_ginue(4, PsiSpec::modulus_squared(), cfg).value,
          averages::average_ginue_orth(4, PsiSpec::modulus_squared(), cfg)
              .value},
         "ginue n=4 psi=modsq");
  return battery.result();
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"pfaffian", "identities",
                                                 "inner", "end2end"};
  return names;
}

std::vector<CheckResult> run_suite(const std::string& suite,
                                   const QuadratureConfig& cfg) {
  cfg.validate();
  if (suite == "pfaffian")
    return {check_pf_squared_det(), check_elimination_vs_combinatorial(),
            check_minor_expansion(), check_sign_identity()};
  if (suite == "identities")
    return {check_laplace_expansion(), check_sign_identity(),
            check_minor_expansion(), check_delta_factorization()};
  if (suite == "inner")
    return {check_closed_form_inners(cfg), check_plane_monomial_gram(cfg),
            check_exact_antisymmetry(cfg), check_moment_table(cfg)};
  if (suite == "end2end")
    return {check_ginoe_normalization(cfg), check_ginue_normalization(cfg),
            check_ginoe_det_square(cfg),    check_ginoe_det_mean(cfg),
            check_ginue_det_square(cfg),    check_route_agreement(cfg)};
  throw std::invalid_argument("run_suite: unknown suite '" + suite + "'");
}

bool all_pass(const std::vector<CheckResult>& results) {
  return std::all_of(results.begin(), results.end(),
                     [](const CheckResult& r) { return r.pass; });
}

}  // namespace ginavg::verify
