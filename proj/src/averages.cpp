#include "ginavg/averages.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ginavg/errors.hpp"

namespace ginavg::averages {

using antisym::AntisymmetricMatrix;
using antisym::pfaffian_elimination;
using inner::GinoeMomentTable;
using inner::GinueMomentTable;

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;
constexpr double kLog2 = 0.69314718055994530942;
constexpr double kSingularFraction = 1e-10;

void require_size(int n, const char* who) {
  if (n < 1) throw std::invalid_argument(std::string(who) + ": n must be >= 1");
}

double matrix_route_error(double value, int n, const QuadratureConfig& cfg) {
  return std::abs(value) * double(n) * double(n) * cfg.target_rel_tol;
}

EnsembleAverage finish(double value, Method m, int n, const PsiSpec& psi,
                       const QuadratureConfig& cfg) {
  if (!std::isfinite(value)) {
    throw numerical_error("ensemble average overflowed the double range");
  }
  return {value, m, n, psi, matrix_route_error(value, n, cfg)};
}

// Signed log determinant via LU; sign 0 for an exactly singular factor.
LogScalar log_det(const Eigen::MatrixXd& a) {
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  LogScalar out{0.0, double(lu.permutationP().determinant())};
  for (int i = 0; i < a.rows(); ++i) {
    const double d = lu.matrixLU()(i, i);
    if (d == 0.0) return {0.0, 0.0};
    out.log_abs += std::log(std::abs(d));
    if (d < 0.0) out.sign = -out.sign;
  }
  return out;
}

// Bilinear contraction of an antisymmetric table against coefficient
// vectors, paired so that b(x, x) == 0 exactly.
double skew_form_vec(const GinoeMomentTable& table,
                     const std::vector<double>& x,
                     const std::vector<double>& y) {
  double acc = 0.0;
  const int n = table.size();
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const double coeff = x[size_t(a)] * y[size_t(b)] - x[size_t(b)] * y[size_t(a)];
      acc += coeff * table.skew(a, b);
    }
  }
  return acc;
}

double gram_form_vec(const GinueMomentTable& table,
                     const std::vector<double>& x,
                     const std::vector<double>& y) {
  double acc = 0.0;
  const int n = table.size();
  for (int a = 0; a < n; ++a) {
    if (x[size_t(a)] == 0.0) continue;
    for (int b = 0; b < n; ++b) {
      acc += x[size_t(a)] * y[size_t(b)] * table.gram(a, b);
    }
  }
  return acc;
}

MonicPolynomial poly_from_coeffs(const std::vector<double>& v, int degree) {
  std::vector<weights::cd> lower(static_cast<size_t>(degree));
  for (int k = 0; k < degree; ++k) lower[size_t(k)] = v[size_t(k)];
  return MonicPolynomial(std::move(lower));
}

}  // namespace

double LogScalar::value() const {
  if (sign == 0.0) return 0.0;
  return sign * std::exp(log_abs);
}

double LogScalar::ratio_to(const LogScalar& denom) const {
  if (denom.sign == 0.0) {
    throw numerical_error("LogScalar: division by an exact zero");
  }
  if (sign == 0.0) return 0.0;
  return sign * denom.sign * std::exp(log_abs - denom.log_abs);
}

LogScalar constant_c(int n) {
  require_size(n, "constant_c");
  LogScalar out{0.25 * n * (n + 1) * kLog2, 1.0};
  for (int k = 1; k <= n; ++k) out.log_abs += std::lgamma(0.5 * k);
  return out;
}

LogScalar constant_d(int n) {
  require_size(n, "constant_d");
  LogScalar out{n * kLog2Pi, 1.0};
  for (int k = 1; k <= n; ++k) out.log_abs += std::lgamma(double(k) + 1.0);
  return out;
}

LogScalar ginue_gram_normalizer(int n) {
  require_size(n, "ginue_gram_normalizer");
  LogScalar out{0.0, 1.0};
  for (int a = 0; a < n; ++a) {
    out.log_abs += kLog2Pi + a * kLog2 + std::lgamma(double(a) + 1.0);
  }
  return out;
}

std::string method_name(Method m) {
  switch (m) {
    case Method::pfaffian:
      return "pfaffian";
    case Method::skew_orth:
      return "skew_orth";
    case Method::parity_det:
      return "parity_det";
    case Method::ginue_det:
      return "ginue_det";
    case Method::ginue_orth:
      return "ginue_orth";
    case Method::monte_carlo:
      return "mc";
  }
  return "pfaffian";
}

AntisymmetricMatrix<double> build_u_matrix(const CompleteFamily& family,
                                           const PsiSpec& psi,
                                           const QuadratureConfig& cfg) {
  const int n = family.size();
  require_size(n, "build_u_matrix");
  const int dim = 2 * ((n + 1) / 2);
  const GinoeMomentTable table = GinoeMomentTable::build(n, psi, cfg);
  return AntisymmetricMatrix<double>::from_upper(dim, [&](int j, int k) {
    // 0-based strict upper triangle; column n (present for odd n only)
    // carries the one-sided moments, with sgn(k-j) = +1 throughout.
    if (k < n) return table.form(family.poly(j), family.poly(k));
    return table.moment_of(family.poly(j));
  });
}

EnsembleAverage average_ginoe(int n, const PsiSpec& psi,
                              const CompleteFamily& family,
                              const QuadratureConfig& cfg) {
  require_size(n, "average_ginoe");
  if (family.size() != n) {
    throw std::invalid_argument("average_ginoe: family size must equal n");
  }
  const auto u = build_u_matrix(family, psi, cfg);
  const auto pf = pfaffian_elimination(u);
  LogScalar num{0.0, 0.0};
  if (pf.log_abs.has_value()) num = {*pf.log_abs, pf.unit};
  const double value = num.ratio_to(constant_c(n));
  return finish(value, Method::pfaffian, n, psi, cfg);
}

EnsembleAverage average_ginoe(int n, const PsiSpec& psi,
                              const QuadratureConfig& cfg) {
  return average_ginoe(n, psi, CompleteFamily::monomials(n), cfg);
}

SkewOrthFamily skew_orthogonalize(int n, const PsiSpec& psi,
                                  const QuadratureConfig& cfg) {
  require_size(n, "skew_orthogonalize");
  if (n % 2 != 0) {
    throw std::invalid_argument("skew_orthogonalize: n must be even");
  }
  const GinoeMomentTable table = GinoeMomentTable::build(n, psi, cfg);
  double scale = 0.0;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      scale = std::max(scale, std::abs(table.skew(a, b)));
    }
  }
  scale = std::max(scale, 1e-300);

  std::vector<std::vector<double>> q;  // coefficients over monomials
  std::vector<double> norms;
  for (int j = 0; 2 * j < n; ++j) {
    std::vector<double> v1(size_t(n), 0.0), v2(size_t(n), 0.0);
    v1[size_t(2 * j)] = 1.0;
    v2[size_t(2 * j + 1)] = 1.0;
    for (int k = 0; k < j; ++k) {
      const auto& q_odd = q[size_t(2 * k)];    // Q_{2k+1}, degree 2k
      const auto& q_even = q[size_t(2 * k + 1)];  // Q_{2k+2}, degree 2k+1
      const double m_k = norms[size_t(k)];
      for (auto* v : {&v1, &v2}) {
        const double c_even = skew_form_vec(table, q_even, *v);
        const double c_odd = skew_form_vec(table, q_odd, *v);
        for (int a = 0; a < n; ++a) {
          (*v)[size_t(a)] += (c_even / m_k) * q_odd[size_t(a)] -
                             (c_odd / m_k) * q_even[size_t(a)];
        }
      }
    }
    const double m_j = skew_form_vec(table, v1, v2);
    if (std::abs(m_j) < kSingularFraction * scale) {
      throw numerical_error(
          "skew_orthogonalize: normalization vanished at pair " +
          std::to_string(j + 1));
    }
    q.push_back(std::move(v1));
    q.push_back(std::move(v2));
    norms.push_back(m_j);
  }

  std::vector<MonicPolynomial> polys;
  polys.reserve(size_t(n));
  for (int i = 0; i < n; ++i) polys.push_back(poly_from_coeffs(q[size_t(i)], i));
  return {CompleteFamily(std::move(polys)), std::move(norms)};
}

EnsembleAverage average_ginoe_skew(int n, const PsiSpec& psi,
                                   const QuadratureConfig& cfg) {
  const SkewOrthFamily family = skew_orthogonalize(n, psi, cfg);
  LogScalar num{0.0, 1.0};
  for (double m : family.normalizations) {
    num.log_abs += std::log(std::abs(m));
    if (m < 0.0) num.sign = -num.sign;
  }
  const double value = num.ratio_to(constant_c(n));
  return finish(value, Method::skew_orth, n, psi, cfg);
}

EnsembleAverage average_ginoe_parity(int n, const PsiSpec& psi,
                                     const QuadratureConfig& cfg) {
  require_size(n, "average_ginoe_parity");
  if (psi.parity() != weights::Parity::even) {
    throw std::invalid_argument(
        "average_ginoe_parity: weight must be even in gamma");
  }
  // Parity monomials make U[j,k] vanish whenever j-k is even, so only the
  // odd-row/even-column block A carries information.
  const GinoeMomentTable table = GinoeMomentTable::build(n, psi, cfg);
  const int half = (n + 1) / 2;
  Eigen::MatrixXd a(half, half);
  for (int j = 0; j < half; ++j) {
    for (int k = 0; k < half; ++k) {
      const int col = 2 * (k + 1);  // 1-based even column index
      a(j, k) = col <= n ? table.skew(2 * j, col - 1) : table.moment(2 * j);
    }
  }
  const double value = log_det(a).ratio_to(constant_c(n));
  return finish(value, Method::parity_det, n, psi, cfg);
}

EnsembleAverage average_ginue(int n, const PsiSpec& psi,
                              const CompleteFamily& family,
                              const QuadratureConfig& cfg) {
  require_size(n, "average_ginue");
  if (family.size() != n) {
    throw std::invalid_argument("average_ginue: family size must equal n");
  }
  const GinueMomentTable table = GinueMomentTable::build(n, psi, cfg);
  Eigen::MatrixXd w(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      w(j, k) = table.form(family.poly(j), family.poly(k));
    }
  }
  const double value = log_det(w).ratio_to(ginue_gram_normalizer(n));
  return finish(value, Method::ginue_det, n, psi, cfg);
}

EnsembleAverage average_ginue(int n, const PsiSpec& psi,
                              const QuadratureConfig& cfg) {
  return average_ginue(n, psi, CompleteFamily::monomials(n), cfg);
}

std::vector<double> ginue_orth_pivots(int n, const PsiSpec& psi,
                                      const QuadratureConfig& cfg) {
  require_size(n, "ginue_orth_pivots");
  const GinueMomentTable table = GinueMomentTable::build(n, psi, cfg);
  double scale = 0.0;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      scale = std::max(scale, std::abs(table.gram(a, b)));
    }
  }
  scale = std::max(scale, 1e-300);

  // Two-sided process: right polys absorb column operations, left polys row
  // operations; for a symmetric form they coincide.
  std::vector<std::vector<double>> left, right;
  std::vector<double> pivots;
  for (int a = 0; a < n; ++a) {
    std::vector<double> mono(size_t(n), 0.0);
    mono[size_t(a)] = 1.0;
    std::vector<double> r = mono, l = mono;
    for (int b = 0; b < a; ++b) {
      const double cr = gram_form_vec(table, left[size_t(b)], mono) / pivots[size_t(b)];
      const double cl = gram_form_vec(table, mono, right[size_t(b)]) / pivots[size_t(b)];
      for (int k = 0; k < n; ++k) {
        r[size_t(k)] -= cr * right[size_t(b)][size_t(k)];
        l[size_t(k)] -= cl * left[size_t(b)][size_t(k)];
      }
    }
    const double d = gram_form_vec(table, l, r);
    if (std::abs(d) < kSingularFraction * scale) {
      throw numerical_error("ginue_orth_pivots: zero pivot at degree " +
                            std::to_string(a));
    }
    left.push_back(std::move(l));
    right.push_back(std::move(r));
    pivots.push_back(d);
  }
  return pivots;
}

EnsembleAverage average_ginue_orth(int n, const PsiSpec& psi,
                                   const QuadratureConfig& cfg) {
  const std::vector<double> pivots = ginue_orth_pivots(n, psi, cfg);
  LogScalar num{0.0, 1.0};
  for (double d : pivots) {
    num.log_abs += std::log(std::abs(d));
    if (d < 0.0) num.sign = -num.sign;
  }
  const double value = num.ratio_to(ginue_gram_normalizer(n));
  return finish(value, Method::ginue_orth, n, psi, cfg);
}

}  // namespace ginavg::averages
