#include "ginavg/weights.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <sstream>

#include "ginavg/combinat.hpp"
#include "ginavg/special.hpp"

namespace ginavg::weights {

namespace {

double sgn(double x) { return (x > 0.0) ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    size_t used = 0;
    double v;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("psi: bad number '" + item + "'");
    }
    if (used != item.size())
      throw std::invalid_argument("psi: bad number '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("psi: empty coefficient list");
  return out;
}

std::string format_real(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

MonicPolynomial MonicPolynomial::monomial(int degree) {
  if (degree < 0) throw std::invalid_argument("monomial: negative degree");
  return MonicPolynomial(std::vector<cd>(degree, cd(0.0)));
}

cd MonicPolynomial::coeff(int k) const {
  if (k < 0 || k > degree())
    throw std::invalid_argument("coeff: power out of range");
  if (k == degree()) return cd(1.0);
  return coeffs_[k];
}

cd MonicPolynomial::eval(cd gamma) const {
  cd acc(1.0);
  for (int k = degree() - 1; k >= 0; --k) acc = acc * gamma + coeffs_[k];
  return acc;
}

double MonicPolynomial::eval_real(double alpha) const {
  double acc = 1.0;
  for (int k = degree() - 1; k >= 0; --k) acc = acc * alpha + coeffs_[k].real();
  return acc;
}

bool MonicPolynomial::is_conjugate_symmetric(double tol) const {
  for (const cd& c : coeffs_)
    if (std::abs(c.imag()) > tol) return false;
  return true;
}

CompleteFamily::CompleteFamily(std::vector<MonicPolynomial> polys)
    : polys_(std::move(polys)) {
  for (int i = 0; i < size(); ++i)
    if (polys_[i].degree() != i)
      throw std::invalid_argument(
          "CompleteFamily: polys[i] must have degree i (deg P_n = n-1)");
}

CompleteFamily CompleteFamily::monomials(int n) {
  std::vector<MonicPolynomial> polys;
  polys.reserve(n);
  for (int i = 0; i < n; ++i) polys.push_back(MonicPolynomial::monomial(i));
  return CompleteFamily(std::move(polys));
}

CompleteFamily CompleteFamily::random(int n, std::uint64_t seed,
                                      double coeff_range) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-coeff_range, coeff_range);
  std::vector<MonicPolynomial> polys;
  polys.reserve(n);
  for (int i = 0; i < n; ++i) {
    std::vector<cd> lower(i);
    for (cd& c : lower) c = cd(u(rng), 0.0);
    polys.push_back(MonicPolynomial(std::move(lower)));
  }
  return CompleteFamily(std::move(polys));
}

PsiSpec PsiSpec::one() { return PsiSpec(Kind::one, 0, 0.0, {}); }

PsiSpec PsiSpec::monomial(int power) {
  if (power < 0) throw std::invalid_argument("psi pow: negative power");
  return PsiSpec(Kind::monomial, power, 0.0, {});
}

PsiSpec PsiSpec::shift(double z) { return PsiSpec(Kind::shift, 0, z, {}); }

PsiSpec PsiSpec::poly(std::vector<double> coeffs) {
  if (coeffs.empty()) throw std::invalid_argument("psi poly: empty coefficients");
  return PsiSpec(Kind::poly, 0, 0.0, std::move(coeffs));
}

PsiSpec PsiSpec::modulus_squared() {
  return PsiSpec(Kind::modulus_squared, 0, 0.0, {});
}

PsiSpec PsiSpec::parse(const std::string& text) {
  if (text == "one") return one();
  if (text == "modsq") return modulus_squared();
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  if (head == "pow") {
    if (colon == std::string::npos)
      throw std::invalid_argument("psi: pow needs a power, e.g. pow:2");
    const std::string arg = text.substr(colon + 1);
    size_t used = 0;
    int n;
    try {
      n = std::stoi(arg, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("psi: bad power '" + arg + "'");
    }
    if (used != arg.size() || n < 0)
      throw std::invalid_argument("psi: bad power '" + arg + "'");
    return monomial(n);
  }
  if (head == "shift") {
    if (colon == std::string::npos)
      throw std::invalid_argument("psi: shift needs a value, e.g. shift:1.5");
    const auto vals = parse_real_list(text.substr(colon + 1));
    if (vals.size() != 1)
      throw std::invalid_argument("psi: shift takes one real value");
    return shift(vals[0]);
  }
  if (head == "poly") {
    if (colon == std::string::npos)
      throw std::invalid_argument("psi: poly needs coefficients, e.g. poly:1,0,2");
    return poly(parse_real_list(text.substr(colon + 1)));
  }
  throw std::invalid_argument("psi: unknown kind '" + text + "'");
}

std::string PsiSpec::str() const {
  switch (kind_) {
    case Kind::one:
      return "one";
    case Kind::monomial:
      return "pow:" + std::to_string(power_);
    case Kind::shift:
      return "shift:" + format_real(shift_);
    case Kind::poly: {
      std::string s = "poly:";
      for (size_t i = 0; i < coeffs_.size(); ++i) {
        if (i) s += ",";
        s += format_real(coeffs_[i]);
      }
      return s;
    }
    case Kind::modulus_squared:
      return "modsq";
  }
  return "one";
}

cd PsiSpec::eval(cd gamma) const {
  switch (kind_) {
    case Kind::one:
      return cd(1.0);
    case Kind::monomial: {
      cd acc(1.0);
      for (int i = 0; i < power_; ++i) acc *= gamma;
      return acc;
    }
    case Kind::shift:
      return cd(shift_) - gamma;
    case Kind::poly: {
      cd acc(0.0);
      for (size_t k = coeffs_.size(); k-- > 0;) acc = acc * gamma + coeffs_[k];
      return acc;
    }
    case Kind::modulus_squared:
      return cd(std::norm(gamma));
  }
  return cd(1.0);
}

double PsiSpec::eval_real(double alpha) const {
  switch (kind_) {
    case Kind::one:
      return 1.0;
    case Kind::monomial: {
      double acc = 1.0;
      for (int i = 0; i < power_; ++i) acc *= alpha;
      return acc;
    }
    case Kind::shift:
      return shift_ - alpha;
    case Kind::poly: {
      double acc = 0.0;
      for (size_t k = coeffs_.size(); k-- > 0;) acc = acc * alpha + coeffs_[k];
      return acc;
    }
    case Kind::modulus_squared:
      return alpha * alpha;
  }
  return 1.0;
}

Parity PsiSpec::parity() const {
  switch (kind_) {
    case Kind::one:
      return Parity::even;
    case Kind::monomial:
      return (power_ % 2 == 0) ? Parity::even : Parity::odd;
    case Kind::shift:
      return (shift_ == 0.0) ? Parity::odd : Parity::none;
    case Kind::poly: {
      bool has_even = false, has_odd = false;
      for (size_t k = 0; k < coeffs_.size(); ++k) {
        if (coeffs_[k] == 0.0) continue;
        (k % 2 == 0 ? has_even : has_odd) = true;
      }
      if (!has_odd) return Parity::even;  // includes the zero polynomial
      if (!has_even) return Parity::odd;
      return Parity::none;
    }
    case Kind::modulus_squared:
      return Parity::even;
  }
  return Parity::none;
}

int PsiSpec::growth_degree() const {
  switch (kind_) {
    case Kind::one:
      return 0;
    case Kind::monomial:
      return power_;
    case Kind::shift:
      return 1;
    case Kind::poly:
      return static_cast<int>(coeffs_.size()) - 1;
    case Kind::modulus_squared:
      return 2;
  }
  return 0;
}

cd WeightPhi::eval(cd gamma) const {
  const double x = gamma.real();
  const double y = gamma.imag();
  const double gauss = std::exp(-(x * x + y * y) / 2.0);
  const double root = std::sqrt(special::erfcx(std::sqrt(2.0) * std::abs(y)));
  const cd phase = std::exp(cd(0.0, -x * y));
  return gauss * root * phase * psi_.eval(gamma);
}

cd WeightPhi::eval_naive(cd gamma) const {
  const double y = std::abs(gamma.imag());
  return std::exp(-gamma * gamma / 2.0) *
         std::sqrt(special::erfc(std::sqrt(2.0) * y)) * psi_.eval(gamma);
}

double WeightPhi::pair_product(cd beta) const {
  const double x = beta.real();
  const double y = beta.imag();
  return std::exp(-x * x - y * y) *
         special::erfcx(std::sqrt(2.0) * std::abs(y)) *
         std::norm(psi_.eval(beta));
}

double WeightPhi::real_line(double alpha) const {
  return std::exp(-alpha * alpha / 2.0) * psi_.eval_real(alpha);
}

cd vandermonde_delta(const std::vector<cd>& gamma) {
  const int n = static_cast<int>(gamma.size());
  cd prod(1.0);
  for (int m = 0; m < n; ++m)
    for (int k = m + 1; k < n; ++k) prod *= gamma[k] - gamma[m];
  return prod;
}

cd vandermonde_det_monomial(const std::vector<cd>& gamma) {
  const int n = static_cast<int>(gamma.size());
  if (n == 0) return cd(1.0);
  Eigen::MatrixXcd v(n, n);
  for (int col = 0; col < n; ++col) {
    cd p(1.0);
    for (int row = 0; row < n; ++row) {
      v(row, col) = p;
      p *= gamma[col];
    }
  }
  return v.determinant();
}

cd family_det(const CompleteFamily& family, const std::vector<cd>& gamma) {
  const int n = static_cast<int>(gamma.size());
  if (family.size() != n)
    throw std::invalid_argument("family_det: family size must match gamma");
  if (n == 0) return cd(1.0);
  Eigen::MatrixXcd w(n, n);
  for (int row = 0; row < n; ++row)
    for (int col = 0; col < n; ++col)
      w(row, col) = family.poly(col).eval(gamma[row]);
  return w.determinant();
}

std::vector<cd> ordered_spectrum(const std::vector<double>& alpha,
                                 const std::vector<cd>& beta) {
  std::vector<cd> gamma;
  gamma.reserve(alpha.size() + 2 * beta.size());
  for (const cd& b : beta) {
    if (b.imag() == 0.0)
      throw std::invalid_argument(
          "ordered_spectrum: beta entry is real (classification error)");
    gamma.push_back(std::conj(b));
    gamma.push_back(b);
  }
  for (double a : alpha) gamma.push_back(cd(a));
  return gamma;
}

DeltaFactorization abs_delta_factorization_check(
    const std::vector<double>& alpha, const std::vector<cd>& beta,
    const CompleteFamily& family) {
  const int l = static_cast<int>(alpha.size());
  const int m = static_cast<int>(beta.size());
  const int n = l + 2 * m;
  if (family.size() != n)
    throw std::invalid_argument(
        "abs_delta_factorization_check: family size must be L + 2M");
  const std::vector<cd> gamma = ordered_spectrum(alpha, beta);

  const double direct = std::abs(vandermonde_delta(gamma));

  // W[j,k] = P_k(gamma_j), rows split into the 2M pair rows and L real rows.
  Eigen::MatrixXcd w(n, n);
  for (int row = 0; row < n; ++row)
    for (int col = 0; col < n; ++col)
      w(row, col) = family.poly(col).eval(gamma[row]);

  cd pair_unit(1.0);
  for (int i = 0; i < m; ++i) pair_unit *= cd(0.0, -1.0);  // (-i)^M
  for (const cd& b : beta) pair_unit *= sgn(b.imag());

  double alpha_sign = 1.0;
  for (int j = 0; j < l; ++j)
    for (int k = j + 1; k < l; ++k) alpha_sign *= sgn(alpha[k] - alpha[j]);

  auto det_minor = [&](const std::vector<int>& rows,
                       const std::vector<int>& cols) -> cd {
    const int d = static_cast<int>(rows.size());
    if (d == 0) return cd(1.0);
    Eigen::MatrixXcd sub(d, d);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c)
        sub(r, c) = w(combinat::idx0(rows[r]), combinat::idx0(cols[c]));
    return sub.determinant();
  };

  std::vector<int> pair_rows(2 * m), real_rows(l);
  for (int i = 0; i < 2 * m; ++i) pair_rows[i] = i + 1;
  for (int i = 0; i < l; ++i) real_rows[i] = 2 * m + i + 1;

  cd expansion(0.0);
  combinat::for_each_increasing(2 * m, n, [&](const combinat::IncreasingMap& t) {
    const cd beta_part = det_minor(pair_rows, t.image()) * pair_unit;
    const cd alpha_part =
        det_minor(real_rows, t.complement().image()) * alpha_sign;
    expansion += double(t.sign()) * beta_part * alpha_part;
  });

  return {direct, expansion};
}

}  // namespace ginavg::weights
