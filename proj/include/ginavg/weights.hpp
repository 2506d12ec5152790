#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "ginavg/errors.hpp"

namespace ginavg::weights {

using cd = std::complex<double>;

// Monic polynomial: coefficients for powers 0..degree-1, leading
// coefficient exactly 1 and never stored.
class MonicPolynomial {
 public:
  MonicPolynomial() = default;  // the constant 1
  explicit MonicPolynomial(std::vector<cd> lower_coeffs)
      : coeffs_(std::move(lower_coeffs)) {}

  static MonicPolynomial monomial(int degree);

  int degree() const { return static_cast<int>(coeffs_.size()); }
  // coeff(degree) == 1; below that, the stored coefficients.
  cd coeff(int k) const;

  cd eval(cd gamma) const;
  // Real-line evaluation dropping imaginary parts of the coefficients;
  // callers guarantee conjugate symmetry first.
  double eval_real(double alpha) const;

  bool is_conjugate_symmetric(double tol = 0.0) const;

 private:
  std::vector<cd> coeffs_;
};

// P_1..P_N with deg P_n = n-1, stored 0-based (polys[i] has degree i).
class CompleteFamily {
 public:
  explicit CompleteFamily(std::vector<MonicPolynomial> polys);

  static CompleteFamily monomials(int n);
  // Random real lower coefficients, uniform in [-coeff_range, coeff_range].
  static CompleteFamily random(int n, std::uint64_t seed,
                               double coeff_range = 2.0);

  int size() const { return static_cast<int>(polys_.size()); }
  const MonicPolynomial& poly(int i) const { return polys_[i]; }
  const std::vector<MonicPolynomial>& polys() const { return polys_; }

 private:
  std::vector<MonicPolynomial> polys_;
};

enum class Parity { even, odd, none };

// Closed enumeration of class-function seeds.  All kinds are conjugate
// symmetric by construction; modulus_squared is the only one that is not a
// polynomial in gamma and is accepted only by the complex-ensemble routes.
class PsiSpec {
 public:
  static PsiSpec one();
  static PsiSpec monomial(int power);
  static PsiSpec shift(double z);  // psi(gamma) = z - gamma
  static PsiSpec poly(std::vector<double> coeffs);
  static PsiSpec modulus_squared();

  // Textual forms: one | pow:n | shift:z | poly:c0,c1,... | modsq
  static PsiSpec parse(const std::string& text);
  std::string str() const;

  cd eval(cd gamma) const;
  double eval_real(double alpha) const;

  Parity parity() const;
  bool polynomial_type() const { return kind_ != Kind::modulus_squared; }
  // Polynomial growth degree (modulus_squared grows like |gamma|^2).
  int growth_degree() const;

  bool operator==(const PsiSpec&) const = default;

 private:
  enum class Kind { one, monomial, shift, poly, modulus_squared };
  PsiSpec(Kind k, int power, double z, std::vector<double> coeffs)
      : kind_(k), power_(power), shift_(z), coeffs_(std::move(coeffs)) {}

  Kind kind_ = Kind::one;
  int power_ = 0;
  double shift_ = 0.0;
  std::vector<double> coeffs_;
};

// Weight phi(gamma) = exp(-gamma^2/2) sqrt(erfc(sqrt(2)|Im gamma|)) psi(gamma).
class WeightPhi {
 public:
  explicit WeightPhi(PsiSpec psi) : psi_(std::move(psi)) {}

  const PsiSpec& psi() const { return psi_; }

  // Stable path: exp(-(x^2+y^2)/2) e^{-ixy} sqrt(erfcx(sqrt(2)|y|)) psi.
  cd eval(cd gamma) const;
  // Textbook form; overflows for moderate |Im gamma|, kept as a test oracle.
  cd eval_naive(cd gamma) const;
  // phi(beta) phi(conj beta) = exp(-x^2-y^2) erfcx(sqrt(2)|y|) |psi(beta)|^2.
  double pair_product(cd beta) const;
  // On the real line phi(alpha) = exp(-alpha^2/2) psi(alpha).
  double real_line(double alpha) const;

 private:
  PsiSpec psi_;
};

// Vandermonde product prod_{m<n} (gamma_n - gamma_m).
cd vandermonde_delta(const std::vector<cd>& gamma);
// Same value as the determinant of the monomial moment matrix (LU route).
cd vandermonde_det_monomial(const std::vector<cd>& gamma);
// det of the matrix with entries P_k(gamma_j); equals the Vandermonde
// determinant for any complete monic family.
cd family_det(const CompleteFamily& family, const std::vector<cd>& gamma);

// Interleaved ordering (conj b_1, b_1, ..., conj b_M, b_M, a_1, ..., a_L).
// Every beta must have nonzero imaginary part.
std::vector<cd> ordered_spectrum(const std::vector<double>& alpha,
                                 const std::vector<cd>& beta);

// Both sides of the absolute-Vandermonde factorization: the direct value
// |Delta| and the minor-expansion sum over column selections
//   sum_t sgn(t) { det W^beta_{i,t} (-i)^M prod sgn Im b_m }
//               { det W^alpha_{i',t'} prod_{j<k} sgn(a_k - a_j) }.
// The expansion is real up to roundoff; callers assert agreement.
struct DeltaFactorization {
  double direct;
  cd expansion;
};
DeltaFactorization abs_delta_factorization_check(const std::vector<double>& alpha,
                                                 const std::vector<cd>& beta,
                                                 const CompleteFamily& family);

}  // namespace ginavg::weights
