#pragma once

#include <string>
#include <vector>

#include "ginavg/antisym.hpp"
#include "ginavg/inner.hpp"
#include "ginavg/quadrature.hpp"
#include "ginavg/weights.hpp"

namespace ginavg::averages {

using quadrature::QuadratureConfig;
using weights::CompleteFamily;
using weights::MonicPolynomial;
using weights::PsiSpec;

// Signed log-magnitude scalar; both Pf U and the normalizing constants grow
// super-exponentially, so ratios are always formed in log space.
struct LogScalar {
  double log_abs = 0.0;  // ignored when sign == 0
  double sign = 1.0;     // -1, 0, +1

  double value() const;
  double ratio_to(const LogScalar& denom) const;  // this / denom as a double
};

// C_N = 2^{N(N+1)/4} prod_{k=1}^N Gamma(k/2): C_1 = sqrt(2 pi), C_4 = 16 pi.
LogScalar constant_c(int n);
// D_N = (2 pi)^N prod_{k=1}^N k!.
LogScalar constant_d(int n);
// prod_{a=0}^{n-1} <g^a|g^a>_{psi=1} = prod_a 2 pi 2^a a!: the det of the
// monomial Gram matrix at psi = 1, i.e. the empirical normalization of the
// plane ensemble.  Coincides with constant_d for n <= 2 only.
LogScalar ginue_gram_normalizer(int n);

enum class Method {
  pfaffian,
  skew_orth,
  parity_det,
  ginue_det,
  ginue_orth,
  monte_carlo,
};
std::string method_name(Method m);

struct EnsembleAverage {
  double value;
  Method method;
  int n;
  PsiSpec psi;
  // For deterministic routes: |value| n^2 target_rel_tol, one rounding unit
  // per matrix entry amplified through the contraction (heuristic).
  double est_error;
};

// 2J x 2J, J = (n+1)/2: entries <P_j,P_k>_R + <P_j,P_k>_C for j,k <= n, and
// for odd n a final column of one-sided moments sgn(k-j) int phi P_min.
antisym::AntisymmetricMatrix<double> build_u_matrix(
    const CompleteFamily& family, const PsiSpec& psi,
    const QuadratureConfig& cfg);

// <Psi> = Pf(U_P) / C_n over the real ensemble; family-independent.
EnsembleAverage average_ginoe(int n, const PsiSpec& psi,
                              const CompleteFamily& family,
                              const QuadratureConfig& cfg);
EnsembleAverage average_ginoe(int n, const PsiSpec& psi,
                              const QuadratureConfig& cfg);

// Monic Q_1..Q_n (n even) with <Q_{2j-1},Q_{2k}> = delta_{jk} M_j and all
// other pairings zero; normalizations holds M_1..M_{n/2}.
struct SkewOrthFamily {
  CompleteFamily polys;
  std::vector<double> normalizations;
};

// Pairwise projection against earlier pairs; the free Q_{2j-1} component of
// Q_{2j} is zero by construction (corrections have lower degree), which is
// the canonical representative.  |M_j| below 1e-10 of the moment scale is a
// numerical_error: no pivoting may cross degrees.
SkewOrthFamily skew_orthogonalize(int n, const PsiSpec& psi,
                                  const QuadratureConfig& cfg);

// <Psi> = prod_j M_j / C_n, n even.
EnsembleAverage average_ginoe_skew(int n, const PsiSpec& psi,
                                   const QuadratureConfig& cfg);

// <Psi> = det(A) / C_n with A[j,k] = U[2j-1, 2k] (J x J) over the parity
// monomials; requires even psi.
EnsembleAverage average_ginoe_parity(int n, const PsiSpec& psi,
                                     const QuadratureConfig& cfg);

// {Psi} = det(W_P) / det(W_1) over the plane ensemble, W[j,k] = <P_j|P_k>.
// The denominator is ginue_gram_normalizer, which reproduces {1} = 1.
EnsembleAverage average_ginue(int n, const PsiSpec& psi,
                              const CompleteFamily& family,
                              const QuadratureConfig& cfg);
EnsembleAverage average_ginue(int n, const PsiSpec& psi,
                              const QuadratureConfig& cfg);

// Diagonal pivots d_a = <L_a|Q_a> of the two-sided Gram process on the
// monomials; prod_a d_a = det W.  For weights that are real on the plane
// the form is symmetric and L_a == Q_a, the textbook orthogonal family.
std::vector<double> ginue_orth_pivots(int n, const PsiSpec& psi,
                                      const QuadratureConfig& cfg);

// {Psi} = prod_a d_a / det(W_1).
EnsembleAverage average_ginue_orth(int n, const PsiSpec& psi,
                                   const QuadratureConfig& cfg);

}  // namespace ginavg::averages
