#pragma once

#include <vector>

#include "ginavg/quadrature.hpp"
#include "ginavg/weights.hpp"

namespace ginavg::inner {

using quadrature::QuadratureConfig;
using weights::MonicPolynomial;
using weights::PsiSpec;

// est_error is the shift observed when the node count is halved; identical
// arguments give value == est_error == 0 exactly.
struct InnerProductValue {
  double value;
  double est_error;
};

// <P,Q>_R: the sgn-kernel double integral, reduced to single integrals via
// the cumulative functional and explicitly antisymmetrized so that
// <P,P> = 0 and <Q,P> = -<P,Q> hold in floating point, not just in theory.
InnerProductValue skew_real(const MonicPolynomial& p, const MonicPolynomial& q,
                            const PsiSpec& psi, const QuadratureConfig& cfg);

// <P,Q>_C restricted to the upper half plane:
//   4 int_{y>0} Im(P(conj b) Q(b)) exp(-x^2-y^2) erfcx(sqrt2 y) |psi(b)|^2.
InnerProductValue skew_complex(const MonicPolynomial& p,
                               const MonicPolynomial& q, const PsiSpec& psi,
                               const QuadratureConfig& cfg);

// <P,Q> = <P,Q>_R + <P,Q>_C.
InnerProductValue skew_sum(const MonicPolynomial& p, const MonicPolynomial& q,
                           const PsiSpec& psi, const QuadratureConfig& cfg);

// int phi(alpha) P(alpha) d alpha; the sgn(k-j) factor of the bordered
// matrix column is applied by the matrix builder, not here.
double one_sided_moment(const MonicPolynomial& p, const PsiSpec& psi,
                        const QuadratureConfig& cfg);

// <P|Q> = int exp(-|g|^2/2) psi(g) conj(P(g)) Q(g) over the plane; real for
// conjugate-symmetric arguments (the only ones accepted).  Uses a square
// box of half-width real_cutoff because exp(-|g|^2/2) decays slower than
// the erfcx-stabilized pair weight.
double ginue_inner(const MonicPolynomial& p, const MonicPolynomial& q,
                   const PsiSpec& psi, const QuadratureConfig& cfg);

// Test oracles computing the definitions head-on.
// Iterated double quadrature, inner integral split at the sign change.
double skew_real_reference(const MonicPolynomial& p, const MonicPolynomial& q,
                           const PsiSpec& psi, const QuadratureConfig& cfg);
// Full-plane -2i definition with two separate phi evaluations per point.
double skew_complex_reference(const MonicPolynomial& p,
                              const MonicPolynomial& q, const PsiSpec& psi,
                              const QuadratureConfig& cfg);

// Monomial moment tables: every matrix entry is a bilinear contraction of
// these, so a size-n build costs O(n^2) integrals once instead of per pair.
class GinoeMomentTable {
 public:
  static GinoeMomentTable build(int n, const PsiSpec& psi,
                                const QuadratureConfig& cfg);

  int size() const { return n_; }
  double skew_r(int a, int b) const { return r_[idx(a, b)]; }
  double skew_c(int a, int b) const { return c_[idx(a, b)]; }
  double skew(int a, int b) const { return r_[idx(a, b)] + c_[idx(a, b)]; }
  double moment(int a) const { return m_.at(a); }

  double form(const MonicPolynomial& p, const MonicPolynomial& q) const;
  double moment_of(const MonicPolynomial& p) const;

 private:
  GinoeMomentTable(int n) : n_(n) {}
  size_t idx(int a, int b) const;
  int n_;
  std::vector<double> r_, c_, m_;
};

class GinueMomentTable {
 public:
  static GinueMomentTable build(int n, const PsiSpec& psi,
                                const QuadratureConfig& cfg);

  int size() const { return n_; }
  double gram(int a, int b) const;
  double form(const MonicPolynomial& p, const MonicPolynomial& q) const;

 private:
  GinueMomentTable(int n) : n_(n) {}
  int n_;
  std::vector<double> g_;
};

}  // namespace ginavg::inner
