#include "ginavg/special.hpp"

#include <cmath>

namespace ginavg::special {

namespace {

// Rational minimax coefficients for the three-regime scheme
// (|x| <= 0.46875, 0.46875 < |x| <= 4, |x| > 4).
constexpr double kA[5] = {3.16112374387056560e0, 1.13864154151050156e2,
                          3.77485237685302021e2, 3.20937758913846947e3,
                          1.85777706184603153e-1};
constexpr double kB[4] = {2.36012909523441209e1, 2.44024637934444173e2,
                          1.28261652607737228e3, 2.84423683343917062e3};
constexpr double kC[9] = {5.64188496988670089e-1, 8.88314979438837594e0,
                          6.61191906371416295e1,  2.98635138197400131e2,
                          8.81952221241769090e2,  1.71204761263407058e3,
                          2.05107837782607147e3,  1.23033935479799725e3,
                          2.15311535474403846e-8};
constexpr double kD[8] = {1.57449261107098347e1, 1.17693950891312499e2,
                          5.37181101862009858e2, 1.62138957456669019e3,
                          3.29079923573345963e3, 4.36261909014324716e3,
                          3.43936767414372164e3, 1.23033935480374942e3};
constexpr double kP[6] = {3.05326634961232344e-1, 3.60344899949804439e-1,
                          1.25781726111229246e-1, 1.60837851487422766e-2,
                          6.58749161529837803e-4, 1.63153871373020978e-2};
constexpr double kQ[5] = {2.56852019228982242e0,  1.87295284992346047e0,
                          5.27905102951428412e-1, 6.05183413124413191e-2,
                          2.33520497626869185e-3};

constexpr double kThresh = 0.46875;
constexpr double kInvSqrtPi = 5.6418958354775628695e-1;

// erf(y)/y is rational in y^2 on [0, kThresh].
double erf_small(double y) {
  double ysq = (y > 1.11e-16) ? y * y : 0.0;
  double xnum = kA[4] * ysq;
  double xden = ysq;
  for (int i = 0; i < 3; ++i) {
    xnum = (xnum + kA[i]) * ysq;
    xden = (xden + kB[i]) * ysq;
  }
  return y * (xnum + kA[3]) / (xden + kB[3]);
}

// erfcx(y) for kThresh < y <= 4.
double erfcx_mid(double y) {
  double xnum = kC[8] * y;
  double xden = y;
  for (int i = 0; i < 7; ++i) {
    xnum = (xnum + kC[i]) * y;
    xden = (xden + kD[i]) * y;
  }
  return (xnum + kC[7]) / (xden + kD[7]);
}

// erfcx(y) for y > 4.
double erfcx_tail(double y) {
  double ysq = 1.0 / (y * y);
  double xnum = kP[5] * ysq;
  double xden = ysq;
  for (int i = 0; i < 4; ++i) {
    xnum = (xnum + kP[i]) * ysq;
    xden = (xden + kQ[i]) * ysq;
  }
  double r = ysq * (xnum + kP[4]) / (xden + kQ[4]);
  return (kInvSqrtPi - r) / y;
}

// exp(-y^2) split so the argument of each exp carries < 1/2 ulp of y^2.
double exp_neg_sq(double y) {
  double ysq = std::trunc(y * 16.0) / 16.0;
  double del = (y - ysq) * (y + ysq);
  return std::exp(-ysq * ysq) * std::exp(-del);
}

}  // namespace

double erf(double x) {
  double y = std::abs(x);
  if (y <= kThresh) return x < 0 ? -erf_small(y) : erf_small(y);
  double c = erfc(y);
  return x < 0 ? c - 1.0 : 1.0 - c;
}

double erfc(double x) {
  double y = std::abs(x);
  double r;
  if (y <= kThresh) {
    r = 1.0 - erf_small(y);
  } else if (y <= 4.0) {
    r = exp_neg_sq(y) * erfcx_mid(y);
  } else {
    // exp_neg_sq underflows to 0 past y ~ 26.6, which is the true limit.
    r = exp_neg_sq(y) * erfcx_tail(y);
  }
  return x < 0 ? 2.0 - r : r;
}

double erfcx(double x) {
  if (x < 0.0) {
    // erfcx(-x) = 2 exp(x^2) - erfcx(x); overflows to +inf for x < -26.7.
    return 2.0 * std::exp(x * x) - erfcx(-x);
  }
  if (x <= kThresh) return std::exp(x * x) * (1.0 - erf_small(x));
  if (x <= 4.0) return erfcx_mid(x);
  if (x < 6.7e7) return erfcx_tail(x);
  return kInvSqrtPi / x;
}

}  // namespace ginavg::special
