#pragma once

namespace ginavg::special {

// Error function and complements, accurate to ~1e-16 relative over the
// double range.  erfcx(x) = exp(x^2) erfc(x) stays representable far past
// the point where erfc itself underflows, which is what the weight
// evaluations rely on.
double erf(double x);
double erfc(double x);
double erfcx(double x);

}  // namespace ginavg::special
