#pragma once

// Standard normal helpers.

namespace wigner_align {

// phi(x).
double normal_pdf(double x);
// Upper tail P(Z > x) = erfc(x / sqrt 2) / 2. Relative error stays near
// machine precision well into the tail (x up to ~37).
double normal_upper_tail(double x);
// x with P(Z > x) = p, for p in (0, 1). Rational initial guess refined by
// Halley steps on the upper tail, so tiny p keeps full relative accuracy.
double normal_upper_tail_inverse(double p);

}  // namespace wigner_align
