#pragma once

namespace geonorm::special {

// Error function.  Thin wrapper so every caller in this library shares one
// definition and its domain checks.
double erf(double x);

// Standard normal CDF, accurate in both tails (built on erfc).
double norm_cdf(double x);

// Inverse of norm_cdf on (0, 1); absolute accuracy better than 1e-9.
// Throws DomainError for p outside (0, 1).
double norm_cdf_inv(double p);

// Real part of erf(x + i*y).  Throws AccuracyLoss where the value is not
// representable to the advertised 1e-10 relative accuracy in double
// precision (y*y - x*x > ~705, or arguments so large the oscillatory
// factors cannot be evaluated reliably).
double re_erf_complex(double x, double y);

// exp(-y*y) * Re(erf(x + i*y)).  The damping factor keeps every term of
// the underlying series bounded, so this never overflows; it is the
// preferred entry point when the caller's formula carries its own
// exp(-y*y) factor.
double re_erf_complex_damped(double x, double y);

// Modified Bessel function of the first kind, order 0 or 1, kappa >= 0.
double bessel_i(int order, double kappa);

// exp(-kappa) * I_order(kappa); safe for large kappa where bessel_i
// overflows.  Order 0 or 1, kappa >= 0.
double bessel_i_scaled(int order, double kappa);

} // namespace geonorm::special
