#pragma once

#include <cstddef>
#include <vector>

#include "geonorm/angle.hpp"
#include "geonorm/rng.hpp"

namespace geonorm {

// Parameters of the circular distribution with density proportional to
// exp(-gamma/2 * d(mu, theta)^2), d being arc-length distance.
struct GnParams {
    Angle mu;
    double gamma; // concentration, > 0

    GnParams(Angle mean_direction, double concentration);
};

// p-th trigonometric moment E[exp(i p theta)] in rectangular and polar form.
struct TrigMoment {
    int p = 0;
    double re = 0.0;
    double im = 0.0;
    double resultant_length = 0.0; // |E[exp(i p theta)]|
    Angle direction;               // arg, meaningful when length > 0
};

// Normalization constant k(gamma) = integral of exp(-gamma/2 * d^2) over
// the circle, and its logarithm (preferred for likelihoods).
double norm_const(double gamma);
double log_norm_const(double gamma);

double pdf(Angle theta, const GnParams& params);
double log_pdf(Angle theta, const GnParams& params);

// CDF of the signed displacement from the mean, on [-pi, pi].
double displacement_cdf(double t, const GnParams& params);

// Exact p-th trigonometric moment, p >= 1.  Orders above 8 are refused
// (AccuracyLoss): the series backing the moment is validated only there.
TrigMoment trig_moment(int p, const GnParams& params);

// 1 - |first trigonometric moment|; in [0, 1).
double extrinsic_variance(const GnParams& params);

// Expected squared arc distance from the mean, V(gamma); strictly
// decreasing in gamma with range (0, pi^2/3).
double intrinsic_variance(double gamma);

// Expected squared arc distance from the point at signed offset `delta`
// from the mean, |delta| < pi.  Equals intrinsic_variance at delta = 0 and
// is even in delta.
double off_center_sq_distance(double delta, double gamma);

// Draw n points by inverse-CDF sampling of the displacement; consumes
// exactly one uniform per point.
std::vector<Angle> sample(std::size_t n, const GnParams& params, RngStream& rng);

namespace detail {

// Shared factor t(gamma) = 1 - 2*pi*exp(-gamma*pi^2/2)/k(gamma); it ties
// intrinsic_variance (t/gamma) to the score variance (gamma*t), keeping
// the two floating-point consistent.
double intrinsic_variance_factor(double gamma);

// E[d^4] about the mean; used for the curvature of the log-likelihood in
// the concentration parameter.
double fourth_displacement_moment(double gamma);

} // namespace detail

} // namespace geonorm
