#pragma once

#include <span>

#include "geonorm/angle.hpp"

namespace geonorm {

// Parameters of the von Mises distribution with density proportional to
// exp(kappa * cos(theta - mu)).
struct VmParams {
    Angle mu;
    double kappa; // concentration, >= 0 (0 is the uniform distribution)

    VmParams(Angle mean_direction, double concentration);
};

double vm_pdf(Angle theta, const VmParams& params);

// 1 - I1(kappa)/I0(kappa); in [0, 1], decreasing in kappa.
double vm_extrinsic_variance(double kappa);

// Expected squared arc distance from the mean, by quadrature; overflow-safe
// for large kappa.
double vm_intrinsic_variance(double kappa);

// Moment estimator: mean direction from the sample resultant, kappa from
// inverting I1/I0 = resultant length.  Throws EmptySample, DirectionUndefined
// (no usable resultant), or DegenerateSample (resultant length ~ 1).
VmParams vm_fit_moments(std::span<const Angle> sample);

} // namespace geonorm
