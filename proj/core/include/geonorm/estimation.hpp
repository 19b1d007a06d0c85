#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "geonorm/angle.hpp"

namespace geonorm {

// Descriptive statistics of an angular sample.
struct CircularSummary {
    std::size_t n = 0;
    std::vector<Angle> intrinsic_mean_set; // all minimizers, ascending
    double intrinsic_variance = 0.0;       // mean squared arc distance to the set
    std::optional<Angle> extrinsic_mean;   // absent when the resultant vanishes
    double resultant_length = 0.0;         // |mean of unit vectors|, in [0, 1]
    double extrinsic_variance = 0.0;       // 1 - resultant_length
};

// Maximum-likelihood estimate with the asymptotic information quantities.
struct MleFit {
    Angle mu_hat;
    double gamma_hat = 0.0;
    double log_likelihood = 0.0;
    double fisher_j1 = 0.0; // information per observation for the location
    double fisher_j2 = 0.0; // information per observation for the concentration
    double se_mu = 0.0;     // 1 / sqrt(n * J1)
    double se_gamma = 0.0;  // 1 / sqrt(n * J2)
    std::size_t n = 0;
    std::size_t mean_set_multiplicity = 1; // minimizers found; 1 = unique
    bool near_identifiability_boundary = false;
};

// Two-sided asymptotic confidence intervals derived from an MleFit.  The
// location endpoints are mapped back onto the circle; the concentration
// interval is clipped below at 0.
struct ConfidenceIntervals {
    double level = 0.0;
    Angle mu_lower;
    Angle mu_upper;
    double gamma_lower = 0.0;
    double gamma_upper = 0.0;
};

// All minimizers of F(m) = sum of squared arc distances, in ascending
// order.  Exact combinatorial search over the n circular cut points, so no
// grid resolution is involved.  Throws EmptySample.
std::vector<Angle> intrinsic_sample_mean(std::span<const Angle> sample);

CircularSummary circular_summary(std::span<const Angle> sample);

// Fit by maximum likelihood: location = intrinsic sample mean (first
// element on ties), concentration = the unique gamma whose intrinsic
// variance matches the sample's.  Throws EmptySample, DegenerateSample
// (dispersion 0), GammaNotIdentifiable (dispersion at or above pi^2/3).
MleFit fit_gn_mle(std::span<const Angle> sample);

struct FisherInfo {
    double j1 = 0.0;
    double j2 = 0.0;
};

// Per-observation Fisher information of the two parameters.
FisherInfo fisher_info(double gamma);

// level in (0, 1), e.g. 0.95.
ConfidenceIntervals asymptotic_ci(const MleFit& fit, double level);

} // namespace geonorm
