#include "geonorm/von_mises.hpp"

#include <cmath>
#include <string>

#include "geonorm/errors.hpp"
#include "geonorm/quadrature.hpp"
#include "geonorm/special.hpp"

namespace geonorm {

namespace {

void check_kappa(double kappa) {
    if (!std::isfinite(kappa) || kappa < 0.0) {
        throw DomainError("concentration kappa must be finite and >= 0, got " +
                          std::to_string(kappa));
    }
}

// I1(kappa)/I0(kappa): the mean resultant length.  Strictly increasing
// from 0 (kappa = 0) toward 1.
double mean_resultant(double kappa) {
    return special::bessel_i_scaled(1, kappa) / special::bessel_i_scaled(0, kappa);
}

} // namespace

VmParams::VmParams(Angle mean_direction, double concentration)
    : mu(mean_direction), kappa(concentration) {
    check_kappa(kappa);
}

double vm_pdf(Angle theta, const VmParams& params) {
    // exp(kappa * (cos(d) - 1)) / (2*pi*exp(-kappa)*I0(kappa)): both factors
    // stay in range for any kappa, unlike exp(kappa*cos(d)) / I0(kappa).
    const double c = std::cos(signed_displacement(params.mu, theta));
    return std::exp(params.kappa * (c - 1.0)) /
           (two_pi * special::bessel_i_scaled(0, params.kappa));
}

double vm_extrinsic_variance(double kappa) {
    check_kappa(kappa);
    return 1.0 - mean_resultant(kappa);
}

double vm_intrinsic_variance(double kappa) {
    check_kappa(kappa);
    const double i0_scaled = special::bessel_i_scaled(0, kappa);
    auto f = [kappa](double a) {
        return a * a * std::exp(kappa * (std::cos(a) - 1.0));
    };
    Quadrature q;
    q.abs_tol = 1e-14;
    q.rel_tol = 1e-12;
    // At large kappa the integrand is a narrow ridge near zero that a single
    // panel over [-pi, pi] can step over entirely; integrate the core and the
    // (negligible) tails separately so the first panel always straddles it.
    const double w = std::min(pi, 12.0 / std::sqrt(std::max(kappa, 1.0)));
    double total = integrate(f, -w, w, q);
    if (w < pi) {
        total += integrate(f, -pi, -w, q) + integrate(f, w, pi, q);
    }
    return total / (two_pi * i0_scaled);
}

VmParams vm_fit_moments(std::span<const Angle> sample) {
    if (sample.empty()) {
        throw EmptySample("von Mises fit requires at least one observation");
    }
    const double n = static_cast<double>(sample.size());
    double c = 0.0;
    double s = 0.0;
    for (const Angle a : sample) {
        c += std::cos(a.radians());
        s += std::sin(a.radians());
    }
    const double rho = std::hypot(c, s) / n;

    if (rho < 1e-14) {
        throw DirectionUndefined(
            "sample resultant is numerically zero; no mean direction");
    }
    if (rho >= 1.0 - 1e-12) {
        throw DegenerateSample(
            "sample resultant length ~ 1; kappa is unbounded");
    }

    const Angle mu = canonicalize(std::atan2(s, c));

    // Bracket the concentration: 2*rho/(1 - rho^2) overshoots the root for
    // every rho in (0, 1), but expand defensively before bisecting.
    double lo = 0.0;
    double hi = 2.0 * rho / (1.0 - rho * rho) + 10.0;
    for (int i = 0; i < 200 && mean_resultant(hi) < rho; ++i) hi *= 2.0;

    double kappa = 0.5 * (lo + hi);
    for (int i = 0; i < 200; ++i) {
        kappa = 0.5 * (lo + hi);
        const double r = mean_resultant(kappa);
        if (std::abs(r - rho) <= 1e-12) break;
        if (r < rho) lo = kappa;
        else hi = kappa;
        if (hi - lo <= 1e-15 * (1.0 + kappa)) break;
    }
    return {mu, kappa};
}

} // namespace geonorm
