#include "geonorm/geodesic_normal.hpp"

#include <cmath>
#include <string>

#include "geonorm/errors.hpp"
#include "geonorm/special.hpp"

namespace geonorm {

namespace {

constexpr double log_two_pi = 1.83787706640934548356;

void check_gamma(double gamma) {
    if (!std::isfinite(gamma) || gamma <= 0.0) {
        throw DomainError("concentration gamma must be finite and > 0, got " +
                          std::to_string(gamma));
    }
}

// 2*pi*exp(-gamma*pi^2/2) / k(gamma): the density at the antipode times the
// circumference.  Simplifies to sqrt(2*pi*gamma)*exp(-gamma*pi^2/2)/erf(...).
double tail_ratio(double gamma) {
    const double e = 0.5 * gamma * pi * pi;
    if (e > 745.0) return 0.0; // exp underflows; the ratio is below 1e-323
    return std::sqrt(two_pi * gamma) * std::exp(-e) /
           special::erf(pi * std::sqrt(0.5 * gamma));
}

} // namespace

GnParams::GnParams(Angle mean_direction, double concentration)
    : mu(mean_direction), gamma(concentration) {
    check_gamma(gamma);
}

double norm_const(double gamma) {
    check_gamma(gamma);
    return std::sqrt(two_pi / gamma) * special::erf(pi * std::sqrt(0.5 * gamma));
}

double log_norm_const(double gamma) {
    check_gamma(gamma);
    return 0.5 * (log_two_pi - std::log(gamma)) +
           std::log(special::erf(pi * std::sqrt(0.5 * gamma)));
}

double log_pdf(Angle theta, const GnParams& params) {
    const double d = geodesic_distance(theta, params.mu);
    return -0.5 * params.gamma * d * d - log_norm_const(params.gamma);
}

double pdf(Angle theta, const GnParams& params) {
    return std::exp(log_pdf(theta, params));
}

double displacement_cdf(double t, const GnParams& params) {
    if (!std::isfinite(t) || t < -pi || t > pi) {
        throw DomainError("displacement must lie in [-pi, pi]");
    }
    const double sg = std::sqrt(params.gamma);
    const double lo = special::norm_cdf(-pi * sg);
    const double span = special::norm_cdf(pi * sg) - lo;
    if (span <= 0.0) {
        // gamma so small the truncation window is flat at double precision
        return (t + pi) / two_pi;
    }
    return (special::norm_cdf(t * sg) - lo) / span;
}

TrigMoment trig_moment(int p, const GnParams& params) {
    if (p < 1) throw DomainError("trigonometric moment order must be >= 1");
    if (p > 8) {
        throw AccuracyLoss("trigonometric moments are validated only up to "
                           "order 8; requested order " + std::to_string(p));
    }
    const double x = pi * std::sqrt(0.5 * params.gamma);
    const double y = static_cast<double>(p) / std::sqrt(2.0 * params.gamma);
    // exp(-p^2/(2 gamma)) equals the damping factor exp(-y^2) exactly, so
    // the damped evaluation yields the full numerator in one step.
    const double ratio = special::re_erf_complex_damped(x, y) / special::erf(x);

    TrigMoment m;
    m.p = p;
    const double arg = p * params.mu.radians();
    m.re = ratio * std::cos(arg);
    m.im = ratio * std::sin(arg);
    m.resultant_length = std::abs(ratio);
    m.direction = canonicalize(ratio < 0.0 ? arg + pi : arg);
    return m;
}

double extrinsic_variance(const GnParams& params) {
    return 1.0 - trig_moment(1, params).resultant_length;
}

double intrinsic_variance(double gamma) {
    check_gamma(gamma);
    return detail::intrinsic_variance_factor(gamma) / gamma;
}

double off_center_sq_distance(double delta, double gamma) {
    check_gamma(gamma);
    if (!std::isfinite(delta) || std::abs(delta) >= pi) {
        throw DomainError("offset delta must lie in (-pi, pi)");
    }
    const double d = std::abs(delta); // the expectation is even in delta
    const double sg = std::sqrt(gamma);
    const double erf_full = special::erf(pi * std::sqrt(0.5 * gamma));

    // Mass and first moment of the displacement density on [pi - d, pi],
    // the arc that wraps past the antipode when measured from the offset.
    const double mass =
        (special::norm_cdf(pi * sg) - special::norm_cdf((pi - d) * sg)) /
        erf_full;
    const double k = std::sqrt(two_pi / gamma) * erf_full;
    const double first =
        (std::exp(-0.5 * gamma * (pi - d) * (pi - d)) -
         std::exp(-0.5 * gamma * pi * pi)) /
        (gamma * k);

    // (2pi - s)^2 - s^2 = 4pi(pi - s) for the wrapped arc, s = d + alpha.
    return d * d + intrinsic_variance(gamma) +
           4.0 * pi * ((pi - d) * mass - first);
}

std::vector<Angle> sample(std::size_t n, const GnParams& params, RngStream& rng) {
    const double sg = std::sqrt(params.gamma);
    const double lo = special::norm_cdf(-pi * sg);
    const double span = special::norm_cdf(pi * sg) - lo;
    const double mu = params.mu.radians();
    constexpr double below_one = 0x1.fffffffffffffp-1;

    std::vector<Angle> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = rng.uniform_open(); // exactly one uniform per draw
        double z;
        if (span > 0.0) {
            double q = lo + u * span;
            if (q >= 1.0) q = below_one;
            z = special::norm_cdf_inv(q) / sg;
            if (z < -pi) z = -pi;
            if (z > pi) z = pi;
        } else {
            z = -pi + u * two_pi; // flat truncation window (see displacement_cdf)
        }
        out.push_back(canonicalize(mu + z));
    }
    return out;
}

namespace detail {

double intrinsic_variance_factor(double gamma) {
    check_gamma(gamma);
    return 1.0 - tail_ratio(gamma);
}

double fourth_displacement_moment(double gamma) {
    check_gamma(gamma);
    const double q = tail_ratio(gamma);
    return (3.0 * (1.0 - q) / gamma - pi * pi * q) / gamma;
}

} // namespace detail

} // namespace geonorm
