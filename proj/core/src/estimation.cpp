#include "geonorm/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "geonorm/errors.hpp"
#include "geonorm/geodesic_normal.hpp"
#include "geonorm/special.hpp"

namespace geonorm {

namespace {

constexpr double flat_limit = pi * pi / 3.0; // dispersion of the uniform law

// Compensated (Neumaier) sum of squared arc distances from m.
double mean_sq_distance(std::span<const Angle> sample, Angle m) {
    double sum = 0.0;
    double comp = 0.0;
    for (const Angle a : sample) {
        const double d = geodesic_distance(m, a);
        const double term = d * d;
        const double t = sum + term;
        if (std::abs(sum) >= std::abs(term)) comp += (sum - t) + term;
        else comp += (term - t) + sum;
        sum = t;
    }
    return (sum + comp) / static_cast<double>(sample.size());
}

struct Candidate {
    double angle;    // canonical radians
    double screen_f; // cut-formula value of F, used for screening
};

} // namespace

std::vector<Angle> intrinsic_sample_mean(std::span<const Angle> sample) {
    if (sample.empty()) {
        throw EmptySample("intrinsic mean of an empty sample is undefined");
    }
    const std::size_t n = sample.size();
    if (n == 1) return {sample[0]};

    // Shift so the smallest angle sits at 0: keeps every unwrapped
    // coordinate in [0, 4*pi), which protects the moment sums below from
    // cancellation.  The mean is equivariant under the shift.
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = sample[i].radians();
    std::sort(y.begin(), y.end());
    const double base = y[0];
    for (std::size_t i = 0; i < n; ++i) y[i] -= base;

    double total = 0.0;
    double total_sq = 0.0;
    std::vector<double> prefix(n); // prefix[k] = sum of y[0..k-1]
    for (std::size_t i = 0; i < n; ++i) {
        prefix[i] = total;
        total += y[i];
        total_sq += y[i] * y[i];
    }
    const double nd = static_cast<double>(n);

    // A candidate per cut k: observations below y[k] unwrap to y + 2*pi.
    // The candidate is the arithmetic mean of the unwrapped coordinates and
    // is admissible only if all of them lie within pi of it.
    std::vector<Candidate> feasible;
    double best_screen = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
        const double kd = static_cast<double>(k);
        const double m = (total + two_pi * kd) / nd;
        const double lowest = y[k];
        const double highest = (k == 0) ? y[n - 1] : y[k - 1] + two_pi;
        constexpr double slack = 1e-9;
        if (m - lowest > pi + slack || highest - m > pi + slack) continue;

        const double sum_sq =
            total_sq + two_pi * two_pi * kd + 2.0 * two_pi * prefix[k];
        const double f = sum_sq / nd - m * m;
        feasible.push_back({m, f});
        best_screen = std::min(best_screen, f);
    }

    // Keep near-ties, then settle them with the exact criterion.  The
    // screening values are already accurate to ~1e-10, so the loose band
    // only has to absorb rounding in the moment sums.
    constexpr double screen_band = 1e-7;
    constexpr double value_band = 1e-9;
    std::vector<Candidate> finalists;
    for (const Candidate& c : feasible) {
        if (c.screen_f <= best_screen + screen_band) finalists.push_back(c);
    }

    std::vector<std::pair<double, double>> scored; // (angle canonical, F)
    const bool verify = finalists.size() <= 64;
    double best_f = std::numeric_limits<double>::infinity();
    for (const Candidate& c : finalists) {
        const Angle a = canonicalize(c.angle + base);
        const double f = verify ? mean_sq_distance(sample, a) : c.screen_f;
        scored.emplace_back(a.radians(), f);
        best_f = std::min(best_f, f);
    }

    std::vector<double> winners;
    for (const auto& [ang, f] : scored) {
        if (f <= best_f + value_band) winners.push_back(ang);
    }
    std::sort(winners.begin(), winners.end());

    std::vector<Angle> out;
    for (double w : winners) {
        if (!out.empty() && w - out.back().radians() < 1e-12) continue;
        out.push_back(Angle(w));
    }
    // The first and last winner can be the same point split across the
    // 0 / 2*pi seam.
    if (out.size() > 1 &&
        two_pi - out.back().radians() + out.front().radians() < 1e-12) {
        out.pop_back();
    }
    return out;
}

CircularSummary circular_summary(std::span<const Angle> sample) {
    if (sample.empty()) {
        throw EmptySample("summary of an empty sample is undefined");
    }
    CircularSummary s;
    s.n = sample.size();

    double c = 0.0;
    double sn = 0.0;
    for (const Angle a : sample) {
        c += std::cos(a.radians());
        sn += std::sin(a.radians());
    }
    const double nd = static_cast<double>(s.n);
    s.resultant_length = std::hypot(c, sn) / nd;
    s.extrinsic_variance = 1.0 - s.resultant_length;
    if (s.resultant_length > 1e-14) {
        s.extrinsic_mean = canonicalize(std::atan2(sn, c));
    }

    s.intrinsic_mean_set = intrinsic_sample_mean(sample);
    s.intrinsic_variance = mean_sq_distance(sample, s.intrinsic_mean_set.front());
    return s;
}

FisherInfo fisher_info(double gamma) {
    const double t = detail::intrinsic_variance_factor(gamma);
    const double v = t / gamma;
    const double m4 = detail::fourth_displacement_moment(gamma);
    FisherInfo info;
    info.j1 = gamma * t;
    info.j2 = 0.25 * (m4 - v * v);
    return info;
}

namespace {

// Invert the intrinsic variance: find gamma with V(gamma) = s.  V is
// strictly decreasing, so bracket geometrically and bisect in log space,
// then polish with secant steps.
double invert_intrinsic_variance(double s) {
    double lo = 1e-8;
    double hi = 1e8;
    while (intrinsic_variance(lo) < s && lo > 1e-300) lo *= 1e-2;
    while (intrinsic_variance(hi) > s && hi < 1e300) hi *= 1e2;

    double g = std::sqrt(lo * hi);
    for (int i = 0; i < 200; ++i) {
        g = std::sqrt(lo * hi);
        const double v = intrinsic_variance(g);
        if (std::abs(v - s) <= 1e-13) break;
        if (v < s) hi = g;
        else lo = g;
        if (hi - lo <= 4e-16 * hi) break;
    }

    double g_prev = (intrinsic_variance(g) < s) ? lo : hi;
    for (int i = 0; i < 3; ++i) {
        const double vg = intrinsic_variance(g);
        const double vp = intrinsic_variance(g_prev);
        const double dv = vg - vp;
        if (dv == 0.0) break;
        const double next = g - (vg - s) * (g - g_prev) / dv;
        if (!(next > 0.0) || !std::isfinite(next)) break;
        g_prev = g;
        g = next;
    }
    return g;
}

} // namespace

MleFit fit_gn_mle(std::span<const Angle> sample) {
    if (sample.empty()) {
        throw EmptySample("cannot fit an empty sample");
    }
    if (sample.size() < 2) {
        throw DegenerateSample("fitting requires at least 2 observations");
    }

    CircularSummary summary = circular_summary(sample);
    const double s = summary.intrinsic_variance;
    if (s <= 0.0) {
        throw DegenerateSample(
            "all observations coincide; concentration is unbounded");
    }
    if (s >= flat_limit) {
        throw GammaNotIdentifiable(
            "sample dispersion " + std::to_string(s) +
            " is at or above the flat-distribution limit pi^2/3");
    }

    MleFit fit;
    fit.n = summary.n;
    fit.mu_hat = summary.intrinsic_mean_set.front();
    fit.mean_set_multiplicity = summary.intrinsic_mean_set.size();
    fit.near_identifiability_boundary = (s >= flat_limit - 1e-6);
    fit.gamma_hat = invert_intrinsic_variance(s);

    const double nd = static_cast<double>(fit.n);
    fit.log_likelihood =
        -nd * log_norm_const(fit.gamma_hat) - 0.5 * fit.gamma_hat * nd * s;

    const FisherInfo info = fisher_info(fit.gamma_hat);
    fit.fisher_j1 = info.j1;
    fit.fisher_j2 = info.j2;
    fit.se_mu = 1.0 / std::sqrt(nd * info.j1);
    fit.se_gamma = 1.0 / std::sqrt(nd * info.j2);
    return fit;
}

ConfidenceIntervals asymptotic_ci(const MleFit& fit, double level) {
    if (!(level > 0.0 && level < 1.0)) {
        throw DomainError("confidence level must lie strictly in (0, 1)");
    }
    const double z = special::norm_cdf_inv(0.5 * (1.0 + level));

    ConfidenceIntervals ci;
    ci.level = level;
    const double mu = fit.mu_hat.radians();
    ci.mu_lower = canonicalize(mu - z * fit.se_mu);
    ci.mu_upper = canonicalize(mu + z * fit.se_mu);
    ci.gamma_lower = std::max(0.0, fit.gamma_hat - z * fit.se_gamma);
    ci.gamma_upper = fit.gamma_hat + z * fit.se_gamma;
    return ci;
}

} // namespace geonorm
