#include "geonorm/special.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "geonorm/errors.hpp"
#include "geonorm/quadrature.hpp"

namespace geonorm::special {

namespace {

constexpr double pi_v = 3.14159265358979323846;
constexpr double sqrt2 = 1.41421356237309504880;
constexpr double inv_sqrt_2pi = 0.39894228040143267794;

void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) {
        throw DomainError(std::string(what) + " must be finite");
    }
}

// Trapezoidal-series evaluation of Re(erf(x + i*y)) for x > 0, y >= 0.
// Each cosh/sinh factor is folded into the exponentials so no intermediate
// overflows before the final combination; `damped` additionally multiplies
// every term by exp(-y*y), which keeps all exponents non-positive.
// Returns the series value and an estimate of the accumulated magnitude
// (for cancellation diagnostics).
struct SeriesResult {
    double value;
    double abs_scale;
};

SeriesResult re_erf_series(double x, double y, bool damped) {
    const double xx = x * x;
    const double phase = 2.0 * x * y;
    const double c2 = std::cos(phase);
    const double s2 = std::sin(phase);
    const double one_minus_cos = 2.0 * std::sin(x * y) * std::sin(x * y);

    double lead = std::erf(x);
    double mid;
    if (damped) {
        lead *= std::exp(-y * y);
        mid = std::exp(-xx - y * y) * one_minus_cos / (2.0 * pi_v * x);
    } else {
        mid = std::exp(-xx) * one_minus_cos / (2.0 * pi_v * x);
    }

    double sum = 0.0;
    double abs_sum = 0.0;
    const double n_cap = 2.0 * y + 64.0;
    for (double n = 1.0; n <= n_cap; n += 1.0) {
        double ep, em, base;
        if (damped) {
            const double hp = 0.5 * n - y;
            const double hm = 0.5 * n + y;
            ep = std::exp(-hp * hp - xx);
            em = std::exp(-hm * hm - xx);
            base = std::exp(-0.25 * n * n - xx - y * y);
        } else {
            ep = std::exp(n * y - 0.25 * n * n - xx);
            em = std::exp(-n * y - 0.25 * n * n - xx);
            base = std::exp(-0.25 * n * n - xx);
        }
        const double ch = 0.5 * (ep + em);
        const double sh = 0.5 * (ep - em);
        const double denom = n * n + 4.0 * xx;
        const double term = (2.0 * x * (base - ch * c2) + n * sh * s2) / denom;
        sum += term;
        abs_sum += std::abs(term);
        if (n > 2.0 * y + 2.0 && term == 0.0) break;
    }

    const double value = lead + mid + (2.0 / pi_v) * sum;
    const double scale =
        std::abs(lead) + std::abs(mid) + (2.0 / pi_v) * abs_sum;
    return {value, scale};
}

// Direct quadrature of Re((2/sqrt(pi)) * z * integral_0^1 exp(-(t z)^2) dt)
// with z = x + i*y.  Used as a fallback when the series cancels badly.
double re_erf_quadrature(double x, double y) {
    const double two_over_sqrt_pi = 1.12837916709551257390;
    auto f = [x, y](double t) {
        const double t2 = t * t;
        const double mag = std::exp(-t2 * (x * x - y * y));
        const double ph = 2.0 * t2 * x * y;
        return mag * (x * std::cos(ph) + y * std::sin(ph));
    };
    Quadrature q;
    q.abs_tol = 1e-15;
    q.rel_tol = 1e-12;
    try {
        return two_over_sqrt_pi * integrate(f, 0.0, 1.0, q);
    } catch (const NoConvergence&) {
        throw AccuracyLoss("Re erf(x+iy) cannot be evaluated to tolerance");
    }
}

double re_erf_impl(double x, double y, bool damped) {
    require_finite(x, "re_erf_complex x");
    require_finite(y, "re_erf_complex y");

    // Re(erf) is odd in x and even in y; reduce to x >= 0, y >= 0.
    if (x < 0.0) return -re_erf_impl(-x, y, damped);
    const double ay = std::abs(y);
    if (x == 0.0) return 0.0;
    if (ay == 0.0) return std::erf(x);

    if (!damped && ay * ay - x * x > 700.0) {
        throw AccuracyLoss(
            "Re erf(x+iy) exceeds double range for y*y - x*x > 700");
    }
    if (2.0 * x * ay > 1e6 || 2.0 * ay + 64.0 > 1e6) {
        throw AccuracyLoss(
            "Re erf(x+iy) arguments too large for validated accuracy");
    }

    const SeriesResult r = re_erf_series(x, ay, damped);
    const double tiny = std::numeric_limits<double>::min();
    const double rel_err =
        1e-15 * r.abs_scale / std::max(std::abs(r.value), tiny);
    if (!damped && rel_err > 1e-11) {
        return re_erf_quadrature(x, ay);
    }
    return r.value;
}

// Power series for I0/I1; all terms positive, valid for small and moderate
// kappa.  `order` is 0 or 1.
double bessel_i_series(int order, double kappa) {
    const double t = 0.25 * kappa * kappa;
    double term = (order == 0) ? 1.0 : 0.5 * kappa;
    double sum = term;
    for (int k = 1; k < 1000; ++k) {
        term *= t / (static_cast<double>(k) * (k + order));
        sum += term;
        if (term < sum * 1e-18) break;
    }
    return sum;
}

// Asymptotic expansion of exp(-kappa) * I_n(kappa) for large kappa.
double bessel_i_scaled_asymptotic(int order, double kappa) {
    const double mu = 4.0 * order * order;
    double term = 1.0;
    double sum = term;
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 40; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= -(mu - odd * odd) / (8.0 * kappa * static_cast<double>(k));
        if (std::abs(term) >= prev) break; // divergent tail reached
        prev = std::abs(term);
        sum += term;
        if (std::abs(term) < sum * 1e-17) break;
    }
    return sum * inv_sqrt_2pi / std::sqrt(kappa);
}

constexpr double bessel_crossover = 50.0;

void check_bessel_args(int order, double kappa) {
    if (order != 0 && order != 1) {
        throw DomainError("bessel_i supports orders 0 and 1 only");
    }
    if (!std::isfinite(kappa) || kappa < 0.0) {
        throw DomainError("bessel_i requires finite kappa >= 0");
    }
}

} // namespace

double erf(double x) {
    require_finite(x, "erf argument");
    return std::erf(x);
}

double norm_cdf(double x) {
    require_finite(x, "norm_cdf argument");
    return 0.5 * std::erfc(-x / sqrt2);
}

double norm_cdf_inv(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError("norm_cdf_inv requires p in (0, 1)");
    }

    // Acklam's rational approximation (relative error < 1.2e-9 throughout).
    static constexpr double a[6] = {
        -3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
        1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[5] = {
        -5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
        6.680131188771972e+01, -1.328068155288572e+01};
    static constexpr double c[6] = {
        -7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
        -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00};
    static constexpr double d[4] = {
        7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
        3.754408661907416e+00};
    constexpr double p_low = 0.02425;
    constexpr double p_high = 1.0 - p_low;

    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= p_high) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    // Newton polish against the erfc-based CDF; skipped in the extreme
    // tails where the density underflows and the step would be 0/0.
    for (int it = 0; it < 2 && std::abs(x) < 37.0; ++it) {
        const double err = norm_cdf(x) - p;
        const double pdf = inv_sqrt_2pi * std::exp(-0.5 * x * x);
        x -= err / pdf;
    }
    return x;
}

double re_erf_complex(double x, double y) { return re_erf_impl(x, y, false); }

double re_erf_complex_damped(double x, double y) {
    return re_erf_impl(x, y, true);
}

double bessel_i(int order, double kappa) {
    check_bessel_args(order, kappa);
    if (kappa <= bessel_crossover) return bessel_i_series(order, kappa);
    return bessel_i_scaled_asymptotic(order, kappa) * std::exp(kappa);
}

double bessel_i_scaled(int order, double kappa) {
    check_bessel_args(order, kappa);
    if (kappa <= bessel_crossover) {
        return bessel_i_series(order, kappa) * std::exp(-kappa);
    }
    return bessel_i_scaled_asymptotic(order, kappa);
}

} // namespace geonorm::special
