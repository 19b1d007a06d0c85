#pragma once

#include <array>
#include <cmath>
#include <utility>

#include "geonorm/errors.hpp"

namespace geonorm {

// Tolerances for adaptive integration.  An interval is accepted once its
// local error estimate drops below its share of the global budget
// max(abs_tol, rel_tol * |integral|); otherwise it is bisected, down to
// max_depth levels.
struct Quadrature {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_depth = 60;
};

namespace detail {

// Gauss-Kronrod 7-15 rule on [-1, 1].  Positive abscissae only; the rule is
// symmetric.  Even-indexed nodes are Kronrod-only, odd-indexed nodes carry
// the embedded 7-point Gauss rule.
inline constexpr std::array<double, 8> gk_nodes = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};

inline constexpr std::array<double, 8> gk_weights_kronrod = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};

inline constexpr std::array<double, 4> gk_weights_gauss = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

struct GkEstimate {
    double integral;
    double error;
};

template <class F>
GkEstimate gk15(F&& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);

    double kronrod = 0.0;
    double gauss = 0.0;
    for (int i = 0; i < 7; ++i) {
        const double x = h * gk_nodes[static_cast<std::size_t>(i)];
        const double fsum = f(c - x) + f(c + x);
        kronrod += gk_weights_kronrod[static_cast<std::size_t>(i)] * fsum;
        if (i % 2 == 1) {
            gauss += gk_weights_gauss[static_cast<std::size_t>(i / 2)] * fsum;
        }
    }
    const double fc = f(c);
    kronrod += gk_weights_kronrod[7] * fc;
    gauss += gk_weights_gauss[3] * fc;

    const double integral = kronrod * h;
    const double diff = std::abs(kronrod - gauss) * std::abs(h);
    // Standard Kronrod error heuristic: sharper than |K - G| once the rule
    // starts converging, never smaller than machine noise on the integral.
    double error = diff;
    if (diff > 0.0) {
        const double scaled = std::pow(200.0 * diff, 1.5);
        if (scaled < diff) error = scaled;
    }
    return {integral, error};
}

template <class F>
void gk_adapt(F&& f, double a, double b, double tol, int depth, int max_depth,
              double& total, double& total_err, bool& converged) {
    const GkEstimate est = gk15(f, a, b);
    if (est.error <= tol || depth >= max_depth) {
        if (est.error > tol) converged = false;
        total += est.integral;
        total_err += est.error;
        return;
    }
    const double c = 0.5 * (a + b);
    gk_adapt(f, a, c, 0.5 * tol, depth + 1, max_depth, total, total_err, converged);
    gk_adapt(f, c, b, 0.5 * tol, depth + 1, max_depth, total, total_err, converged);
}

} // namespace detail

// Adaptive Gauss-Kronrod integration of f over the finite interval [a, b].
// Throws DomainError for non-finite or reversed bounds and NoConvergence
// (carrying the best estimate) if the tolerance cannot be met.
template <class F>
double integrate(F&& f, double a, double b, const Quadrature& q = {}) {
    if (!std::isfinite(a) || !std::isfinite(b)) {
        throw DomainError("integration bounds must be finite");
    }
    if (a == b) return 0.0;
    if (a > b) throw DomainError("integration bounds must satisfy a <= b");

    const detail::GkEstimate first = detail::gk15(f, a, b);
    const double tol = std::max(q.abs_tol, q.rel_tol * std::abs(first.integral));

    double total = 0.0;
    double total_err = 0.0;
    bool converged = true;
    detail::gk_adapt(f, a, b, tol, 0, q.max_depth, total, total_err, converged);

    if (!converged && total_err > std::max(q.abs_tol, q.rel_tol * std::abs(total))) {
        throw NoConvergence("adaptive quadrature failed to reach tolerance", total);
    }
    return total;
}

} // namespace geonorm
