#pragma once

#include <cmath>
#include <compare>
#include <numbers>

#include "geonorm/errors.hpp"

namespace geonorm {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// A point on the unit circle, stored as radians in [0, 2*pi).
// Construction canonicalizes, so the representation invariant always holds.
class Angle {
public:
    constexpr Angle() noexcept = default;

    explicit Angle(double raw) {
        if (!std::isfinite(raw)) {
            throw InvalidAngle("angle must be finite, got " + std::to_string(raw));
        }
        double r = std::fmod(raw, two_pi);
        if (r < 0.0) r += two_pi;
        if (r >= two_pi) r = 0.0; // fmod result of -eps rounds up to 2*pi
        value_ = r;
    }

    [[nodiscard]] double radians() const noexcept { return value_; }

    friend auto operator<=>(const Angle&, const Angle&) = default;

private:
    double value_ = 0.0;
};

// Reduce an arbitrary finite radian value to its representative in [0, 2*pi).
inline Angle canonicalize(double raw) { return Angle(raw); }

// Signed arc from mu to theta, in (-pi, pi]; the antipode maps to +pi.
// canonicalize(mu.radians() + result) recovers theta up to rounding.
inline double signed_displacement(Angle mu, Angle theta) noexcept {
    double d = theta.radians() - mu.radians(); // in (-2*pi, 2*pi)
    if (d <= -pi) d += two_pi;
    else if (d > pi) d -= two_pi;
    return d;
}

// Arc-length (geodesic) distance on the circle, in [0, pi].
// Symmetric by construction: both orders reduce to the same |displacement|.
inline double geodesic_distance(Angle a, Angle b) noexcept {
    return std::abs(signed_displacement(a, b));
}

} // namespace geonorm
