#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include "horolab/errors.hpp"

namespace horolab {

inline constexpr double pi = std::numbers::pi;

// Point of the upper half-plane model {x + iy : y > 0}, metric |dz|/y.
struct Point {
    double x = 0.0;
    double y = 1.0;

    Point() = default;
    Point(double x_, double y_) : x(x_), y(y_) {
        if (!(y > 0.0) || !std::isfinite(x) || !std::isfinite(y))
            fail(errc::invalid_argument, "Point requires finite coordinates with y > 0");
    }

    std::complex<double> z() const { return {x, y}; }
};

inline Point make_point(std::complex<double> z) { return Point(z.real(), z.imag()); }

inline bool same_point(const Point& p, const Point& q, double tol = 0.0) {
    return std::abs(p.x - q.x) <= tol && std::abs(p.y - q.y) <= tol;
}

inline double normalize_angle(double theta) {
    double t = std::fmod(theta, 2.0 * pi);
    if (t < 0.0) t += 2.0 * pi;
    if (t >= 2.0 * pi) t = 0.0;
    return t;
}

// Unsigned angle between two directions, in [0, pi].
inline double angle_between(double a, double b) {
    double d = std::fabs(normalize_angle(a) - normalize_angle(b));
    return d > pi ? 2.0 * pi - d : d;
}

// Unit tangent vector: base point plus the Euclidean direction angle in the
// conformal model, normalized to [0, 2pi).
struct UnitTangent {
    Point base;
    double theta = 0.0;

    UnitTangent() = default;
    UnitTangent(Point base_, double theta_) : base(base_), theta(normalize_angle(theta_)) {}
};

// acosh(1 + u) without cancellation for small u >= 0.
inline double acosh1p(double u) {
    if (u < 0.0) u = 0.0;
    if (std::isinf(u)) return u;
    return std::log1p(u + std::sqrt(u * (2.0 + u)));
}

} // namespace horolab
