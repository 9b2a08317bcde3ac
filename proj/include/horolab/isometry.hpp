#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include "horolab/point.hpp"

namespace horolab {

// Orientation-preserving isometry z -> (az+b)/(cz+d) as a real matrix with
// determinant 1. Matrices M and -M act identically, so entries are kept
// sign-canonical: the first nonzero entry in (a, b, c, d) order is positive.
struct Isometry {
    double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

    Isometry() = default;

    Isometry(double a_, double b_, double c_, double d_) : a(a_), b(b_), c(c_), d(d_) {
        double det = a * d - b * c;
        if (!std::isfinite(det) || det <= 0.0)
            fail(errc::invalid_argument, "Isometry requires a finite matrix with positive determinant");
        double s = std::sqrt(det);
        a /= s; b /= s; c /= s; d /= s;
        canonicalize();
    }

    static Isometry identity() { return {}; }

    // Entries taken as-is (sign-canonicalized only). Deep products of unit
    // matrices overflow the precision of a recomputed determinant while their
    // Möbius action stays accurate, so products must not be renormalized.
    static Isometry raw(double a, double b, double c, double d) {
        Isometry g;
        g.a = a; g.b = b; g.c = c; g.d = d;
        g.canonicalize();
        return g;
    }

    void canonicalize() {
        for (double v : {a, b, c, d}) {
            if (v != 0.0) {
                if (v < 0.0) { a = -a; b = -b; c = -c; d = -d; }
                break;
            }
        }
        // normalize signed zeros so canonical keys are stable
        if (a == 0.0) a = 0.0;
        if (b == 0.0) b = 0.0;
        if (c == 0.0) c = 0.0;
        if (d == 0.0) d = 0.0;
    }

    double det() const { return a * d - b * c; }
    double trace() const { return a + d; }

    Isometry inverse() const { return raw(d, -b, -c, a); }

    std::complex<double> mobius(std::complex<double> z) const {
        return (a * z + b) / (c * z + d);
    }

    std::array<double, 4> entries() const { return {a, b, c, d}; }

    std::string str() const {
        char buf[128];
        std::snprintf(buf, sizeof buf, "[[%.6g,%.6g],[%.6g,%.6g]]", a, b, c, d);
        return buf;
    }
};

inline Isometry compose(const Isometry& g, const Isometry& h) {
    return Isometry::raw(g.a * h.a + g.b * h.c, g.a * h.b + g.b * h.d,
                         g.c * h.a + g.d * h.c, g.c * h.b + g.d * h.d);
}

inline bool is_identity(const Isometry& g, double tol = 1e-12) {
    return std::fabs(g.a - 1.0) <= tol && std::fabs(g.b) <= tol &&
           std::fabs(g.c) <= tol && std::fabs(g.d - 1.0) <= tol;
}

inline Point apply(const Isometry& g, const Point& p) {
    // Im(g z) = Im(z)/|cz+d|^2, computed directly to stay positive under roundoff.
    std::complex<double> z = p.z();
    std::complex<double> den = g.c * z + g.d;
    double n = std::norm(den);
    std::complex<double> num = (g.a * z + g.b) * std::conj(den);
    return Point(num.real() / n, p.y / n);
}

// Derivative action on directions: arg d/dz (az+b)/(cz+d) = -2 arg(cz+d).
inline UnitTangent apply(const Isometry& g, const UnitTangent& v) {
    std::complex<double> den = g.c * v.base.z() + g.d;
    return UnitTangent(apply(g, v.base), v.theta - 2.0 * std::arg(den));
}

enum class isometry_kind { elliptic, parabolic, hyperbolic };

struct IsometryClass {
    isometry_kind kind;
    double translation_length = 0.0;  // hyperbolic only
    // boundary data: hyperbolic -> axis endpoints (repelling, attracting);
    // parabolic -> the single fixed boundary point in fixed[0].
    // Finite values in fixed[]; infinity encoded as +inf.
    double fixed[2] = {0.0, 0.0};
    bool fixes_infinity = false;
};

inline IsometryClass classify_isometry(const Isometry& g, double tol = 1e-10) {
    if (is_identity(g, tol)) fail(errc::invalid_argument, "classify_isometry: identity input");
    double tr = std::fabs(g.trace());
    IsometryClass out{};
    if (tr < 2.0 - tol) {
        out.kind = isometry_kind::elliptic;
        return out;
    }
    if (tr <= 2.0 + tol) {
        out.kind = isometry_kind::parabolic;
        if (std::fabs(g.c) <= tol) {
            out.fixed[0] = std::numeric_limits<double>::infinity();
            out.fixes_infinity = true;
        } else {
            out.fixed[0] = (g.a - g.d) / (2.0 * g.c);
        }
        return out;
    }
    out.kind = isometry_kind::hyperbolic;
    out.translation_length = 2.0 * std::acosh(tr / 2.0);
    if (std::fabs(g.c) <= tol) {
        // fixes infinity; other fixed point b/(d-a)
        out.fixes_infinity = true;
        out.fixed[0] = g.b / (g.d - g.a);
        out.fixed[1] = std::numeric_limits<double>::infinity();
        if (std::fabs(g.a) < std::fabs(g.d)) std::swap(out.fixed[0], out.fixed[1]);  // attracting last
    } else {
        double disc = std::sqrt(g.trace() * g.trace() - 4.0);
        double r1 = (g.a - g.d + disc) / (2.0 * g.c);
        double r2 = (g.a - g.d - disc) / (2.0 * g.c);
        // attracting fixed point has |derivative| < 1: |c z + d|^2 > 1
        auto deriv = [&](double z) { return 1.0 / ((g.c * z + g.d) * (g.c * z + g.d)); };
        if (std::fabs(deriv(r1)) < 1.0) { out.fixed[0] = r2; out.fixed[1] = r1; }
        else                            { out.fixed[0] = r1; out.fixed[1] = r2; }
    }
    return out;
}

} // namespace horolab
