#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "horolab/isometry.hpp"
#include "horolab/point.hpp"

namespace horolab {

// d(p,q) = 2 asinh(|p-q| / (2 sqrt(y_p y_q))); stable near zero.
inline double dist(const Point& p, const Point& q) {
    double dx = p.x - q.x;
    double dy = p.y - q.y;
    return 2.0 * std::asinh(0.5 * std::sqrt((dx * dx + dy * dy) / (p.y * q.y)));
}

// Same metric on (x, log y) pairs; usable far outside the range where a Point
// stays representable (deep cusp excursions).
inline double dist_logy(double x1, double ly1, double x2, double ly2) {
    double u = ly1 - ly2;
    double dx = x1 - x2;
    double q = 2.0 * std::pow(std::sinh(0.5 * u), 2);
    if (dx != 0.0) {
        double t = std::exp(-(ly1 + ly2));  // may overflow to inf; acosh1p handles it
        q += 0.5 * dx * dx * t;
    }
    return acosh1p(q);
}

// Oriented geodesic through the plane, with its two ideal endpoints and a
// Möbius chart onto the positive imaginary axis. tau is the signed arc-length
// coordinate in the chart, increasing toward the forward endpoint.
struct GeodesicLine {
    // backward/forward ideal endpoints; infinity encoded as +/-inf value of `inf` flag
    double back = 0.0, fwd = 0.0;
    bool back_inf = false, fwd_inf = false;
    Isometry to_axis;    // maps the line onto (0, infinity), forward endpoint to infinity
    Isometry from_axis;  // inverse chart

    double tau_of(const Point& p) const {
        std::complex<double> w = to_axis.mobius(p.z());
        return 0.5 * std::log(std::norm(w));
    }

    Point point_at(double tau) const {
        return apply(from_axis, Point(0.0, std::exp(tau)));
    }

    // distance from p to the full line: sinh d = |Re w| / Im w in the chart
    double dist_to_line(const Point& p) const {
        std::complex<double> w = to_axis.mobius(p.z());
        return std::asinh(std::fabs(w.real()) / w.imag());
    }

    // signed arc-length coordinate of the orthogonal projection of p
    double projection_tau(const Point& p) const { return tau_of(p); }

    // initial direction angle at a point on the line, pointing forward
    double direction_at(const Point& p) const;
};

namespace detail {

// chart sending the geodesic with ideal endpoints (e_back, e_fwd) to the
// imaginary axis with the forward endpoint at infinity
inline Isometry axis_chart(double e_back, bool back_inf, double e_fwd, bool fwd_inf) {
    if (back_inf && fwd_inf) fail(errc::invalid_argument, "geodesic endpoints coincide at infinity");
    if (back_inf) return Isometry(0.0, 1.0, -1.0, e_fwd);       // z -> 1/(e_fwd - z)
    if (fwd_inf) return Isometry(1.0, -e_back, 0.0, 1.0);       // z -> z - e_back
    if (e_back == e_fwd) fail(errc::invalid_argument, "geodesic endpoints coincide");
    // send e_back -> 0 and e_fwd -> infinity, keeping the determinant positive
    if (e_fwd > e_back) return Isometry(1.0, -e_back, -1.0, e_fwd);  // (z-u)/(v-z)
    return Isometry(1.0, -e_back, 1.0, -e_fwd);                      // (z-u)/(z-v)
}

} // namespace detail

inline double GeodesicLine::direction_at(const Point& p) const {
    // forward unit direction in the chart at w is +i * w (a vertical ray moving
    // up); pull back through from_axis: direction rotates by -2 arg(c w + d).
    std::complex<double> w = to_axis.mobius(p.z());
    double theta_chart = pi / 2.0;  // pointing up along the axis
    std::complex<double> den = from_axis.c * std::complex<double>(0.0, std::abs(w)) + from_axis.d;
    return normalize_angle(theta_chart - 2.0 * std::arg(den));
}

// geodesic through two distinct points, oriented p -> q
inline GeodesicLine line_through(const Point& p, const Point& q) {
    if (same_point(p, q)) fail(errc::invalid_argument, "degenerate segment: coincident points");
    GeodesicLine L;
    double dx = q.x - p.x;
    if (std::fabs(dx) <= 1e-14 * (std::fabs(p.x) + std::fabs(q.x) + 1.0)) {
        // vertical line x = p.x
        L.back_inf = q.y < p.y;
        L.fwd_inf = q.y > p.y;
        L.back = L.back_inf ? 0.0 : p.x;
        L.fwd = L.fwd_inf ? 0.0 : p.x;
        if (L.back == L.fwd && !L.back_inf && !L.fwd_inf)
            fail(errc::invalid_argument, "degenerate segment: coincident points");
    } else {
        double c = (q.x * q.x + q.y * q.y - p.x * p.x - p.y * p.y) / (2.0 * dx);
        double r = std::hypot(p.x - c, p.y);
        // oriented: q is forward; theta decreasing means heading toward c + r
        double tp = std::atan2(p.y, p.x - c);
        double tq = std::atan2(q.y, q.x - c);
        if (tq < tp) { L.back = c - r; L.fwd = c + r; }
        else         { L.back = c + r; L.fwd = c - r; }
    }
    L.to_axis = detail::axis_chart(L.back, L.back_inf, L.fwd, L.fwd_inf);
    L.from_axis = L.to_axis.inverse();
    return L;
}

// geodesic through p toward the ideal point xi (finite coordinate or infinity)
inline GeodesicLine line_toward(const Point& p, double xi, bool xi_is_inf) {
    GeodesicLine L;
    if (xi_is_inf) {
        L.fwd_inf = true;
        L.back = p.x;
    } else if (std::fabs(xi - p.x) <= 1e-300) {
        L.back_inf = true;
        L.fwd = xi;
    } else {
        double c = (xi * xi - p.x * p.x - p.y * p.y) / (2.0 * (xi - p.x));
        double r = std::fabs(xi - c);
        L.fwd = xi;
        L.back = 2.0 * c - xi;
        (void)r;
    }
    L.to_axis = detail::axis_chart(L.back, L.back_inf, L.fwd, L.fwd_inf);
    L.from_axis = L.to_axis.inverse();
    return L;
}

// geodesic generated by a unit tangent, oriented forward
inline GeodesicLine line_of(const UnitTangent& v) {
    double ct = std::cos(v.theta);
    if (std::fabs(ct) < 1e-12) {
        // vertical
        GeodesicLine L;
        bool up = std::sin(v.theta) > 0.0;
        L.fwd_inf = up;
        L.back_inf = !up;
        L.fwd = up ? 0.0 : v.base.x;
        L.back = up ? v.base.x : 0.0;
        L.to_axis = detail::axis_chart(L.back, L.back_inf, L.fwd, L.fwd_inf);
        L.from_axis = L.to_axis.inverse();
        return L;
    }
    double c = v.base.x + v.base.y * std::tan(v.theta);
    double r = std::hypot(v.base.x - c, v.base.y);
    // moving direction at angle theta0 on the circle is s * i * e^{i theta0}
    double theta0 = std::atan2(v.base.y, v.base.x - c);
    std::complex<double> tangent_ccw = std::complex<double>(0.0, 1.0) * std::polar(1.0, theta0);
    std::complex<double> want = std::polar(1.0, v.theta);
    double s = (tangent_ccw.real() * want.real() + tangent_ccw.imag() * want.imag()) > 0.0 ? 1.0 : -1.0;
    GeodesicLine L;
    if (s > 0.0) { L.fwd = c - r; L.back = c + r; }  // theta increasing heads to c - r
    else         { L.fwd = c + r; L.back = c - r; }
    L.to_axis = detail::axis_chart(L.back, L.back_inf, L.fwd, L.fwd_inf);
    L.from_axis = L.to_axis.inverse();
    return L;
}

// point at arc length t from p along [p, q]
inline Point geodesic_point(const Point& p, const Point& q, double t) {
    if (same_point(p, q)) fail(errc::invalid_argument, "geodesic_point: degenerate segment");
    double L = dist(p, q);
    if (t < -1e-12 || t > L + 1e-12)
        fail(errc::invalid_argument, "geodesic_point: arc length outside [0, d(p,q)]");
    t = std::clamp(t, 0.0, L);
    GeodesicLine line = line_through(p, q);
    return line.point_at(line.tau_of(p) + t);
}

// interior angle at `vertex` between segments [vertex,p] and [vertex,q], in [0, pi]
inline double angle_at(const Point& vertex, const Point& p, const Point& q) {
    if (same_point(vertex, p) || same_point(vertex, q))
        fail(errc::invalid_argument, "angle_at: degenerate segment");
    double a = line_through(vertex, p).direction_at(vertex);
    double b = line_through(vertex, q).direction_at(vertex);
    return angle_between(a, b);
}

// hyperbolic law of cosines: side opposite the angle theta between sides b, c
inline double law_of_cosines_side(double b, double c, double theta) {
    if (b < 0.0 || c < 0.0) fail(errc::invalid_argument, "law_of_cosines_side: negative side");
    if (theta < 0.0 || theta > pi + 1e-12)
        fail(errc::invalid_argument, "law_of_cosines_side: angle outside [0, pi]");
    // cosh a - 1 = (cosh(b-c) - 1) + sinh b sinh c (1 - cos theta); both terms
    // nonnegative, no cancellation
    double u = 2.0 * std::pow(std::sinh(0.5 * (b - c)), 2) +
               2.0 * std::sinh(b) * std::sinh(c) * std::pow(std::sin(0.5 * theta), 2);
    return acosh1p(u);
}

// Lemma-style penalty c(alpha) = -log((1 - cos alpha)/4): chord defect bound
// for a junction of interior angle >= alpha.
inline double separation_constant(double alpha) {
    if (!(alpha > 0.0) || !(alpha <= pi))
        fail(errc::invalid_argument, "separation_constant: alpha outside (0, pi]");
    return -std::log((1.0 - std::cos(alpha)) / 4.0);
}

inline UnitTangent tangent_toward(const Point& base, const Point& target) {
    GeodesicLine L = line_through(base, target);
    return UnitTangent(base, L.direction_at(base));
}

struct SegmentSpec {
    Point start;
    Point end;
    double length() const { return dist(start, end); }
    Point at(double t) const { return geodesic_point(start, end, t); }
};

struct FellowTravelBound {
    double bound = 0.0;                // certified upper bound on the deviation
    std::optional<double> witness_s;   // matching parameter (two-endpoint regime)
    double witness_deviation = 0.0;
};

// Common-origin regime: both segments issue from the same point and their far
// endpoints are Q-close; deviation at matched time t is at most e^Q e^{t-L},
// L = min length. Valid for t in [0, L].
inline FellowTravelBound fellow_travel_bound(const SegmentSpec& s1, const SegmentSpec& s2, double t) {
    double L1 = s1.length(), L2 = s2.length();
    if (!same_point(s1.start, s2.start, 1e-12)) {
        // two-endpoint regime (both endpoint pairs Q-close): witness search.
        // Any Q above the endpoint gaps works; the regime itself needs Q > 3.
        double Q = std::max({dist(s1.start, s2.start), dist(s1.end, s2.end), 3.0 + 1e-9});
        if (!(L1 > 6.0 * Q) || !(L2 > 6.0 * Q))
            fail(errc::invalid_argument, "fellow_travel_bound: requires L1, L2 > 6Q; "
                                         "violated inequality min(L1,L2) > 6Q");
        if (t < 3.0 * Q || t > L1 - 3.0 * Q)
            fail(errc::invalid_argument, "fellow_travel_bound: t outside [3Q, L1-3Q]");
        FellowTravelBound out;
        out.bound = 1.0;
        Point p = s1.at(t);
        double lo = 2.0 * Q, hi = std::min(L1 - 2.0 * Q, L2);
        double best_s = lo, best_d = dist(p, s2.at(lo));
        int n = 512;
        for (int i = 1; i <= n; ++i) {
            double s = lo + (hi - lo) * i / n;
            double d = dist(p, s2.at(s));
            if (d < best_d) { best_d = d; best_s = s; }
        }
        // refine by ternary search around the grid minimum
        double a = std::max(lo, best_s - (hi - lo) / n);
        double b = std::min(hi, best_s + (hi - lo) / n);
        for (int it = 0; it < 80; ++it) {
            double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
            if (dist(p, s2.at(m1)) < dist(p, s2.at(m2))) b = m2; else a = m1;
        }
        out.witness_s = 0.5 * (a + b);
        out.witness_deviation = dist(p, s2.at(*out.witness_s));
        return out;
    }
    double Q = dist(s1.end, s2.end);
    double L = std::min(L1, L2);
    if (t < 0.0 || t > L)
        fail(errc::invalid_argument, "fellow_travel_bound: t outside [0, min(L1,L2)]");
    FellowTravelBound out;
    out.bound = std::exp(Q) * std::exp(t - L);
    return out;
}

// Piecewise geodesic ray data: segment lengths, interior angles, and the
// stability constants attached to the angle floor alpha.
struct PiecewiseRayParams {
    std::vector<double> lengths;  // ell_n > 0
    std::vector<double> angles;   // theta_n in (0, pi), angles[k] at the joint after segment k+1
    double alpha = 0.0;           // angle floor
    double L_min = 0.0;           // admissible segment length floor L(alpha)
    double C = 0.0;               // chord defect constant C(alpha) = c(2 alpha/3)
    double D = 0.0;               // Hausdorff stability constant D(alpha)
};

struct PiecewiseRayBound {
    double lower_bound = 0.0;      // chord length >= sum lengths - (n-1) C
    double angle_certificate = 0.0;  // >= 2 alpha / 3 at the last node against the chord
};

inline PiecewiseRayBound piecewise_ray_bound(const PiecewiseRayParams& params, int n) {
    if (n < 1 || n > static_cast<int>(params.lengths.size()))
        fail(errc::invalid_argument, "piecewise_ray_bound: n outside populated range");
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
        if (params.lengths[k] < params.L_min)
            fail(errc::constraint, "piecewise_ray_bound: segment " + std::to_string(k + 1) +
                                       " shorter than L(alpha)");
        sum += params.lengths[k];
    }
    for (int k = 0; k + 1 < n; ++k) {
        if (params.angles[k] < params.alpha)
            fail(errc::constraint, "piecewise_ray_bound: angle " + std::to_string(k + 1) +
                                       " below alpha");
    }
    PiecewiseRayBound out;
    out.lower_bound = sum - (n - 1) * params.C;
    out.angle_certificate = 2.0 * params.alpha / 3.0;
    return out;
}

// translation along the imaginary axis, i -> e^ell i, directions preserved
inline Isometry translate_up(double ell) {
    return Isometry(std::exp(0.5 * ell), 0.0, 0.0, std::exp(-0.5 * ell));
}

// elliptic rotation about i turning directions by psi
inline Isometry rotate_about_i(double psi) {
    return Isometry(std::cos(0.5 * psi), std::sin(0.5 * psi), -std::sin(0.5 * psi),
                    std::cos(0.5 * psi));
}

// Concrete piecewise geodesic path in moving-frame form: step k maps the frame
// at vertex k-1 (vertex at i, incoming direction up) to the frame at vertex k.
// Vertex k is (steps[0] * ... * steps[k-1]) applied to i; composing stepwise
// keeps deep vertices accurate. Interior angle k sits between segments k and
// k+1; turn sides alternate.
inline std::vector<Isometry> piecewise_steps(const std::vector<double>& lengths,
                                             const std::vector<double>& angles) {
    std::vector<Isometry> steps;
    for (size_t k = 0; k < lengths.size(); ++k) {
        Isometry s = translate_up(lengths[k]);
        if (k > 0) {
            double side = (k % 2 == 1) ? 1.0 : -1.0;
            s = compose(rotate_about_i(side * (angles[k - 1] - pi)), s);
        }
        steps.push_back(s);
    }
    return steps;
}

// (steps[from] * ... * steps[to-1]) applied to p, composed stepwise
inline Point chain_apply(const std::vector<Isometry>& steps, size_t from, size_t to, Point p) {
    for (size_t j = to; j > from; --j) p = apply(steps[j - 1], p);
    return p;
}

// inverse chain: (steps[from] * ... * steps[to-1])^{-1} applied to p
inline Point chain_apply_inverse(const std::vector<Isometry>& steps, size_t from, size_t to,
                                 Point p) {
    for (size_t j = from; j < to; ++j) p = apply(steps[j].inverse(), p);
    return p;
}

} // namespace horolab
