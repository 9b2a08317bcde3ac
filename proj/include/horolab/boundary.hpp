#pragma once

#include <cmath>
#include <limits>

#include "horolab/geometry.hpp"

namespace horolab {

// Point of the boundary at infinity: a finite real coordinate or infinity.
struct IdealPoint {
    double value = 0.0;
    bool inf = false;

    IdealPoint() = default;
    explicit IdealPoint(double v) : value(v) {
        if (!std::isfinite(v)) fail(errc::invalid_argument, "finite IdealPoint requires a finite value");
    }
    static IdealPoint infinity() {
        IdealPoint xi;
        xi.inf = true;
        xi.value = std::numeric_limits<double>::infinity();
        return xi;
    }
};

inline bool same_ideal(const IdealPoint& a, const IdealPoint& b) {
    if (a.inf || b.inf) return a.inf && b.inf;
    return a.value == b.value;
}

inline IdealPoint apply(const Isometry& g, const IdealPoint& xi) {
    if (xi.inf) {
        if (g.c == 0.0) return IdealPoint::infinity();
        return IdealPoint(g.a / g.c);
    }
    double den = g.c * xi.value + g.d;
    if (den == 0.0) return IdealPoint::infinity();
    return IdealPoint((g.a * xi.value + g.b) / den);
}

inline GeodesicLine line_toward(const Point& p, const IdealPoint& xi) {
    return line_toward(p, xi.value, xi.inf);
}

inline GeodesicLine line_between(const IdealPoint& xi, const IdealPoint& eta) {
    if (same_ideal(xi, eta)) fail(errc::invalid_argument, "line_between: coincident ideal points");
    GeodesicLine L;
    L.back = xi.inf ? 0.0 : xi.value;
    L.back_inf = xi.inf;
    L.fwd = eta.inf ? 0.0 : eta.value;
    L.fwd_inf = eta.inf;
    L.to_axis = detail::axis_chart(L.back, L.back_inf, L.fwd, L.fwd_inf);
    L.from_axis = L.to_axis.inverse();
    return L;
}

// forward ideal endpoint of the geodesic ray generated by v
inline IdealPoint ray_endpoint(const UnitTangent& v) {
    GeodesicLine L = line_of(v);
    return L.fwd_inf ? IdealPoint::infinity() : IdealPoint(L.fwd);
}

// ideal endpoint of the ray based at x passing through x'
inline IdealPoint ray_endpoint_through(const Point& x, const Point& x2) {
    GeodesicLine L = line_through(x, x2);
    return L.fwd_inf ? IdealPoint::infinity() : IdealPoint(L.fwd);
}

// direction angle at base of the ray [base, xi)
inline double direction_toward(const Point& base, const IdealPoint& xi) {
    return line_toward(base, xi).direction_at(base);
}

// Busemann cocycle beta_xi(x, y), normalized so beta_xi(x, xi_t) = t along the
// ray from x toward xi. Closed form via horocyclic height.
inline double busemann(const IdealPoint& xi, const Point& x, const Point& y) {
    auto b = [&](const Point& p) {
        if (xi.inf) return -std::log(p.y);
        double dx = p.x - xi.value;
        return std::log((dx * dx + p.y * p.y) / p.y);
    };
    return b(x) - b(y);
}

inline double gromov_product_points(const Point& x, const Point& z, const Point& w) {
    return 0.5 * (dist(z, x) + dist(x, w) - dist(z, w));
}

// Gromov product of two ideal points at x, evaluated through the Busemann
// formula at the closest point of the geodesic (xi, eta) to x.
inline double gromov_product_boundary(const Point& x, const IdealPoint& xi, const IdealPoint& eta) {
    if (same_ideal(xi, eta)) return std::numeric_limits<double>::infinity();
    GeodesicLine L = line_between(xi, eta);
    Point closest = L.point_at(L.projection_tau(x));
    return 0.5 * (busemann(xi, x, closest) + busemann(eta, x, closest));
}

// Gromov-Bourdon visual metric d_x = e^{-<xi,eta>_x}, values in [0, 1].
inline double visual_dist(const Point& x, const IdealPoint& xi, const IdealPoint& eta) {
    double gp = gromov_product_boundary(x, xi, eta);
    if (std::isinf(gp)) return 0.0;
    return std::min(1.0, std::exp(-gp));
}

// conformal change of basepoint:
// d_{x2}(xi,eta) = exp((beta_xi(x,x2) + beta_eta(x,x2))/2) d_x(xi,eta)
inline double conformal_rescale(const Point& x, const Point& x2, const IdealPoint& xi,
                                const IdealPoint& eta) {
    double factor = std::exp(0.5 * (busemann(xi, x, x2) + busemann(eta, x, x2)));
    return factor * visual_dist(x, xi, eta);
}

// visual ball B_x(center, radius) on the boundary
struct BoundaryBall {
    Point basepoint;
    IdealPoint center;
    double radius = 0.0;

    BoundaryBall() = default;
    BoundaryBall(Point base, IdealPoint c, double r) : basepoint(base), center(c), radius(r) {
        if (!(r > 0.0)) fail(errc::invalid_argument, "BoundaryBall requires radius > 0");
    }

    bool contains(const IdealPoint& eta) const {
        return visual_dist(basepoint, center, eta) < radius;
    }
};

// shadow at infinity from x of the ball B(x', r)
struct Shadow {
    Point viewpoint;
    Point target;
    double radius = 0.0;

    Shadow() = default;
    Shadow(Point x, Point x2, double r) : viewpoint(x), target(x2), radius(r) {
        if (same_point(x, x2)) fail(errc::invalid_argument, "Shadow requires x != x'");
        if (!(r > 0.0)) fail(errc::invalid_argument, "Shadow requires r > 0");
    }

    IdealPoint axis_endpoint() const { return ray_endpoint_through(viewpoint, target); }
};

// distance from p to the geodesic ray [base, xi)
inline double dist_to_ray(const Point& base, const IdealPoint& xi, const Point& p) {
    GeodesicLine L = line_toward(base, xi);
    if (L.projection_tau(p) >= L.tau_of(base)) return L.dist_to_line(p);
    return dist(base, p);
}

inline bool shadow_contains(const Shadow& s, const IdealPoint& eta) {
    return dist_to_ray(s.viewpoint, eta, s.target) < s.radius;
}

struct ShadowSandwich {
    BoundaryBall inner;
    BoundaryBall outer;
};

// ball sandwich of a shadow: inner radius r e^{-d} is exact, outer radius
// c0(r) e^{-d} uses the calibrated constant supplied by the caller
inline ShadowSandwich shadow_sandwich(const Shadow& s, double c0) {
    double d = dist(s.viewpoint, s.target);
    IdealPoint xi = s.axis_endpoint();
    return {BoundaryBall(s.viewpoint, xi, s.radius * std::exp(-d)),
            BoundaryBall(s.viewpoint, xi, c0 * std::exp(-d))};
}

// sufficient orbit-point separation q(r, d) = 4r + d for disjoint inner balls
inline double disjointness_separation(double r, double d) {
    if (!(r > 0.0) || !(d > 0.0))
        fail(errc::invalid_argument, "disjointness_separation requires r > 0 and d > 0");
    return 4.0 * r + d;
}

// Sector S(xi, t): closure of the set of points projecting orthogonally into
// [xi_t, xi) on the ray [o, xi). D(xi, t) is its trace on the boundary.
struct Sector {
    IdealPoint direction;
    double depth = 0.0;
    Point basepoint;

    Sector() = default;
    Sector(IdealPoint xi, double t, Point o) : direction(xi), depth(t), basepoint(o) {
        if (t < 0.0) fail(errc::invalid_argument, "Sector requires depth >= 0");
    }
};

inline bool sector_membership(const Sector& sec, const Point& p) {
    GeodesicLine L = line_toward(sec.basepoint, sec.direction);
    return L.projection_tau(p) - L.tau_of(sec.basepoint) >= sec.depth;
}

inline bool sector_membership(const Sector& sec, const IdealPoint& eta) {
    if (same_ideal(eta, sec.direction)) return true;
    GeodesicLine L = line_toward(sec.basepoint, sec.direction);
    IdealPoint w = apply(L.to_axis, eta);
    if (w.inf) return true;            // chart sends only the sector direction to infinity
    if (w.value == 0.0) return false;  // backward endpoint, projects behind the basepoint
    return std::log(std::fabs(w.value)) - L.tau_of(sec.basepoint) >= sec.depth;
}

// ideal endpoints of the bounding perpendicular of S(xi, t); the boundary arc
// D(xi, t) is the arc between them containing xi
struct SectorArc {
    IdealPoint lo, hi;       // arc endpoints
    double theta_lo, theta_hi;  // direction angles at the basepoint
    double theta_center;        // direction to xi
};

inline SectorArc sector_arc(const Sector& sec) {
    GeodesicLine L = line_toward(sec.basepoint, sec.direction);
    double tau_edge = L.tau_of(sec.basepoint) + sec.depth;
    double u = std::exp(tau_edge);
    IdealPoint e1 = apply(L.from_axis, IdealPoint(u));
    IdealPoint e2 = apply(L.from_axis, IdealPoint(-u));
    SectorArc arc;
    arc.lo = e1;
    arc.hi = e2;
    arc.theta_lo = direction_toward(sec.basepoint, e1);
    arc.theta_hi = direction_toward(sec.basepoint, e2);
    arc.theta_center = L.direction_at(sec.basepoint);
    return arc;
}

// smallest interior angle at the basepoint between direction phi and any
// direction into the sector arc; 0 if phi points into the arc
inline double angle_to_sector(const SectorArc& arc, double phi) {
    // the arc of directions is the one from theta_lo to theta_hi containing theta_center
    double a = normalize_angle(arc.theta_lo);
    double b = normalize_angle(arc.theta_hi);
    double c = normalize_angle(arc.theta_center);
    double p = normalize_angle(phi);
    auto ccw = [](double from, double to) { return normalize_angle(to - from); };
    bool center_in_ab = ccw(a, c) <= ccw(a, b);
    double lo = center_in_ab ? a : b;
    double hi = center_in_ab ? b : a;
    if (ccw(lo, p) <= ccw(lo, hi)) return 0.0;
    return std::min(angle_between(p, lo), angle_between(p, hi));
}

} // namespace horolab
