#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "horolab/boundary.hpp"
#include "horolab/calibrate.hpp"
#include "horolab/rng.hpp"

using namespace horolab;

namespace {

const IdealPoint inf_pt = IdealPoint::infinity();

// boundary point at prescribed angular offset from the direction to xi
IdealPoint offset_endpoint(const Point& x, const IdealPoint& xi, double dtheta) {
    double base = direction_toward(x, xi);
    return ray_endpoint(UnitTangent(x, base + dtheta));
}

// finite-t oracle for the Busemann cocycle: d(x, xi_t) - d(y, xi_t)
double busemann_oracle(const IdealPoint& xi, const Point& x, const Point& y) {
    GeodesicLine ray = line_toward(x, xi);
    double tau0 = ray.tau_of(x);
    double t = 38.0;
    return dist(x, ray.point_at(tau0 + t)) - dist(y, ray.point_at(tau0 + t));
}

} // namespace

TEST_CASE("busemann closed form matches the finite-t definition") {
    CHECK(busemann(inf_pt, Point(0, 1), Point(0, std::exp(1.0))) == Catch::Approx(1.0).margin(1e-12));
    CHECK(busemann(IdealPoint(0.7), Point(0.2, 1.4), Point(0.2, 1.4)) == 0.0);
    CHECK(busemann(IdealPoint(0), Point(0, 1), Point(0, 2)) ==
          Catch::Approx(-std::log(2.0)).margin(1e-12));
    CHECK(busemann_oracle(IdealPoint(0), Point(0, 1), Point(0, 2)) ==
          Catch::Approx(-std::log(2.0)).margin(1e-8));

    Rng rng(21);
    for (int i = 0; i < 400; ++i) {
        Point x = rng.point(), y = rng.point();
        IdealPoint xi = rng.uniform() < 0.2 ? inf_pt : IdealPoint(rng.uniform(-6, 6));
        CHECK(busemann(xi, x, y) == Catch::Approx(busemann_oracle(xi, x, y)).margin(1e-7));
    }
}

TEST_CASE("busemann cocycle identity, bound, and ray normalization") {
    Rng rng(22);
    for (int i = 0; i < 3000; ++i) {
        Point x = rng.point(), y = rng.point(), z = rng.point();
        IdealPoint xi = rng.uniform() < 0.2 ? inf_pt : IdealPoint(rng.uniform(-6, 6));
        double bxy = busemann(xi, x, y), byz = busemann(xi, y, z), bxz = busemann(xi, x, z);
        CHECK(bxy + byz == Catch::Approx(bxz).margin(1e-9));
        CHECK(std::fabs(bxy) <= dist(x, y) + 1e-10);
        // along the ray from x toward xi, beta_xi(x, xi_t) = t
        GeodesicLine ray = line_toward(x, xi);
        double t = rng.uniform(0.1, 12.0);
        CHECK(busemann(xi, x, ray.point_at(ray.tau_of(x) + t)) == Catch::Approx(t).margin(1e-9));
    }
}

TEST_CASE("gromov product of interior points") {
    Point x(1, 1), z(0, 2), w(0, 0.5);
    CHECK(gromov_product_points(x, z, z) == Catch::Approx(dist(x, z)).margin(1e-12));
    CHECK(gromov_product_points(z, z, w) == Catch::Approx(0.0).margin(1e-12));
    double expected = 0.5 * (dist(x, z) + dist(x, w) - std::log(4.0));
    CHECK(gromov_product_points(x, z, w) == Catch::Approx(expected).margin(1e-12));
}

TEST_CASE("gromov product of boundary points against the finite-t limit") {
    CHECK(gromov_product_boundary(Point(0, 1), IdealPoint(0), inf_pt) ==
          Catch::Approx(0.0).margin(1e-12));
    CHECK(std::isinf(gromov_product_boundary(Point(0, 1), IdealPoint(2), IdealPoint(2))));
    CHECK(gromov_product_boundary(Point(0, 1), IdealPoint(2), IdealPoint(-2)) ==
          Catch::Approx(std::log(1.25)).margin(1e-10));

    Rng rng(23);
    for (int i = 0; i < 300; ++i) {
        Point x = rng.point(2, 1);
        IdealPoint xi(rng.uniform(-5, 5)), eta(rng.uniform(-5, 5));
        if (std::fabs(xi.value - eta.value) < 0.05) continue;
        // limit of <xi_t, eta_t>_x along the two rays
        GeodesicLine r1 = line_toward(x, xi), r2 = line_toward(x, eta);
        double t = 36.0;
        double fin = gromov_product_points(x, r1.point_at(r1.tau_of(x) + t),
                                           r2.point_at(r2.tau_of(x) + t));
        CHECK(gromov_product_boundary(x, xi, eta) == Catch::Approx(fin).margin(1e-8));
    }
}

TEST_CASE("visual metric values and axioms") {
    CHECK(visual_dist(Point(0, 1), IdealPoint(0), inf_pt) == Catch::Approx(1.0).margin(1e-12));
    CHECK(visual_dist(Point(0.3, 2), IdealPoint(1), IdealPoint(1)) == 0.0);
    CHECK(visual_dist(Point(0, 1), IdealPoint(2), IdealPoint(-2)) == Catch::Approx(0.8).margin(1e-10));

    Rng rng(24);
    // closed-form oracle at any basepoint: d_x(xi,eta) = sin(angle_x(xi,eta)/2)
    for (int i = 0; i < 2000; ++i) {
        Point x = rng.point();
        double a1 = rng.angle(), a2 = rng.angle();
        IdealPoint xi = ray_endpoint(UnitTangent(x, a1)), eta = ray_endpoint(UnitTangent(x, a2));
        double expected = std::sin(angle_between(a1, a2) / 2.0);
        CHECK(visual_dist(x, xi, eta) == Catch::Approx(expected).margin(1e-9));
    }
    // metric axioms on random triples
    for (int i = 0; i < 10000; ++i) {
        Point x = rng.point(2, 1);
        IdealPoint a(rng.uniform(-8, 8)), b(rng.uniform(-8, 8)), c(rng.uniform(-8, 8));
        double ab = visual_dist(x, a, b), ba = visual_dist(x, b, a);
        CHECK(ab == Catch::Approx(ba).margin(1e-12));
        CHECK(ab <= 1.0 + 1e-12);
        CHECK(visual_dist(x, a, c) <= ab + visual_dist(x, b, c) + 1e-9);
        if (a.value != b.value) CHECK(ab > 0.0);
    }
}

TEST_CASE("conformal rescale identity and isometry invariance") {
    Point x(0, 1);
    CHECK(conformal_rescale(x, x, IdealPoint(1), IdealPoint(-3)) ==
          Catch::Approx(visual_dist(x, IdealPoint(1), IdealPoint(-3))).margin(1e-12));
    CHECK(conformal_rescale(Point(0, 1), Point(0, 2), IdealPoint(0), inf_pt) ==
          Catch::Approx(1.0).margin(1e-12));

    Rng rng(25);
    for (int i = 0; i < 3000; ++i) {
        Point p = rng.point(), q = rng.point();
        IdealPoint xi(rng.uniform(-6, 6)), eta(rng.uniform(-6, 6));
        CHECK(conformal_rescale(p, q, xi, eta) ==
              Catch::Approx(visual_dist(q, xi, eta)).margin(1e-9));
        double a = rng.uniform(-2, 2), b = rng.uniform(-2, 2), c = rng.uniform(-2, 2);
        if (std::fabs(a) < 1e-3) continue;
        Isometry g(a, b, c, (1.0 + b * c) / a);
        CHECK(visual_dist(apply(g, p), apply(g, xi), apply(g, eta)) ==
              Catch::Approx(visual_dist(p, xi, eta)).margin(1e-9));
    }
}

TEST_CASE("shadow membership") {
    Shadow s(Point(0, 1), Point(0, 2), 0.6);
    CHECK(shadow_contains(s, inf_pt));
    CHECK_FALSE(shadow_contains(Shadow(Point(0, 1), Point(0, 2), 0.5), IdealPoint(0)));
    CHECK(shadow_contains(Shadow(Point(0, 1), Point(0, 2), 0.7), IdealPoint(0)));

    Rng rng(26);
    for (int i = 0; i < 500; ++i) {
        Point x = rng.point(), t = rng.point();
        if (same_point(x, t, 1e-6)) continue;
        Shadow sh(x, t, rng.uniform(0.1, 2.0));
        CHECK(shadow_contains(sh, sh.axis_endpoint()));
    }
}

TEST_CASE("shadow ball sandwich") {
    // inner radius formula: x = i, x' = 2i, r = 1 -> r e^{-d} = 1/2
    double c0_1 = calibrate_c0(1.0, 20000, 77);
    auto sandwich = shadow_sandwich(Shadow(Point(0, 1), Point(0, 2), 1.0), c0_1);
    CHECK(sandwich.inner.radius == Catch::Approx(0.5).margin(1e-12));

    Rng rng(27);
    C0Table table = calibrate_c0_table({0.5, 1.0, 2.0}, 20000, 78);
    int inner_checked = 0, outer_checked = 0;
    while (inner_checked < 10000 || outer_checked < 10000) {
        Point x = rng.point(2, 1);
        GeodesicLine ray = line_of(UnitTangent(x, rng.angle()));
        Point target = ray.point_at(ray.tau_of(x) + rng.uniform(0.3, 7.0));
        double r = (rng.uniform() < 0.34) ? 0.5 : (rng.uniform() < 0.5 ? 1.0 : 2.0);
        Shadow sh(x, target, r);
        auto sw = shadow_sandwich(sh, table.get(r));
        IdealPoint xi = sh.axis_endpoint();

        // inner inclusion: eta within r e^{-d} visually lies in the shadow
        double off_in = std::min(1.0, sw.inner.radius * rng.uniform(0.0, 0.999));
        IdealPoint eta_in = offset_endpoint(x, xi, 2.0 * std::asin(off_in));
        if (visual_dist(x, xi, eta_in) < sw.inner.radius) {
            CHECK(shadow_contains(sh, eta_in));
            ++inner_checked;
        }
        // outer inclusion: a point inside the shadow lies in the outer ball
        GeodesicLine off = line_of(UnitTangent(target, rng.angle()));
        Point probe = off.point_at(off.tau_of(target) + rng.uniform(0.0, r * 0.999));
        IdealPoint eta_out = ray_endpoint_through(x, probe);
        if (shadow_contains(sh, eta_out)) {
            CHECK(sw.outer.contains(eta_out));
            ++outer_checked;
        }
    }
}

TEST_CASE("disjointness separation") {
    CHECK(disjointness_separation(1.0, 2.0) == Catch::Approx(6.0));
    CHECK(disjointness_separation(1.5, 2.0) > disjointness_separation(1.0, 2.0));
    CHECK(disjointness_separation(1.0, 2.5) > disjointness_separation(1.0, 2.0));
    CHECK_THROWS_AS(disjointness_separation(-1.0, 2.0), error);

    // Monte Carlo: whenever the hypotheses hold the inner balls are disjoint
    Rng rng(28);
    int checked = 0;
    while (checked < 10000) {
        Point x = rng.point(2, 1);
        double r = rng.uniform(0.2, 1.5);
        double dpar = rng.uniform(0.3, 3.0);
        double ell = rng.uniform(1.0, 6.0);
        GeodesicLine r1 = line_of(UnitTangent(x, rng.angle()));
        GeodesicLine r2 = line_of(UnitTangent(x, rng.angle()));
        Point y = r1.point_at(r1.tau_of(x) + rng.uniform(ell, ell + dpar));
        Point z = r2.point_at(r2.tau_of(x) + rng.uniform(ell, ell + dpar));
        if (!(dist(x, y) >= ell && dist(x, z) >= ell)) continue;
        if (dist(y, z) <= disjointness_separation(r, dpar)) continue;
        ++checked;
        double ry = r * std::exp(-dist(x, y)), rz = r * std::exp(-dist(x, z));
        double gap = visual_dist(x, ray_endpoint_through(x, y), ray_endpoint_through(x, z));
        CHECK(gap >= ry + rz);
    }
}

TEST_CASE("sector membership and arc") {
    Sector sec(inf_pt, 1.0, Point(0, 1));
    GeodesicLine ray = line_toward(sec.basepoint, sec.direction);
    Point xi_t = ray.point_at(ray.tau_of(sec.basepoint) + 1.0);
    CHECK(sector_membership(sec, xi_t));
    CHECK_FALSE(sector_membership(sec, sec.basepoint));
    CHECK(sector_membership(sec, Point(0, 3)));  // projects to height 3 >= e

    // the arc of D(infinity, t) from i has endpoints +-cosh t + sinh t = +-e^t
    auto arc = sector_arc(sec);
    CHECK(std::fabs(arc.lo.value) == Catch::Approx(std::exp(1.0)).margin(1e-9));
    CHECK(std::fabs(arc.hi.value) == Catch::Approx(std::exp(1.0)).margin(1e-9));
    CHECK(sector_membership(sec, IdealPoint(std::exp(1.0) + 0.01)));
    CHECK_FALSE(sector_membership(sec, IdealPoint(std::exp(1.0) - 0.01)));
    CHECK(sector_membership(sec, inf_pt));

    CHECK(angle_to_sector(arc, pi / 2) == 0.0);
    CHECK(angle_to_sector(arc, 3 * pi / 2) > 1.0);
}

TEST_CASE("sector sandwich with the hyperbolicity constant") {
    double rho = 1.0;  // configured Gromov constant
    Rng rng(29);
    for (int i = 0; i < 4000; ++i) {
        Point o = rng.point(1.5, 0.8);
        IdealPoint xi = ray_endpoint(UnitTangent(o, rng.angle()));
        double t = rng.uniform(2.0 * rho, 9.0);
        Sector sec(xi, t, o);
        double v = rng.uniform(0.0, 1.0) * std::exp(-(t - 2.0 * rho));
        IdealPoint eta = offset_endpoint(o, xi, 2.0 * std::asin(std::min(1.0, v)));
        double vd = visual_dist(o, xi, eta);
        bool member = sector_membership(sec, eta);
        if (vd < std::exp(-(t + rho))) CHECK(member);
        if (member) CHECK(vd <= std::exp(-(t - 2.0 * rho)) + 1e-12);
    }
}

TEST_CASE("ray endpoints") {
    CHECK(ray_endpoint(UnitTangent(Point(0, 1), pi / 2)).inf);
    IdealPoint down = ray_endpoint(UnitTangent(Point(0, 1), 3 * pi / 2));
    CHECK_FALSE(down.inf);
    CHECK(down.value == Catch::Approx(0.0).margin(1e-12));
    IdealPoint right = ray_endpoint(UnitTangent(Point(0, 1), 0.0));
    CHECK(right.value == Catch::Approx(1.0).margin(1e-12));

    // numeric oracle: follow the line chart to large tau and read off the limit
    GeodesicLine L = line_of(UnitTangent(Point(0, 1), 0.0));
    Point deep = L.point_at(L.tau_of(Point(0, 1)) + 30.0);
    CHECK(deep.x == Catch::Approx(1.0).margin(1e-9));
    CHECK(deep.y < 1e-9);
}
