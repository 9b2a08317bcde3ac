#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "horolab/excursion.hpp"
#include "horolab/rng.hpp"

using namespace horolab;

namespace {

struct BallFixture {
    OrbitBall ball;
    OrbitIndex index;
    BallFixture(const GroupSpec& g, EnumerationBudget budget)
        : ball(enumerate_ball(g, budget)), index(make_orbit_index(ball.elements)) {}

    const OrbitElement& by_word(const std::string& w) const {
        for (const auto& e : ball.elements)
            if (ball.word_string(e) == w) return e;
        fail(errc::data, "element not found: " + w);
    }
};

BallFixture& parabolic_fixture() {
    static BallFixture f(parabolic_group(), {1200, 13.0, 0.5});
    return f;
}

std::string shift_word(int n) {
    std::string s;
    for (int i = 0; i < n; ++i) {
        if (!s.empty()) s += '.';
        s += "t";
    }
    return s;
}

} // namespace

TEST_CASE("excursion profile basics") {
    auto& f = parabolic_fixture();
    CompactSpec k(Point(0, 1), 1.0);

    // identity-adjacent short element: wholly inside
    const OrbitElement& one = f.by_word("t");
    REQUIRE(one.distance < k.rho);
    auto prof = excursion_profile(one, k, f.ball, f.index);
    CHECK(prof.fraction_inside == 1.0);

    // shift by 64 rises to height ~32; at most a quarter of it is low
    const OrbitElement& big = f.by_word(shift_word(64));
    auto prof64 = excursion_profile(big, k, f.ball, f.index);
    CHECK(prof64.fraction_inside <= 0.25);
    CHECK(prof64.fraction_inside > 0.0);
    CHECK(prof64.first_exit <= prof64.last_entry);
    CHECK(prof64.last_entry <= big.distance);

    // fraction inside is nondecreasing in the padding
    double prev = 0.0;
    for (double pad : {0.0, 0.5, 1.0, 2.0}) {
        CompactSpec padded(Point(0, 1), 1.0, pad);
        double fr = excursion_profile(big, padded, f.ball, f.index).fraction_inside;
        CHECK(fr >= prev - 1e-12);
        prev = fr;
    }
}

TEST_CASE("coverage certification rejects out-of-reach queries") {
    BallFixture shallow(parabolic_group(), {40, 5.0, 0.5});
    CompactSpec k(Point(0, 1), 2.0);
    const OrbitElement* deep = nullptr;
    for (const auto& e : shallow.ball.elements)
        if (e.distance > coverage_cutoff(shallow.ball, k)) deep = &e;
    REQUIRE(deep != nullptr);
    try {
        excursion_profile(*deep, k, shallow.ball, shallow.index);
        FAIL("expected coverage error");
    } catch (const error& e) {
        CHECK(e.kind() == errc::coverage);
    }
}

TEST_CASE("S_alpha filter") {
    auto& f = parabolic_fixture();
    CompactSpec k(Point(0, 1), 1.0);

    std::vector<OrbitElement> usable;
    for (const auto& e : f.ball.elements)
        if (e.distance <= coverage_cutoff(f.ball, k)) usable.push_back(e);

    // alpha = 1 keeps everything above the distance floor
    auto all = filter_S_alpha(usable, k, 1.0, 3.0, f.ball, f.index);
    std::size_t expect = 0;
    for (const auto& e : usable)
        if (e.distance >= 3.0) ++expect;
    CHECK(all.indices.size() == expect);

    // alpha = 0.3: the pass set is cofinite in n
    auto passed = filter_S_alpha(usable, k, 0.3, 0.0, f.ball, f.index);
    CHECK(!passed.indices.empty());
    double min_pass = std::numeric_limits<double>::infinity();
    for (std::size_t i : passed.indices)
        min_pass = std::min(min_pass, usable[i].distance);
    std::size_t above = 0;
    for (const auto& e : usable)
        if (e.distance >= min_pass) ++above;
    CHECK(above == passed.indices.size());  // every element beyond the cut passes
    CHECK(min_pass > 0.0);                  // and some small ones fail

    CHECK_THROWS_AS(filter_S_alpha(usable, k, 0.0, 0.0, f.ball, f.index), error);
}

TEST_CASE("fundamental group out of K membership") {
    auto& f = parabolic_fixture();
    CompactSpec k(Point(0, 1), 1.0);

    // vacuous window below 2 Delta
    const OrbitElement& small = f.by_word("t.t");
    REQUIRE(small.distance <= 2.0 * k.diameter());
    CHECK(gamma_K_membership(small, k, f.ball, f.index));

    // the long excursion is out of K
    CHECK(gamma_K_membership(f.by_word(shift_word(64)), k, f.ball, f.index));

    // a Gamma(2) word that stays in the thick part is rejected
    BallFixture g2(gamma2_group(), {40, 10.0, 2.5});
    CompactSpec k2(Point(0, 1), 1.0);
    int rejected = 0, accepted = 0;
    for (const auto& e : g2.ball.elements) {
        if (e.distance <= coverage_cutoff(g2.ball, k2) && e.distance > 2.0 * k2.diameter()) {
            if (gamma_K_membership(e, k2, g2.ball, g2.index)) ++accepted;
            else ++rejected;
        }
    }
    CHECK(rejected > 0);
    CHECK(accepted > 0);
}

TEST_CASE("membership conjugation symmetry") {
    GroupSpec g = gamma2_group();
    BallFixture base(g, {40, 9.0, 2.5});
    CompactSpec k(Point(0, 1), 0.8);

    Isometry conj = g.generators[0].matrix;  // recentre at t*o
    GroupSpec moved = g;
    moved.basepoint = apply(conj, g.basepoint);
    BallFixture recentred(moved, {40, 9.0, 2.5});

    Rng rng(41);
    int checked = 0;
    while (checked < 60) {
        const auto& e = base.ball.elements[rng.below(base.ball.elements.size())];
        if (e.distance > coverage_cutoff(base.ball, k) - 2.0 || e.distance == 0.0) continue;
        // membership of gamma with K~ recentred at g*o equals membership of
        // g gamma g^-1 measured from o
        Isometry conjugated = compose(compose(conj, e.matrix), conj.inverse());
        Point image = apply(conjugated, g.basepoint);
        double d = dist(g.basepoint, image);
        if (d > coverage_cutoff(base.ball, k)) continue;
        OrbitElement twin{conjugated, image, d, e.node};

        // recentred membership of gamma: segment [g o, gamma g o] against gamma(g o)
        Point rim = apply(e.matrix, moved.basepoint);
        OrbitElement orig{e.matrix, rim, dist(moved.basepoint, rim), e.node};
        if (orig.distance > coverage_cutoff(recentred.ball, k)) continue;

        int borderline = 0;
        bool lhs = gamma_K_membership(orig, k, recentred.ball, recentred.index, 0.05, &borderline);
        bool rhs = gamma_K_membership(twin, k, base.ball, base.index, 0.05, &borderline);
        if (borderline > 0) continue;  // skip threshold-straddling samples
        CHECK(lhs == rhs);
        ++checked;
    }
}

TEST_CASE("delta_K estimates") {
    // parabolic: the filter is cofinite, the exponent survives at any rho
    for (double rho : {0.6, 1.0}) {
        CompactSpec k(Point(0, 1), rho);
        ExponentEstimate est = estimate_delta_K(parabolic_group(), k, {4000, 16.0, 0.5}, 0.05);
        CHECK(est.value == Catch::Approx(0.5).margin(0.07));
    }

    // Schottky with a large compact: the out-of-K set stays finite
    CompactSpec ks(Point(0, 1), 2.0);
    BallFixture s8(schottky_group(), {16, 18.0, 2.5});
    ExponentEstimate es = estimate_delta_K(s8.ball, s8.index, ks);
    CHECK(es.value <= 0.05);

    // membership counts stabilize as depth grows
    BallFixture s10(schottky_group(), {17, 19.0, 2.5});
    auto count_members = [&](const BallFixture& f, double cutoff) {
        int n = 0;
        for (const auto& e : f.ball.elements)
            if (e.distance <= cutoff && gamma_K_membership(e, ks, f.ball, f.index)) ++n;
        return n;
    };
    double cut = std::min(coverage_cutoff(s8.ball, ks), coverage_cutoff(s10.ball, ks)) - 0.5;
    CHECK(count_members(s8, cut) == count_members(s10, cut));
}

TEST_CASE("delta_inf trends") {
    // convex cocompact: entropy at infinity 0
    DeltaInfEstimate schottky =
        estimate_delta_inf(schottky_group(), {1.0, 1.5, 2.0}, {16, 18.0, 2.5});
    CHECK(schottky.extrapolated <= 0.05);

    // hyperbolic cyclic: linear growth survives any filter
    DeltaInfEstimate cyclic =
        estimate_delta_inf(hyperbolic_cyclic_group(), {0.8, 1.2}, {40, 60.0, 0.5});
    CHECK(cyclic.extrapolated <= 0.05);

    // Gamma(2): cusp exponent 1/2, monotone within stderr
    DeltaInfEstimate g2 = estimate_delta_inf(gamma2_group(), {0.5, 0.75, 1.0}, {1500, 13.0, 2.5});
    CHECK(g2.extrapolated == Catch::Approx(0.5).margin(0.1));
    CHECK(g2.monotone_violations == 0);
    for (size_t i = 1; i < g2.per_rho.size(); ++i)
        CHECK(g2.per_rho[i].second.value <=
              g2.per_rho[i - 1].second.value + g2.per_rho[i - 1].second.stderr_ +
                  g2.per_rho[i].second.stderr_);
}

TEST_CASE("S_alpha growth trend in alpha") {
    BallFixture g2(gamma2_group(), {60, 10.5, 2.5});
    CompactSpec k(Point(0, 1), 1.0);
    double cutoff = coverage_cutoff(g2.ball, k);
    std::vector<OrbitElement> usable;
    for (const auto& e : g2.ball.elements)
        if (e.distance <= cutoff) usable.push_back(e);

    auto growth = [&](double alpha) {
        auto res = filter_S_alpha(usable, k, alpha, 0.0, g2.ball, g2.index);
        // crude tail growth rate of the annulus counts
        int hi = static_cast<int>(res.annulus.size()) - 1;
        double top = 0.0, mid = 0.0;
        for (int ell = hi - 2; ell <= hi; ++ell) top += static_cast<double>(res.annulus[ell]);
        for (int ell = hi - 5; ell <= hi - 3; ++ell) mid += static_cast<double>(res.annulus[ell]);
        if (mid <= 0.0 || top <= 0.0) return 0.0;
        return std::log(top / mid) / 3.0;
    };
    double g_small = growth(0.25), g_mid = growth(0.5), g_large = growth(1.0);
    CHECK(g_small <= g_mid + 0.15);
    CHECK(g_mid <= g_large + 0.15);
}

TEST_CASE("lemma kr window") {
    auto& f = parabolic_fixture();
    CompactSpec k(Point(0, 1), 1.0);
    const OrbitElement& e = f.by_word(shift_word(64));

    auto w = lemma_kr_window(e, Isometry::identity(), k, f.ball, f.index);
    CHECK(w.head_lo == 0.0);
    CHECK(w.head_hi == Catch::Approx(4.0 * k.diameter() + std::log(2.0)).margin(1e-12));
    CHECK(w.tail_hi - w.tail_lo == Catch::Approx(3.0 * k.diameter()).margin(1e-12));

    // window lengths do not depend on the element
    auto w2 = lemma_kr_window(f.by_word(shift_word(128)), Isometry::identity(), k, f.ball, f.index);
    CHECK(w2.head_hi == Catch::Approx(w.head_hi).margin(1e-12));
    CHECK(w2.tail_hi - w2.tail_lo == Catch::Approx(w.tail_hi - w.tail_lo).margin(1e-12));

    // sampled contract with a sub-compact R' of radius 0.4 and g a short prefix
    for (const Isometry& g : {Isometry::identity(), parabolic_group().generators[0].matrix}) {
        auto win = lemma_kr_window(e, g, k, f.ball, f.index);
        Point o = f.ball.group.basepoint;
        Point far = apply(compose(g, e.matrix), o);
        double L = dist(o, far);
        GeodesicLine line = line_through(o, far);
        double tau0 = line.tau_of(o);
        for (double t = 0.0; t <= L; t += 0.05) {
            if (f.index.any_within(line.point_at(tau0 + t), 0.4)) {
                bool in_head = t >= win.head_lo && t <= win.head_hi;
                bool in_tail = t >= win.tail_lo && t <= win.tail_hi;
                CHECK((in_head || in_tail));
            }
        }
    }

    // non-members are rejected
    BallFixture g2(gamma2_group(), {40, 10.0, 2.5});
    CompactSpec k2(Point(0, 1), 1.0);
    for (const auto& cand : g2.ball.elements) {
        if (cand.distance > 2.0 * k2.diameter() &&
            cand.distance <= coverage_cutoff(g2.ball, k2) &&
            !gamma_K_membership(cand, k2, g2.ball, g2.index)) {
            CHECK_THROWS_AS(lemma_kr_window(cand, Isometry::identity(), k2, g2.ball, g2.index),
                            error);
            break;
        }
    }
}
