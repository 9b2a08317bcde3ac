#pragma once

#include <functional>
#include <optional>

#include "horolab/boundary.hpp"
#include "horolab/excursion.hpp"
#include "horolab/rng.hpp"

namespace horolab {

// geodesic flow: move the base point at unit speed along the tangent geodesic
inline UnitTangent flow_point(const UnitTangent& v, double t) {
    if (t == 0.0) return v;
    GeodesicLine L = line_of(v);
    double tau = L.tau_of(v.base);
    Point base = L.point_at(tau + t);
    return UnitTangent(base, L.direction_at(base));
}

struct TrajectorySample {
    double t = 0.0;
    Point rep;                   // quotient representative of the base point
    double min_orbit_dist = 0.0;  // distance to the orbit of the basepoint
};

struct Trajectory {
    UnitTangent v0;
    double horizon = 0.0;
    double step = 0.0;
    std::vector<TrajectorySample> samples;
};

// Flow sampler that renormalizes by deck transformations: the moving tangent
// is pulled back toward the basepoint whenever a cover element shortens its
// distance, so coordinates stay representable along arbitrarily long rays and
// orbit queries stay inside the certified cover. Renormalization choices are
// canonical (first improving element in canonical order).
class QuotientWalker {
public:
    QuotientWalker(const OrbitBall& cover, const OrbitIndex& index, double renorm_threshold = 6.0)
        : cover_(cover), index_(index), threshold_(renorm_threshold) {}

    const OrbitBall& cover() const { return cover_; }

    // distance from p to the orbit; exact whenever the result is within the
    // certified margin of the cover
    double orbit_dist(const Point& p) const { return index_.min_dist(p); }

    UnitTangent renormalize(UnitTangent v) const {
        const Point o = cover_.group.basepoint;
        for (int guard = 0; guard < 64; ++guard) {
            double d = dist(o, v.base);
            if (d <= threshold_) break;
            bool improved = false;
            for (const auto& e : cover_.elements) {
                if (e.distance > 2.0 * threshold_ + 1.0) break;
                Point moved = apply(e.matrix.inverse(), v.base);
                if (dist(o, moved) < d - 0.5) {
                    v = apply(e.matrix.inverse(), v);
                    improved = true;
                    break;
                }
            }
            if (!improved) break;
        }
        return v;
    }

    Trajectory run(const UnitTangent& v0, double horizon, double step) const {
        if (!(horizon > 0.0) || !(step > 0.0))
            fail(errc::invalid_argument, "trajectory requires positive horizon and step");
        Trajectory out;
        out.v0 = v0;
        out.horizon = horizon;
        out.step = step;
        UnitTangent v = renormalize(v0);
        double t = 0.0;
        out.samples.push_back({0.0, v.base, orbit_dist(v.base)});
        while (t < horizon) {
            double h = std::min(step, horizon - t);
            v = renormalize(flow_point(v, h));
            t += h;
            out.samples.push_back({t, v.base, orbit_dist(v.base)});
        }
        return out;
    }

private:
    const OrbitBall& cover_;
    const OrbitIndex& index_;
    double threshold_;
};

// fraction of sampled time in [0, T] spent within rho of the orbit
inline double time_in_compact_fraction(const QuotientWalker& walker, const UnitTangent& v,
                                       double horizon, const CompactSpec& k, double step = 0.05) {
    Trajectory traj = walker.run(v, horizon, step);
    std::size_t inside = 0;
    for (const auto& s : traj.samples)
        if (s.min_orbit_dist <= k.rho + k.r_pad) ++inside;
    return static_cast<double>(inside) / traj.samples.size();
}

enum class trajectory_verdict { recurrent_like, divergent_like, diverges_on_average_like, inconclusive };

inline const char* verdict_name(trajectory_verdict v) {
    switch (v) {
        case trajectory_verdict::recurrent_like: return "recurrent-like";
        case trajectory_verdict::divergent_like: return "divergent-like";
        case trajectory_verdict::diverges_on_average_like: return "diverges-on-average-like";
        default: return "inconclusive";
    }
}

struct ClassificationThresholds {
    double theta_da = 0.05;   // compact fractions below this at the top horizons
    double theta_rec = 0.2;   // fractions above this stay recurrent-like
    double recurrence_radius = 1.0;
    int decay_window = 3;     // horizons over which fractions must decay
};

struct ClassificationReport {
    std::vector<double> horizons;
    std::vector<double> rhos;
    std::vector<std::vector<double>> fractions;  // [rho][horizon]
    trajectory_verdict verdict = trajectory_verdict::inconclusive;
    ClassificationThresholds thresholds;
    int returns_below_radius = 0;
    bool min_dist_eventually_monotone = false;
};

// Finite-horizon classification of a direction per the recurrent / divergent /
// diverges-on-average trichotomy. Verdicts are explicitly "-like": the
// asymptotic property is undecidable at finite horizon.
inline ClassificationReport classify_trajectory(const QuotientWalker& walker, const UnitTangent& v,
                                                std::vector<double> horizons,
                                                std::vector<double> rho_schedule,
                                                ClassificationThresholds thresholds = {},
                                                double step = 0.05) {
    if (horizons.empty() || rho_schedule.empty())
        fail(errc::invalid_argument, "classify_trajectory: empty schedules");
    for (size_t i = 1; i < horizons.size(); ++i)
        if (horizons[i] <= horizons[i - 1])
            fail(errc::invalid_argument, "classify_trajectory: horizons must increase");
    for (size_t i = 1; i < rho_schedule.size(); ++i)
        if (rho_schedule[i] <= rho_schedule[i - 1])
            fail(errc::invalid_argument, "classify_trajectory: rho schedule must increase");

    ClassificationReport rep;
    rep.horizons = horizons;
    rep.rhos = rho_schedule;
    rep.thresholds = thresholds;

    Trajectory traj = walker.run(v, horizons.back(), step);
    rep.fractions.assign(rho_schedule.size(), std::vector<double>(horizons.size(), 0.0));
    for (size_t r = 0; r < rho_schedule.size(); ++r) {
        size_t h = 0;
        size_t inside = 0, seen = 0;
        for (const auto& s : traj.samples) {
            while (h < horizons.size() && s.t > horizons[h] + 1e-12) {
                rep.fractions[r][h] = seen ? static_cast<double>(inside) / seen : 0.0;
                ++h;
            }
            ++seen;
            if (s.min_orbit_dist <= rho_schedule[r]) ++inside;
        }
        for (; h < horizons.size(); ++h)
            rep.fractions[r][h] = seen ? static_cast<double>(inside) / seen : 0.0;
    }

    // returns below the recurrence radius, counted as dips separated by exits
    bool below = false;
    double running_max = 0.0;
    double last_excursion_peak = 0.0;
    rep.min_dist_eventually_monotone = true;
    for (size_t i = 0; i < traj.samples.size(); ++i) {
        double d = traj.samples[i].min_orbit_dist;
        if (d <= thresholds.recurrence_radius) {
            if (!below) ++rep.returns_below_radius;
            below = true;
        } else {
            below = false;
        }
        running_max = std::max(running_max, d);
        (void)last_excursion_peak;
    }
    // monotone check on the tail third
    for (size_t i = traj.samples.size() * 2 / 3; i + 1 < traj.samples.size(); ++i)
        if (traj.samples[i + 1].min_orbit_dist < traj.samples[i].min_orbit_dist - 1e-9)
            rep.min_dist_eventually_monotone = false;

    int W = std::min<int>(thresholds.decay_window, static_cast<int>(horizons.size()));
    auto tail_decays_below = [&](size_t r) {
        size_t n = horizons.size();
        for (int j = 0; j < W; ++j) {
            size_t idx = n - W + j;
            if (rep.fractions[r][idx] > thresholds.theta_da) return false;
            if (idx > 0 && rep.fractions[r][idx] > rep.fractions[r][idx - 1] + 1e-9) return false;
        }
        return true;
    };

    bool da = rep.returns_below_radius >= 2;
    bool rec = true;
    for (size_t r = 0; r < rho_schedule.size(); ++r) {
        if (!tail_decays_below(r)) da = false;
        if (rep.fractions[r].back() < thresholds.theta_rec) rec = false;
    }
    if (da) rep.verdict = trajectory_verdict::diverges_on_average_like;
    else if (rep.min_dist_eventually_monotone &&
             traj.samples.back().min_orbit_dist > thresholds.recurrence_radius)
        rep.verdict = trajectory_verdict::divergent_like;
    else if (rec) rep.verdict = trajectory_verdict::recurrent_like;
    else rep.verdict = trajectory_verdict::inconclusive;
    return rep;
}

// metric on unit tangents, uniformly equivalent to the Sasaki metric: base
// distance joined with the angle gap after parallel transport along the
// connecting geodesic
inline double tangent_dist(const UnitTangent& u, const UnitTangent& w) {
    double base_gap = dist(u.base, w.base);
    double angle_gap;
    if (base_gap < 1e-12) {
        angle_gap = angle_between(u.theta, w.theta);
    } else {
        // transport w to u's base along [w.base, u.base] by the hyperbolic
        // translation with that axis
        GeodesicLine L = line_through(w.base, u.base);
        double half = 0.5 * base_gap;
        Isometry axis_translate =
            compose(L.from_axis, compose(translate_up(base_gap), L.to_axis));
        UnitTangent moved = apply(axis_translate, w);
        (void)half;
        angle_gap = angle_between(u.theta, moved.theta);
    }
    return std::max(base_gap, angle_gap);
}

struct DynBallQuery {
    UnitTangent v, w;
    double horizon = 0.0;
    double radius = 0.0;

    DynBallQuery(UnitTangent v_, UnitTangent w_, double T, double r)
        : v(v_), w(w_), horizon(T), radius(r) {
        if (!(T > 0.0) || !(r > 0.0))
            fail(errc::invalid_argument, "DynBallQuery requires T > 0 and r > 0");
    }
};

// sampled membership of w in the (T, r)-dynamical ball centered at v
inline bool dyn_ball_contains(const DynBallQuery& q, double step = 0.1) {
    for (double t = 0.0; t <= q.horizon + 1e-12; t += step) {
        double tt = std::min(t, q.horizon);
        if (tangent_dist(flow_point(q.v, tt), flow_point(q.w, tt)) > q.radius) return false;
    }
    return true;
}

struct InclusionReport {
    int verified = 0;
    int violations = 0;
    double fitted_C = 1.0;
    double c0 = 1.0;
};

// Monte Carlo check of the visual-ball / dynamical-ball inclusions: ideal
// points within c0^{-1} e^{-T} / C of the forward endpoint are reached by
// tangents r-close to w that stay in the (T, 4r)-dynamical ball.
inline InclusionReport dynball_shadow_inclusion_check(const Point& o, const UnitTangent& w,
                                                      double horizon, double radius, int samples,
                                                      double c0, double fitted_C, Rng& rng,
                                                      double step = 0.1) {
    InclusionReport rep;
    rep.fitted_C = fitted_C;
    rep.c0 = c0;
    IdealPoint fwd = ray_endpoint(w);
    double ball_radius = std::exp(-horizon) / (c0 * fitted_C);
    for (int i = 0; i < samples; ++i) {
        double vis = ball_radius * rng.uniform();
        double side = rng.uniform() < 0.5 ? 1.0 : -1.0;
        double dtheta = 2.0 * std::asin(std::min(1.0, vis)) * side;
        UnitTangent q(w.base, w.theta + dtheta);
        // q is a tangent at distance <= r from w whose ray ends in the ball
        if (tangent_dist(q, w) > radius) {
            ++rep.violations;
            continue;
        }
        bool inside = true;
        for (double t = 0.0; t <= horizon + 1e-12; t += step) {
            double tt = std::min(t, horizon);
            if (tangent_dist(flow_point(w, tt), flow_point(q, tt)) > 4.0 * radius) {
                inside = false;
                break;
            }
        }
        if (inside) ++rep.verified;
        else ++rep.violations;
    }
    (void)o;
    return rep;
}

// pilot fit of the basepoint constant C in the inclusion above: smallest C
// (times a 1.25 margin) for which sampled directions verify
inline double fit_dynball_constant(const UnitTangent& w, double horizon, double radius,
                                   int samples, double c0, Rng& rng, double step = 0.1) {
    double needed = 1.0;
    for (int i = 0; i < samples; ++i) {
        // find the largest angular offset that still verifies, by bisection
        double lo = 0.0, hi = pi / 2.0;
        for (int it = 0; it < 40; ++it) {
            double mid = 0.5 * (lo + hi);
            UnitTangent q(w.base, w.theta + mid);
            bool ok = tangent_dist(q, w) <= radius;
            for (double t = 0.0; ok && t <= horizon + 1e-12; t += step) {
                double tt = std::min(t, horizon);
                if (tangent_dist(flow_point(w, tt), flow_point(q, tt)) > 4.0 * radius) ok = false;
            }
            if (ok) lo = mid; else hi = mid;
        }
        double vis_reach = std::sin(lo / 2.0);
        if (vis_reach <= 0.0) continue;
        needed = std::max(needed, std::exp(-horizon) / (c0 * vis_reach));
    }
    (void)rng;
    return 1.25 * needed;
}

} // namespace horolab
