#pragma once

#include <optional>

#include "horolab/orbit.hpp"

namespace horolab {

// Compact set K = p(B(o, rho)) on the quotient, handled in the cover through
// its nice preimage B(o, rho) and the orbit of o. r_pad is the neighborhood
// padding R used by the S_alpha filter.
struct CompactSpec {
    Point center{0.0, 1.0};
    double rho = 1.0;
    double r_pad = 0.0;

    CompactSpec() = default;
    CompactSpec(Point o, double rho_, double pad = 0.0) : center(o), rho(rho_), r_pad(pad) {
        if (!(rho_ > 0.0)) fail(errc::invalid_argument, "CompactSpec requires rho > 0");
        if (pad < 0.0) fail(errc::invalid_argument, "CompactSpec requires r_pad >= 0");
    }

    double diameter() const { return 2.0 * rho; }  // Delta
};

struct ExcursionProfile {
    double fraction_inside = 0.0;
    double first_exit = 0.0;
    double last_entry = 0.0;
    double sample_step = 0.0;
    int n_samples = 0;
    int n_inside = 0;
    int n_borderline = 0;  // samples within 1e-3 of the membership threshold
};

// largest element distance the ball certifies for membership queries against
// the given compact (every orbit point within reach must be present)
inline double coverage_cutoff(const OrbitBall& cover, const CompactSpec& k) {
    return cover.diag.complete_radius - k.rho - k.r_pad;
}

inline void require_coverage(const OrbitBall& cover, const CompactSpec& k, double distance) {
    if (distance > coverage_cutoff(cover, k) + 1e-12)
        fail(errc::coverage,
             "orbit cover certified only to radius " + std::to_string(cover.diag.complete_radius) +
                 "; element at distance " + std::to_string(distance) + " with rho+pad " +
                 std::to_string(k.rho + k.r_pad) + " is out of certified reach");
}

namespace detail {

// membership of a point in the rho+pad neighborhood of the orbit, with a
// borderline flag when the call sits within 1e-3 of the threshold
inline bool orbit_neighborhood_member(const OrbitIndex& index, const Point& p, double threshold,
                                      bool* borderline) {
    if (!borderline) return index.any_within(p, threshold);
    if (index.any_within(p, threshold - 1e-3)) return true;
    if (!index.any_within(p, threshold + 1e-3)) return false;
    *borderline = true;
    return index.min_dist(p) <= threshold;
}

} // namespace detail

// Sampled excursion profile of the segment [o, gamma o] against the rho+pad
// neighborhood of the orbit.
inline ExcursionProfile excursion_profile(const OrbitElement& e, const CompactSpec& k,
                                          const OrbitBall& cover, const OrbitIndex& index,
                                          double step = 0.05, bool track_borderline = false) {
    if (!(step > 0.0)) fail(errc::invalid_argument, "excursion_profile requires step > 0");
    require_coverage(cover, k, e.distance);
    const Point o = cover.group.basepoint;
    ExcursionProfile prof;
    prof.sample_step = step;
    double L = e.distance;
    double threshold = k.rho + k.r_pad;
    if (L <= 0.0) {
        prof.fraction_inside = 1.0;
        prof.n_samples = 1;
        prof.n_inside = 1;
        return prof;
    }
    GeodesicLine line = line_through(o, e.image);
    double tau0 = line.tau_of(o);
    bool prev_inside = true;
    std::optional<double> first_exit;
    std::optional<double> last_entry;
    // min-dist to the orbit is 1-Lipschitz along the segment: track certified
    // bounds between queries and only hit the index when the threshold is
    // inside the uncertainty band
    int n = static_cast<int>(std::floor(L / step)) + 1;
    double known_min = -1.0, known_t = 0.0;
    for (int i = 0; i < n; ++i) {
        double t = std::min((i + 0.5) * step, L);
        bool inside;
        double drift = known_min < 0.0 ? -1.0 : std::fabs(t - known_t);
        if (known_min >= 0.0 && known_min - drift > threshold + 1e-3) {
            inside = false;
        } else if (known_min >= 0.0 && known_min + drift < threshold - 1e-3) {
            inside = true;
        } else {
            Point sample = line.point_at(tau0 + t);
            known_min = index.min_dist(sample);
            known_t = t;
            inside = known_min <= threshold;
            if (track_borderline && std::fabs(known_min - threshold) <= 1e-3) ++prof.n_borderline;
        }
        ++prof.n_samples;
        if (inside) ++prof.n_inside;
        if (!inside && !first_exit) first_exit = t;
        if (inside && !prev_inside) last_entry = t;
        prev_inside = inside;
    }
    prof.fraction_inside = static_cast<double>(prof.n_inside) / prof.n_samples;
    prof.first_exit = first_exit.value_or(L);
    prof.last_entry = std::max(last_entry.value_or(prof.first_exit), prof.first_exit);
    return prof;
}

// Approximate fundamental-group-out-of-K membership: both endpoints are pinned
// to o (compensated by the Delta endpoint slack), and the interior window
// (Delta, L - Delta) must keep hyperbolic distance > rho from the whole orbit.
inline bool gamma_K_membership(const OrbitElement& e, const CompactSpec& k, const OrbitBall& cover,
                               const OrbitIndex& index, double step = 0.05,
                               int* borderline_count = nullptr) {
    require_coverage(cover, k, e.distance);
    double L = e.distance;
    double delta = k.diameter();
    if (L <= 2.0 * delta) return true;  // empty interior window
    const Point o = cover.group.basepoint;
    GeodesicLine line = line_through(o, e.image);
    double tau0 = line.tau_of(o);
    // Lipschitz walk: skip queries while the certified lower bound clears rho
    double known_min = -1.0, known_t = 0.0;
    for (double t = delta + step; t < L - delta; t += step) {
        if (known_min >= 0.0 && known_min - (t - known_t) > k.rho + 1e-3) continue;
        known_min = index.min_dist(line.point_at(tau0 + t));
        known_t = t;
        if (borderline_count && std::fabs(known_min - k.rho) <= 1e-3) ++(*borderline_count);
        if (known_min <= k.rho) return false;
    }
    return true;
}

struct SAlphaResult {
    std::vector<std::size_t> indices;        // positions in the input element list
    std::vector<ExcursionProfile> profiles;  // matching profiles
    std::vector<std::int64_t> annulus;       // A_l^alpha counts
    double alpha = 0.0;
    double d_min = 0.0;
};

// S_alpha^d filter: elements whose segment spends at most an alpha proportion
// of its length in the rho+pad neighborhood, restricted to distance >= d_min.
inline SAlphaResult filter_S_alpha(const std::vector<OrbitElement>& elements,
                                   const CompactSpec& k, double alpha, double d_min,
                                   const OrbitBall& cover, const OrbitIndex& index,
                                   double step = 0.05) {
    if (!(alpha > 0.0) || alpha > 1.0)
        fail(errc::invalid_argument, "filter_S_alpha requires alpha in (0, 1]");
    if (d_min < 0.0) fail(errc::invalid_argument, "filter_S_alpha requires d_min >= 0");
    SAlphaResult out;
    out.alpha = alpha;
    out.d_min = d_min;
    double r_top = 0.0;
    for (std::size_t i = 0; i < elements.size(); ++i) {
        if (elements[i].distance < d_min) continue;
        ExcursionProfile prof = excursion_profile(elements[i], k, cover, index, step);
        if (prof.fraction_inside <= alpha) {
            out.indices.push_back(i);
            out.profiles.push_back(prof);
            r_top = std::max(r_top, elements[i].distance);
        }
    }
    out.annulus.assign(static_cast<std::size_t>(std::floor(r_top)) + 1, 0);
    for (std::size_t j : out.indices) ++out.annulus[static_cast<std::size_t>(elements[j].distance)];
    return out;
}

// exponent of the membership-filtered orbit, using elements within the
// certified coverage radius of the supplied ball
inline ExponentEstimate estimate_delta_K(const OrbitBall& ball, const OrbitIndex& index,
                                         const CompactSpec& k, double step = 0.05,
                                         const EstimateOptions& opt = {}) {
    double cutoff = coverage_cutoff(ball, k);
    if (cutoff <= 0.0)
        fail(errc::coverage, "estimate_delta_K: ball too shallow for rho=" + std::to_string(k.rho));
    std::vector<OrbitElement> kept;
    for (const auto& e : ball.elements) {
        if (e.distance > cutoff) break;
        if (gamma_K_membership(e, k, ball, index, step)) kept.push_back(e);
    }
    auto counts = annulus_counts(kept, cutoff);
    // every element at distance <= 2 Delta passes vacuously; the regression
    // window must sit above that zone or the full-orbit growth leaks in
    EstimateOptions windowed = opt;
    windowed.skip_low = std::max(opt.skip_low, static_cast<int>(2.0 * k.diameter()) + 1);
    ExponentEstimate est = estimate_exponent_from_counts(counts, cutoff, windowed);
    est.n_elements = kept.size();
    return est;
}

inline ExponentEstimate estimate_delta_K(const GroupSpec& g, const CompactSpec& k,
                                         const EnumerationBudget& budget, double step = 0.05,
                                         const EstimateOptions& opt = {}) {
    OrbitBall ball = enumerate_ball(g, budget);
    OrbitIndex index = make_orbit_index(ball.elements);
    return estimate_delta_K(ball, index, k, step, opt);
}

struct DeltaInfEstimate {
    std::vector<std::pair<double, ExponentEstimate>> per_rho;  // ordered by rho
    double extrapolated = 0.0;
    int monotone_violations = 0;
};

// per-compact estimates along an increasing rho schedule; the final value is
// the estimate at the largest compact, violations are counted beyond stderr
inline DeltaInfEstimate estimate_delta_inf(const GroupSpec& g, std::vector<double> rho_schedule,
                                           const EnumerationBudget& budget, double step = 0.05,
                                           const EstimateOptions& opt = {}) {
    if (rho_schedule.empty()) fail(errc::invalid_argument, "estimate_delta_inf: empty schedule");
    for (size_t i = 1; i < rho_schedule.size(); ++i)
        if (rho_schedule[i] <= rho_schedule[i - 1])
            fail(errc::invalid_argument, "estimate_delta_inf: schedule must be strictly increasing");
    OrbitBall ball = enumerate_ball(g, budget);
    OrbitIndex index = make_orbit_index(ball.elements);
    DeltaInfEstimate out;
    for (double rho : rho_schedule) {
        CompactSpec k(g.basepoint, rho);
        out.per_rho.emplace_back(rho, estimate_delta_K(ball, index, k, step, opt));
    }
    for (size_t i = 1; i < out.per_rho.size(); ++i) {
        const auto& prev = out.per_rho[i - 1].second;
        const auto& cur = out.per_rho[i].second;
        if (cur.value > prev.value + prev.stderr_ + cur.stderr_) ++out.monotone_violations;
    }
    out.extrapolated = out.per_rho.back().second.value;
    return out;
}

struct KrWindow {
    double head_lo = 0.0, head_hi = 0.0;
    double tail_lo = 0.0, tail_hi = 0.0;
};

// Interior window for segments [o, g gamma o] with gamma out of K: orbit
// returns to small sub-compacts only inside head = [0, 4 Delta + c(g)] and
// tail = [L - 3 Delta, L], where c(g) = 2 d(o, g o) + log 2.
inline KrWindow lemma_kr_window(const OrbitElement& e, const Isometry& gprefix,
                                const CompactSpec& k, const OrbitBall& cover,
                                const OrbitIndex& index, double step = 0.05) {
    if (!gamma_K_membership(e, k, cover, index, step))
        fail(errc::constraint, "lemma_kr_window: element is not in the fundamental group out of K");
    const Point o = cover.group.basepoint;
    double cg = 2.0 * dist(o, apply(gprefix, o)) + std::log(2.0);
    double L = dist(o, apply(compose(gprefix, e.matrix), o));
    KrWindow w;
    w.head_lo = 0.0;
    w.head_hi = 4.0 * k.diameter() + cg;
    w.tail_lo = L - 3.0 * k.diameter();
    w.tail_hi = L;
    return w;
}

} // namespace horolab
