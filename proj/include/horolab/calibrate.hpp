#pragma once

#include <algorithm>
#include <cmath>
#include <map>

#include "horolab/boundary.hpp"
#include "horolab/rng.hpp"

namespace horolab {

// Empirical calibration of the outer shadow-sandwich constant c0(r): the
// largest observed ratio d_x(eta, xi_{x,x'}) e^{d(x,x')} over points eta inside
// the shadow, times a 1.5 safety factor, floored at e^{2r}.
inline double calibrate_c0(double r, int samples, std::uint64_t seed) {
    if (!(r > 0.0)) fail(errc::invalid_argument, "calibrate_c0 requires r > 0");
    Rng rng(seed);
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        Point x = rng.point(2.0, 1.0);
        GeodesicLine ray = line_of(UnitTangent(x, rng.angle()));
        double d = rng.uniform(0.3, 8.0);
        Point target = ray.point_at(ray.tau_of(x) + d);
        // shoot through a point of B(target, r): every such direction lies in the shadow
        GeodesicLine off = line_of(UnitTangent(target, rng.angle()));
        Point probe = off.point_at(off.tau_of(target) + rng.uniform(0.0, r * 0.999));
        IdealPoint eta = ray_endpoint_through(x, probe);
        IdealPoint xi = ray_endpoint_through(x, target);
        worst = std::max(worst, visual_dist(x, xi, eta) * std::exp(dist(x, target)));
    }
    return std::max(std::exp(2.0 * r), 1.5 * worst);
}

// Calibration table keyed by shadow radius, persisted into the run manifest.
struct C0Table {
    std::map<double, double> values;
    int samples = 0;
    std::uint64_t seed = 0;

    double get(double r) const {
        auto it = values.find(r);
        if (it == values.end()) fail(errc::invalid_argument, "c0 table: radius not calibrated");
        return it->second;
    }
};

inline C0Table calibrate_c0_table(const std::vector<double>& radii, int samples,
                                  std::uint64_t seed) {
    C0Table table;
    table.samples = samples;
    table.seed = seed;
    for (double r : radii) table.values[r] = calibrate_c0(r, samples, seed);
    return table;
}

// Empirical Hausdorff-stability constant D(alpha) for piecewise geodesic rays
// with angles >= alpha and segment lengths >= lmin: observed maximal deviation
// between the path and the chord geodesic to its deep endpoint, times 1.5.
inline double calibrate_piecewise_stability(double alpha, double lmin, int paths, int segments,
                                            std::uint64_t seed) {
    Rng rng(seed);
    Point origin(0, 1);
    double worst = 0.0;
    for (int trial = 0; trial < paths; ++trial) {
        std::vector<double> lengths, angles;
        for (int k = 0; k < segments; ++k) lengths.push_back(rng.uniform(lmin, lmin + 2.0));
        for (int k = 0; k + 1 < segments; ++k) angles.push_back(rng.uniform(alpha, pi));
        auto steps = piecewise_steps(lengths, angles);
        // chord from origin to the deep endpoint approximates the limit ray
        Point deep = chain_apply(steps, 0, steps.size(), origin);
        GeodesicLine chord = line_through(origin, deep);
        // deviation of the path vertices and segment midpoints from the chord
        for (size_t k = 1; k <= steps.size(); ++k) {
            Point vk = chain_apply(steps, 0, k, origin);
            worst = std::max(worst, chord.dist_to_line(vk));
            Point prev = chain_apply(steps, 0, k - 1, origin);
            worst = std::max(worst, chord.dist_to_line(geodesic_point(prev, vk, lengths[k - 1] / 2.0)));
        }
    }
    return 1.5 * worst;
}

} // namespace horolab
