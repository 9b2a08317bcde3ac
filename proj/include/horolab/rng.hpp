#pragma once

#include <cstdint>
#include <cmath>

#include "horolab/point.hpp"

namespace horolab {

// Deterministic generator (SplitMix64) with explicit distributions, so that
// sampled suites are reproducible across platforms and standard library
// versions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    double uniform() { return (next() >> 11) * 0x1.0p-53; }  // [0, 1)

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }

    // random point with log-height and horizontal coordinate in gentle ranges
    Point point(double x_range = 4.0, double log_y_range = 2.0) {
        return Point(uniform(-x_range, x_range), std::exp(uniform(-log_y_range, log_y_range)));
    }

    double angle() { return uniform(0.0, 2.0 * pi); }

private:
    std::uint64_t state_;
};

} // namespace horolab
