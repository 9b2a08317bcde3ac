#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <unordered_set>
#include <vector>

#include "horolab/geometry.hpp"
#include "horolab/group.hpp"

namespace horolab {

namespace detail {

struct MatrixKey {
    std::int64_t q[4];
    bool operator==(const MatrixKey& o) const {
        return q[0] == o.q[0] && q[1] == o.q[1] && q[2] == o.q[2] && q[3] == o.q[3];
    }
};

struct MatrixKeyHash {
    size_t operator()(const MatrixKey& k) const {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (int i = 0; i < 4; ++i) {
            h ^= static_cast<std::uint64_t>(k.q[i]);
            h *= 0x100000001b3ULL;
        }
        return static_cast<size_t>(h);
    }
};

// sign-canonical entries quantized at 1e-9; collisions at this scale are
// treated as the same group element
inline MatrixKey quantize(const Isometry& m) {
    MatrixKey k;
    double e[4] = {m.a, m.b, m.c, m.d};
    for (int i = 0; i < 4; ++i) k.q[i] = static_cast<std::int64_t>(std::llround(e[i] * 1e9));
    return k;
}

} // namespace detail

struct OrbitElement {
    Isometry matrix;
    Point image;          // matrix * basepoint
    double distance = 0.0;
    std::int32_t node = -1;  // index into the word arena
};

// word arena entry: last letter and parent node (word reconstruction on demand)
struct WordNode {
    std::int32_t parent = -1;
    std::int16_t letter = -1;
    std::int32_t length = 0;
};

struct EnumerationDiagnostics {
    double max_dist = 0.0;
    double slack = 0.0;
    int max_word_len = 0;
    bool truncated_by_word_len = false;
    bool truncated_by_cap = false;
    int depth_reached = 0;
    std::size_t explored = 0;
    // radius to which the retained set provably contains the whole orbit ball
    double complete_radius = 0.0;
};

struct OrbitBall {
    GroupSpec group;
    std::vector<OrbitElement> elements;  // canonically sorted by (distance, word)
    std::vector<WordNode> arena;
    EnumerationDiagnostics diag;

    std::vector<int> word_of(const OrbitElement& e) const {
        std::vector<int> w;
        for (std::int32_t n = e.node; n >= 0 && arena[n].letter >= 0; n = arena[n].parent)
            w.push_back(arena[n].letter);
        std::reverse(w.begin(), w.end());
        return w;
    }

    std::string word_string(const OrbitElement& e) const {
        std::string s;
        for (int letter : word_of(e)) {
            if (!s.empty()) s += '.';
            s += group.letter_name(letter);
        }
        return s.empty() ? "e" : s;
    }
};

struct EnumerationBudget {
    int max_word_len = 12;
    double max_dist = 12.0;
    double slack = 4.0;  // explored margin beyond max_dist; bounds distance dips
    std::size_t max_explored = 30'000'000;
};

// Deduplicated word-ball enumeration. Words whose current distance exceeds
// max_dist + slack are not extended; retained elements are those within
// max_dist, emitted in canonical (distance, shortlex word) order.
inline OrbitBall enumerate_ball(const GroupSpec& g, const EnumerationBudget& budget) {
    g.validate();
    if (budget.max_word_len < 0) fail(errc::invalid_argument, "enumerate_ball: negative word length");
    OrbitBall out;
    out.group = g;
    out.diag.max_dist = budget.max_dist;
    out.diag.slack = budget.slack;
    out.diag.max_word_len = budget.max_word_len;

    const Point o = g.basepoint;
    const int letters = g.letter_count();
    std::vector<Isometry> letter_mats(letters);
    for (int l = 0; l < letters; ++l) letter_mats[l] = g.letter_matrix(l);

    std::unordered_set<detail::MatrixKey, detail::MatrixKeyHash> seen;
    seen.max_load_factor(0.7f);
    seen.reserve(std::min<std::size_t>(budget.max_explored, std::size_t{1} << 21));
    seen.insert(detail::quantize(Isometry::identity()));
    out.arena.push_back({-1, -1, 0});
    out.elements.push_back({Isometry::identity(), o, 0.0, 0});

    struct Frontier {
        Isometry matrix;
        std::int32_t node;
        double distance;
    };
    std::vector<Frontier> frontier{{Isometry::identity(), 0, 0.0}};
    double min_cut_dist = std::numeric_limits<double>::infinity();
    bool cut_any = false;

    for (int depth = 1; depth <= budget.max_word_len && !frontier.empty(); ++depth) {
        out.diag.depth_reached = depth;
        std::vector<Frontier> next;
        for (const Frontier& f : frontier) {
            int last = out.arena[f.node].letter;
            for (int l = 0; l < letters; ++l) {
                if (last >= 0 && l == g.inverse_letter(last)) continue;
                Isometry m = compose(f.matrix, letter_mats[l]);
                auto key = detail::quantize(m);
                if (!seen.insert(key).second) continue;
                if (out.arena.size() >= budget.max_explored) {
                    out.diag.truncated_by_cap = true;
                    fail(errc::capacity, "enumerate_ball: explored-node cap reached at depth " +
                                             std::to_string(depth));
                }
                Point img = apply(m, o);
                double d = dist(o, img);
                std::int32_t node = static_cast<std::int32_t>(out.arena.size());
                out.arena.push_back({f.node, static_cast<std::int16_t>(l), depth});
                if (d <= budget.max_dist) out.elements.push_back({m, img, d, node});
                if (d <= budget.max_dist + budget.slack) {
                    next.push_back({m, node, d});
                } else {
                    cut_any = true;
                }
                (void)cut_any;
            }
        }
        frontier = std::move(next);
    }
    out.diag.explored = out.arena.size();
    if (!frontier.empty()) {
        out.diag.truncated_by_word_len = true;
        for (const Frontier& f : frontier) min_cut_dist = std::min(min_cut_dist, f.distance);
    }
    // completeness: with dips bounded by the slack, every element within
    // max_dist is reachable without crossing the cut; word-length truncation
    // lowers the certified radius to the cheapest cut frontier minus slack
    out.diag.complete_radius = budget.max_dist;
    if (out.diag.truncated_by_word_len)
        out.diag.complete_radius =
            std::clamp(min_cut_dist - budget.slack, 0.0, budget.max_dist);

    std::sort(out.elements.begin(), out.elements.end(),
              [&](const OrbitElement& a, const OrbitElement& b) {
                  if (a.distance != b.distance) return a.distance < b.distance;
                  const auto& na = out.arena[a.node];
                  const auto& nb = out.arena[b.node];
                  if (na.length != nb.length) return na.length < nb.length;
                  return out.word_of(a) < out.word_of(b);
              });
    return out;
}

inline std::vector<std::int64_t> annulus_counts(const std::vector<OrbitElement>& elements,
                                                double r_max) {
    if (!(r_max >= 0.0)) fail(errc::invalid_argument, "annulus_counts: negative radius");
    std::vector<std::int64_t> counts(static_cast<size_t>(std::floor(r_max)) + 1, 0);
    for (const auto& e : elements) {
        if (e.distance >= r_max + 1.0) continue;
        auto ell = static_cast<size_t>(e.distance);
        if (ell < counts.size()) ++counts[ell];
    }
    return counts;
}

inline double poincare_partial(const std::vector<OrbitElement>& elements, double s) {
    if (s < 0.0) fail(errc::invalid_argument, "poincare_partial: negative exponent");
    double sum = 0.0;
    for (const auto& e : elements) sum += std::exp(-s * e.distance);
    return sum;
}

struct ExponentEstimate {
    double value = 0.0;
    double r_min = 0.0, r_max = 0.0;        // regression window
    std::vector<std::int64_t> counts;       // per-annulus counts
    double stderr_ = 0.0;
    std::string method = "regression";
    double value_regression = 0.0;
    double value_bisection = 0.0;
    std::size_t n_elements = 0;
    int n_annuli = 0;
};

struct EstimateOptions {
    int skip_low = 4;   // transient annuli discarded
    int skip_high = 2;  // boundary-incomplete annuli discarded
};

// Slope of log cumulative count over the reliable window, cross-checked by
// bisection on the exponent where annulus-weighted sums flip from growth to
// decay. The spread between the two routes feeds the reported stderr.
inline ExponentEstimate estimate_exponent_from_counts(const std::vector<std::int64_t>& counts,
                                                      double complete_radius,
                                                      const EstimateOptions& opt = {}) {
    int top = std::min<int>(static_cast<int>(counts.size()) - 1,
                            static_cast<int>(std::floor(complete_radius)) - 1);
    int lo = opt.skip_low;
    int hi = top - opt.skip_high;
    std::vector<double> xs, ys;
    std::vector<std::int64_t> cum(counts.size(), 0);
    std::int64_t acc = 0;
    for (size_t i = 0; i < counts.size(); ++i) {
        acc += counts[i];
        cum[i] = acc;
    }
    for (int ell = lo; ell <= hi; ++ell) {
        if (cum[ell] <= 0) continue;
        xs.push_back(ell + 1.0);
        ys.push_back(std::log(static_cast<double>(cum[ell])));
    }
    if (xs.size() < 5)
        fail(errc::data, "exponent estimate: fewer than 5 usable annuli in window [" +
                             std::to_string(lo) + "," + std::to_string(hi) + "]");

    double n = static_cast<double>(xs.size());
    double sx = std::accumulate(xs.begin(), xs.end(), 0.0);
    double sy = std::accumulate(ys.begin(), ys.end(), 0.0);
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    double intercept = (sy - slope * sx) / n;
    double ss = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        double r = ys[i] - (intercept + slope * xs[i]);
        ss += r * r;
    }
    double slope_se = std::sqrt(ss / (n - 2.0) / (sxx - sx * sx / n));

    // bisection on the growth/decay transition of e^{-s ell} * counts[ell]
    auto tail_trend = [&](double s) {
        double first = 0.0, second = 0.0;
        int nf = 0, ns = 0;
        int mid = (lo + hi) / 2;
        for (int ell = lo; ell <= hi; ++ell) {
            if (counts[ell] <= 0) continue;
            double v = -s * (ell + 0.5) + std::log(static_cast<double>(counts[ell]));
            if (ell <= mid) { first += v; ++nf; }
            else            { second += v; ++ns; }
        }
        if (nf == 0 || ns == 0) return 0.0;
        return second / ns - first / nf;
    };
    double a = 0.0, b = 3.0;
    for (int it = 0; it < 60; ++it) {
        double m = 0.5 * (a + b);
        if (tail_trend(m) > 0.0) a = m; else b = m;
    }
    double bisect = 0.5 * (a + b);

    ExponentEstimate est;
    est.value = std::max(0.0, slope);
    est.value_regression = slope;
    est.value_bisection = bisect;
    est.r_min = lo;
    est.r_max = hi + 1.0;
    est.counts = counts;
    est.n_annuli = static_cast<int>(xs.size());
    est.stderr_ = std::max(slope_se, std::fabs(slope - bisect));
    return est;
}

inline ExponentEstimate estimate_delta(const GroupSpec& g, const EnumerationBudget& budget,
                                       const EstimateOptions& opt = {}) {
    OrbitBall ball = enumerate_ball(g, budget);
    auto counts = annulus_counts(ball.elements, ball.diag.complete_radius);
    ExponentEstimate est = estimate_exponent_from_counts(counts, ball.diag.complete_radius, opt);
    est.n_elements = ball.elements.size();
    return est;
}

// Static k-d tree over orbit points in (x, log y) coordinates with per-node
// bounding boxes, giving exact hyperbolic nearest-distance queries via
// branch-and-bound.
class OrbitIndex {
public:
    OrbitIndex() = default;

    explicit OrbitIndex(const std::vector<Point>& pts) {
        xs_.reserve(pts.size());
        lys_.reserve(pts.size());
        for (const auto& p : pts) {
            xs_.push_back(p.x);
            lys_.push_back(std::log(p.y));
        }
        idx_.resize(pts.size());
        std::iota(idx_.begin(), idx_.end(), 0u);
        if (!idx_.empty()) root_ = build(0, idx_.size(), 0);
    }

    std::size_t size() const { return idx_.size(); }

    double min_dist(const Point& p) const { return min_dist_logy(p.x, std::log(p.y)); }

    double min_dist_logy(double qx, double qly) const {
        if (idx_.empty()) return std::numeric_limits<double>::infinity();
        double best = std::numeric_limits<double>::infinity();
        nearest(root_, qx, qly, best, -1.0);
        return best;
    }

    bool any_within(const Point& p, double radius) const {
        return any_within_logy(p.x, std::log(p.y), radius);
    }

    bool any_within_logy(double qx, double qly, double radius) const {
        if (idx_.empty()) return false;
        double best = std::numeric_limits<double>::infinity();
        nearest(root_, qx, qly, best, radius);
        return best <= radius;
    }

private:
    struct Node {
        std::uint32_t lo = 0, hi = 0;
        std::int32_t left = -1, right = -1;  // leaf when left < 0
        double x_min = 0, x_max = 0, ly_min = 0, ly_max = 0;
    };

    std::vector<double> xs_, lys_;
    std::vector<std::uint32_t> idx_;
    std::vector<Node> nodes_;
    std::int32_t root_ = -1;

    double coord(std::uint32_t i, int axis) const { return axis == 0 ? xs_[i] : lys_[i]; }

    std::int32_t build(std::size_t lo, std::size_t hi, int axis) {
        Node node;
        node.lo = static_cast<std::uint32_t>(lo);
        node.hi = static_cast<std::uint32_t>(hi);
        node.x_min = node.ly_min = std::numeric_limits<double>::infinity();
        node.x_max = node.ly_max = -std::numeric_limits<double>::infinity();
        for (std::size_t i = lo; i < hi; ++i) {
            node.x_min = std::min(node.x_min, xs_[idx_[i]]);
            node.x_max = std::max(node.x_max, xs_[idx_[i]]);
            node.ly_min = std::min(node.ly_min, lys_[idx_[i]]);
            node.ly_max = std::max(node.ly_max, lys_[idx_[i]]);
        }
        std::int32_t id = static_cast<std::int32_t>(nodes_.size());
        nodes_.push_back(node);
        if (hi - lo > 16) {
            std::size_t mid = (lo + hi) / 2;
            std::nth_element(
                idx_.begin() + lo, idx_.begin() + mid, idx_.begin() + hi,
                [&](std::uint32_t a, std::uint32_t b) { return coord(a, axis) < coord(b, axis); });
            std::int32_t l = build(lo, mid, 1 - axis);
            std::int32_t r = build(mid, hi, 1 - axis);
            nodes_[id].left = l;
            nodes_[id].right = r;
        }
        return id;
    }

    // lower bound for the hyperbolic distance from (qx, qly) to the node box
    double box_bound(const Node& n, double qx, double qly) const {
        double gy = std::max({0.0, n.ly_min - qly, qly - n.ly_max});
        double bound = gy;  // d >= |delta log y|
        double gx = std::max({0.0, n.x_min - qx, qx - n.x_max});
        if (gx > 0.0)
            bound = std::max(bound, acosh1p(0.5 * gx * gx * std::exp(-qly - n.ly_max)));
        return bound;
    }

    // stop_below >= 0 turns the search into an early-exit existence query
    void nearest(std::int32_t id, double qx, double qly, double& best, double stop_below) const {
        const Node& n = nodes_[id];
        if (best <= stop_below || box_bound(n, qx, qly) >= best) return;
        if (n.left < 0) {
            for (std::uint32_t i = n.lo; i < n.hi; ++i) {
                double d = dist_logy(qx, qly, xs_[idx_[i]], lys_[idx_[i]]);
                if (d < best) best = d;
                if (best <= stop_below) return;
            }
            return;
        }
        double bl = box_bound(nodes_[n.left], qx, qly);
        double br = box_bound(nodes_[n.right], qx, qly);
        std::int32_t first = bl <= br ? n.left : n.right;
        std::int32_t second = bl <= br ? n.right : n.left;
        nearest(first, qx, qly, best, stop_below);
        if (best <= stop_below) return;
        nearest(second, qx, qly, best, stop_below);
    }
};

inline OrbitIndex make_orbit_index(const std::vector<OrbitElement>& elements) {
    std::vector<Point> pts;
    pts.reserve(elements.size());
    for (const auto& e : elements) pts.push_back(e.image);
    return OrbitIndex(pts);
}

} // namespace horolab
