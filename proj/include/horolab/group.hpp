#pragma once

#include <string>
#include <vector>

#include "horolab/isometry.hpp"

namespace horolab {

struct Generator {
    std::string label;
    Isometry matrix;
};

// Finitely generated group data. Discreteness and torsion-freeness are caller
// assertions recorded with the spec, not verified; the shipped examples are
// known discrete and torsion free.
struct GroupSpec {
    std::string name;
    Point basepoint{0.0, 1.0};
    std::vector<Generator> generators;
    std::string notes;

    void validate() const {
        for (size_t i = 0; i < generators.size(); ++i) {
            if (is_identity(generators[i].matrix))
                fail(errc::schema, "group '" + name + "': generator " + generators[i].label +
                                       " is the identity");
            for (size_t j = i + 1; j < generators.size(); ++j)
                if (generators[i].label == generators[j].label)
                    fail(errc::schema, "group '" + name + "': duplicate label " + generators[i].label);
        }
    }

    // letters 0..k-1 are generators, k..2k-1 their inverses
    int letter_count() const { return 2 * static_cast<int>(generators.size()); }

    Isometry letter_matrix(int letter) const {
        int k = static_cast<int>(generators.size());
        if (letter < k) return generators[letter].matrix;
        return generators[letter - k].matrix.inverse();
    }

    int inverse_letter(int letter) const {
        int k = static_cast<int>(generators.size());
        return letter < k ? letter + k : letter - k;
    }

    std::string letter_name(int letter) const {
        int k = static_cast<int>(generators.size());
        if (letter < k) return generators[letter].label;
        return generators[letter - k].label + "'";
    }
};

// shipped example groups

inline GroupSpec parabolic_group() {
    GroupSpec g;
    g.name = "parabolic";
    g.generators = {{"t", Isometry(1, 1, 0, 1)}};
    g.notes = "cyclic parabolic, z -> z+1";
    return g;
}

inline GroupSpec hyperbolic_cyclic_group() {
    GroupSpec g;
    g.name = "hyperbolic";
    g.generators = {{"h", Isometry(2, 0, 0, 0.5)}};
    g.notes = "cyclic hyperbolic, z -> 4z";
    return g;
}

// Rank-2 Schottky group with axes (-1,1) and (-3,3) and translation length 3.
// Isometric circles: |z +- coth(1.5)| = 1/sinh(1.5) and |z +- 3 coth(1.5)| =
// 3/sinh(1.5); the four intervals on the real line are pairwise disjoint, so
// ping-pong applies and the group is free and convex cocompact.
inline GroupSpec schottky_group() {
    double mu = 1.5;
    double ch = std::cosh(mu), sh = std::sinh(mu);
    GroupSpec g;
    g.name = "schottky";
    g.generators = {{"a", Isometry(ch, sh, sh, ch)},
                    {"b", Isometry(ch, 3.0 * sh, sh / 3.0, ch)}};
    g.notes = "free rank 2, ping-pong on disjoint isometric disks";
    return g;
}

// Principal congruence subgroup of level 2 (free on the two parabolics).
inline GroupSpec gamma2_group() {
    GroupSpec g;
    g.name = "gamma2";
    g.generators = {{"t", Isometry(1, 2, 0, 1)}, {"s", Isometry(1, 0, 2, 1)}};
    g.notes = "Gamma(2), finite covolume with cusps";
    return g;
}

} // namespace horolab
