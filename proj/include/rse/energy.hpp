#pragma once

#include "rse/common.hpp"
#include "rse/group.hpp"

#include <utility>
#include <vector>

namespace rse {

/**
 * Action energy E(A, D) = #{(a, b, g, h) in A^2 x D^2 : g.a = h.b}, reported
 * together with the representation counts r(w) = #{(g, a) : g.a = w}.
 */
struct EnergyReport {
    std::uint64_t energy = 0;
    std::uint64_t image_size = 0;  // |D.A|
    std::uint64_t a_size = 0;
    std::uint64_t delta_size = 0;
    std::vector<std::pair<std::uint32_t, std::uint64_t>> histogram;  // sorted by point
    Rational cs_lower_bound;  // |A|^2 |D|^2 / |D.A|
};

EnergyReport action_energy(const Subset& a, const Subset& d, const GroupAction& act);

// Regular action: the points are group elements and g.a = g a, with g ranging over b.
EnergyReport multiplicative_energy(const Subset& a, const Subset& b, const FiniteGroup& g);

// {x y : x in a, y in b}
Subset product_set(const Subset& a, const Subset& b, const FiniteGroup& g);
Subset inverse_set(const Subset& a, const FiniteGroup& g);
Subset translate_right(const Subset& a, Element x, const FiniteGroup& g);  // a x
Subset translate_left(Element x, const Subset& a, const FiniteGroup& g);   // x a

enum class Normalization { GLOBAL, LOCAL };

// GLOBAL divides by |G|^2 |Omega|, LOCAL by |A|^2 |D|.
Rational normalized_energy(const Subset& a, const Subset& d, const GroupAction& act, Normalization mode);

// |A|^2 |D|^2 / E, a lower bound for |D.A|.
Rational cs_growth_bound(const EnergyReport& report);

}  // namespace rse
