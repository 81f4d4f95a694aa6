#pragma once

#include "rse/common.hpp"
#include "rse/group.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace rse {

// Which pairing an energy or Q-partition refers to: E(A,A) or E(A,A^-1).
enum class Pairing { AA, AAINV };

std::string_view pairing_name(Pairing p);
Pairing parse_pairing(std::string_view s);

struct GroupInvariants {
    std::uint32_t order = 0;
    std::uint64_t kappa = 0;    // conjugacy classes
    std::uint64_t epsilon = 0;  // #{(x,y): x^2 = y^2} / |G|
    std::uint64_t iota = 0;     // involutions, identity included
    std::vector<std::uint32_t> r_profile;          // square roots per element
    std::vector<std::uint32_t> centralizer_sizes;  // per element
    std::uint32_t max_centralizer_nontrivial = 0;
    Rational cp;
    Rational sq;
};

GroupInvariants compute_invariants(const FiniteGroup& g);

// Ordered commuting pairs, counted by a direct double loop.
std::uint64_t commuting_pairs(const FiniteGroup& g);

struct QClass {
    std::string name;
    int distinct = 0;  // distinct entries of the quadruple (a, b, c, d)
    BigInt count;      // triples in the class
    BigInt completed;  // triples whose completing element d lies in F
};

/**
 * Partition of F^3 by the coincidence pattern of (a, b, c) and the
 * completing element d: d = c^-1 a b for AA, d = b a^-1 c for AAINV.
 * For F = G every triple is completed and the two counts agree.
 */
struct QPartitionCounts {
    Pairing variant = Pairing::AA;
    std::uint64_t universe_size = 0;
    std::vector<QClass> classes;

    const QClass& at(std::string_view name) const;
    BigInt total() const;
    // Sum of completed counts over classes with j distinct entries.
    BigInt weight(int j) const;
};

QPartitionCounts empty_partition(Pairing p, std::uint64_t universe_size);

/**
 * Products among the elements x_0..x_{n-1} of a finite universe, as ids in a
 * shared ambient id space: mul[i*n+j] = id(x_i x_j), mul_inv[i*n+j] = id(x_i x_j^-1).
 * Lets the same triple counter run on subsets of finite groups and on balls
 * of infinite groups.
 */
struct PairProducts {
    std::uint32_t size = 0;
    std::uint32_t ambient = 0;
    std::vector<std::uint32_t> mul;
    std::vector<std::uint32_t> mul_inv;
};

PairProducts pair_products(const FiniteGroup& g, const Subset& f);

QPartitionCounts q_partition(const PairProducts& t, Pairing p);
QPartitionCounts q_partition(const FiniteGroup& g, const Subset& f, Pairing p, const Caps& caps = {});

// Full-group counts from |G|, kappa, epsilon, iota alone.
QPartitionCounts q_partition_closed_form(const GroupInvariants& inv, Pairing p);

// Sum over y in F*F of |F ∩ yF|; F must be closed under inverses.
BigInt fn_overlap_sum(const FiniteGroup& g, const Subset& f);

// max over x in F \ {1} of |C_G(x) ∩ F|; 0 when F has no nontrivial element.
std::uint32_t max_centralizer_in(const FiniteGroup& g, const Subset& f);

Subset full_subset(const FiniteGroup& g);

}  // namespace rse
