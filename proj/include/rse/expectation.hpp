#pragma once

#include "rse/common.hpp"
#include "rse/group.hpp"
#include "rse/invariants.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace rse {

enum class Variant { AA, AAINV, ACTION };
enum class Method { BINOMIAL_Q, PAPER_CLOSED_FORM, CORRECTED_CLOSED_FORM };
enum class ConstantMode { AS_PRINTED, ORDERED_CORRECTED };

std::string_view variant_name(Variant v);
std::string_view method_name(Method m);
std::string_view constant_mode_name(ConstantMode m);
Variant to_variant(Pairing p);

struct ExpectationResult {
    Rational value;
    std::uint64_t k = 0;
    std::uint64_t universe_size = 0;
    Variant variant = Variant::AA;
    Method method = Method::BINOMIAL_Q;
};

struct BoundPair {
    Rational lower;
    Rational upper;
    std::string source;
    ConstantMode constant_mode = ConstantMode::ORDERED_CORRECTED;
};

// C(n-j, k-j) / C(n, k): chance that j fixed elements all land in a random k-subset of n.
Rational inclusion_probability(std::uint64_t n, std::uint64_t k, std::uint64_t j);

/**
 * Expected E(A,A) or E(A,A^-1) for a uniform k-subset A of the universe the
 * counts were taken over: sum_j C(n-j, k-j) W_j / C(n, k), where W_j adds the
 * completed triples whose quadruple has j distinct entries.
 */
ExpectationResult expected_energy(const QPartitionCounts& q, std::uint64_t k);

// Full group, via the closed-form Q counts.
ExpectationResult expected_energy(const FiniteGroup& g, std::uint64_t k, Pairing p);
ExpectationResult expected_energy(const GroupInvariants& inv, std::uint64_t k, Pairing p);
// Subset F of G; enumerates triples unless F is all of G.
ExpectationResult expected_energy(const FiniteGroup& g, const Subset& f, std::uint64_t k, Pairing p,
                                  const Caps& caps = {});

// The finite-group corollaries with their printed constants. Needs |G| >= 4.
ExpectationResult paper_closed_form(const GroupInvariants& inv, std::uint64_t k, Pairing p);
// Same shape with Q4(1) = (epsilon - 1)|G| and its companion corrections.
ExpectationResult corrected_closed_form(const GroupInvariants& inv, std::uint64_t k, Pairing p);

// Printed minus corrected AA closed form: n [k^(2)/n^(2) - 2 k^(3)/n^(3) + k^(4)/n^(4)].
Rational diagonal_term(std::uint64_t n, std::uint64_t k);

BoundPair action_expectation_bounds(std::uint64_t k, std::uint64_t h, std::uint64_t phi_size, ConstantMode mode);

/**
 * Exact E[E(A, D)] for A uniform among k-subsets of F and D uniform among
 * h-subsets of Phi, drawn independently. Every (a, b, g) with a, b in F and g
 * in Phi fixes d = (g.a).b^-1; the tuple counts when d lies in Phi.
 */
ExpectationResult independent_action_expectation(const GroupAction& act, const Subset& f, const Subset& phi,
                                                 std::uint64_t k, std::uint64_t h, const Caps& caps = {});

// Upper and lower displays for E(A,A) (uses max_centralizer) or E(A,A^-1). Needs f_size >= 5.
BoundPair multiplicative_bounds(std::uint64_t k, std::uint64_t f_size, std::uint64_t max_centralizer, Pairing p);

// (1 + cp + sq) k^2 - (cp + sq) k
Rational asymptotic_prediction_aa(const Rational& cp, const Rational& sq, std::uint64_t k);
// (2 + i) k^2 - (1 + i) k with i the involution density
Rational asymptotic_prediction_aainv(const Rational& iota_density, std::uint64_t k);

}  // namespace rse
