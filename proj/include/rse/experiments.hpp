#pragma once

#include "rse/common.hpp"
#include "rse/group.hpp"
#include "rse/invariants.hpp"
#include "rse/sampler.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rse {

// ---- sum / difference dominance ----

struct DominanceConfig {
    std::uint64_t k = 2;
    std::uint64_t trials = 1000;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::vector<Rational> deltas = {Rational(1, 20), Rational(1, 10), Rational(1, 5)};
    Rational c = Rational(9, 10);
};

/**
 * One threshold pair. diff_threshold bounds |AA^-1|/|AA|, sum_threshold
 * bounds |AA|/|AA^-1|; lower_bound = c * delta is the probability the
 * asymptotic statement promises for each event.
 */
struct DominanceRow {
    std::string source;  // "generic" or "finite-group"
    Rational delta;
    Rational diff_threshold;
    Rational sum_threshold;
    double p_diff_over_sum = 0;
    double p_sum_over_diff = 0;
    Rational lower_bound;
};

struct DominanceReport {
    std::uint64_t k = 0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    std::string universe;
    std::vector<DominanceRow> rows;
    McEstimate energy_aa;     // includes the first four raw moments
    McEstimate energy_aainv;
    std::vector<std::uint64_t> sum_sizes;   // |AA| per trial
    std::vector<std::uint64_t> diff_sizes;  // |AA^-1| per trial
    double max_diff_over_sum = 0;
    double max_sum_over_diff = 0;
};

/**
 * Samples k-subsets and records |AA|, |AA^-1| and both energies per trial.
 * When invariants are given the group-aware thresholds
 * (1/(1+eps/n+kappa/n) - delta)^-1 and (1/(2+iota/n) - delta)^-1 are added
 * for every delta in range.
 */
DominanceReport dominance_experiment(const SubsetUniverse& u, const DominanceConfig& cfg,
                                     const GroupInvariants* inv = nullptr);

// Fraction of trials with |AA^-1| <= t |AA| (diff_over_sum) or |AA| <= t |AA^-1|.
double ratio_event_probability(const DominanceReport& r, const Rational& t, bool diff_over_sum);

// ---- randomized additive-basis search ----

enum class HFunction { LOG2, SQRT_LOG, CONST };

std::string_view h_function_name(HFunction h);
HFunction parse_h_function(std::string_view s);
double h_value(HFunction h, double n);

// k = floor(sqrt(n) h(n)), clamped to [1, n].
std::uint64_t basis_size(HFunction h, std::uint64_t n);

// Markov prefilter constant 1 + (3 + 1)/h(n)^2.
double markov_delta(HFunction h, double n);

struct BasisSearchConfig {
    HFunction h = HFunction::LOG2;
    Rational epsilon = Rational(1, 10);
    std::uint64_t budget = 10000;
    std::uint64_t seed = 0;
    bool prefilter = true;
};

struct BasisSearchResult {
    std::string group;
    Rational epsilon;
    HFunction h = HFunction::LOG2;
    std::uint64_t k = 0;
    std::optional<Subset> found;
    Rational achieved_cover;  // |A*2| / |G| of the found set, or of the best candidate seen
    std::uint64_t candidates_tried = 0;
    std::uint64_t prefilter_rejected = 0;
    std::uint64_t budget = 0;
    std::uint64_t seed = 0;
};

/**
 * Draws k-subsets of G until one has |A*2| >= (1 - epsilon)|G|. A found set
 * is re-verified with an independent product-set computation.
 */
BasisSearchResult basis_search(const FiniteGroup& g, const BasisSearchConfig& cfg);

// ---- iterated product sets ----

struct PowerCover {
    std::vector<std::uint64_t> sizes;  // |A|, |A*2|, ..., |A*m|
    bool covers = false;               // A*m = G
    std::optional<std::uint32_t> first_cover;   // least j with A*j = G
    std::optional<std::uint32_t> stable_from;   // least j with A*j = A*(j+1)
};

PowerCover power_cover(const FiniteGroup& g, const Subset& a, std::uint32_t m);

// ---- thin basis of squares in Z ----

struct ThinBasisReport {
    std::uint64_t n = 0;
    std::uint64_t a_count = 0;         // |{+-m^2} ∩ [-n, n]|
    std::uint64_t sum_count = 0;       // |(A + A) ∩ [-n, n]|
    std::uint64_t residue_count = 0;   // integers in [-n, n] not 2 mod 4
    std::uint64_t two_squares_extra = 0;  // 2 mod 4 integers reached as +-(x^2 + y^2)
    Rational a_density;
    Rational sum_density;
    Rational residue_density;
};

ThinBasisReport thin_basis_demo(std::uint64_t n);

// Independent membership test: is m = +-x^2 +- y^2 for some integers x, y?
bool in_square_sumset(std::int64_t m);

// ---- thin sets in a locally finite chain ----

struct ChainStage {
    std::uint32_t index = 0;
    std::uint64_t group_size = 0;
    std::uint64_t layer_size = 0;
    std::uint64_t layer_k = 0;
    bool layer_found = false;
    std::uint64_t layer_candidates = 0;
    std::uint64_t layer_products = 0;  // |A_j*2| for the chosen layer set
    std::uint64_t a_count = 0;         // |A ∩ G_j|
    std::uint64_t square_count = 0;    // |A*2 ∩ G_j|
    double a_density = 0;
    double square_density = 0;
};

struct ChainConfig {
    HFunction h = HFunction::CONST;
    std::uint64_t budget = 200;
    std::uint64_t seed = 0;
};

struct ChainReport {
    std::string chain;
    std::vector<ChainStage> stages;
};

/**
 * Chains "ea2:m" (C2 <= C2^2 <= ... <= C2^m) and "sym:n" (S2 <= ... <= Sn).
 * Layers F_j = G_j \ G_{j-1} are disjoint; each gets its own sampled set
 * A_j, and the union A is reported against every stage.
 */
ChainReport locally_finite_thin_set(std::string_view chain, const ChainConfig& cfg);

}  // namespace rse
