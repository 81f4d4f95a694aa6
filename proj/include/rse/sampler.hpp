#pragma once

#include "rse/common.hpp"
#include "rse/group.hpp"
#include "rse/invariants.hpp"
#include "rse/rng.hpp"

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rse {

using Index = std::uint32_t;

/**
 * A finite universe whose points are group elements, so subsets of it have
 * energies and product sets. Indices run over 0..size()-1. All methods are
 * const and safe to call from several threads.
 */
class SubsetUniverse {
public:
    virtual ~SubsetUniverse() = default;
    virtual std::uint32_t size() const = 0;
    virtual std::string describe() const = 0;

    // E(A,A) or E(A,A^-1).
    virtual std::uint64_t energy(std::span<const Index> a, Pairing p) const = 0;
    // Regular-action energy: r(w) counts (g, x) in D x A with g x = w.
    virtual std::uint64_t action_energy(std::span<const Index> a, std::span<const Index> d) const = 0;
    // |A A| or |A A^-1|.
    virtual std::uint64_t product_set_size(std::span<const Index> a, Pairing p) const = 0;
    virtual bool is_involution(Index x) const = 0;
    virtual bool commutes(Index x, Index y) const = 0;
};

// A finite group, or a subset F of it, as a universe.
class GroupUniverse : public SubsetUniverse {
public:
    explicit GroupUniverse(GroupPtr g);
    GroupUniverse(GroupPtr g, Subset f);

    std::uint32_t size() const override { return std::uint32_t(points_.size()); }
    std::string describe() const override;
    std::uint64_t energy(std::span<const Index> a, Pairing p) const override;
    std::uint64_t action_energy(std::span<const Index> a, std::span<const Index> d) const override;
    std::uint64_t product_set_size(std::span<const Index> a, Pairing p) const override;
    bool is_involution(Index x) const override;
    bool commutes(Index x, Index y) const override;

    const FiniteGroup& group() const { return *group_; }
    Element element(Index i) const { return points_[i]; }

private:
    GroupPtr group_;
    std::vector<Element> points_;
};

/**
 * A subset statistic. When delta_size > 0 each draw also takes an
 * independent delta_size-subset D of the same universe.
 */
struct Statistic {
    std::string name;
    std::size_t delta_size = 0;
    std::function<std::int64_t(std::span<const Index> a, std::span<const Index> d)> eval;
};

using StatisticBuilder = std::function<Statistic(std::shared_ptr<const SubsetUniverse>)>;

// Registers a named statistic for make_statistic and the CLI.
void register_statistic(const std::string& name, StatisticBuilder builder);
std::vector<std::string> statistic_names();

/**
 * Built-ins: ENERGY_AA, ENERGY_AAINV, ENERGY_ACTION (D of size h), SIZE_A2,
 * SIZE_AAINV, RATIO_EVENT:<c> (1 when |AA^-1| <= c |AA|), plus anything
 * registered.
 */
Statistic make_statistic(std::string_view name, std::shared_ptr<const SubsetUniverse> u, std::size_t h = 0);

struct SamplingConfig {
    std::uint64_t seed = 0;
    std::uint64_t trials = 1;
    std::uint64_t k = 1;
    unsigned threads = 1;
    bool histogram = false;
};

struct McEstimate {
    double mean = 0;
    double stderr_ = 0;  // sample standard deviation / sqrt(trials)
    std::uint64_t trials = 0;
    std::int64_t min = 0;
    std::int64_t max = 0;
    double raw_moments[4] = {0, 0, 0, 0};
    std::vector<std::pair<std::int64_t, std::uint64_t>> histogram;
};

// Floyd's selection: uniform k-subset of 0..n-1, sorted, O(k) space.
void sample_k_subset(std::uint32_t n, std::uint32_t k, Rng& rng, std::vector<Index>& out);
Subset sample_k_subset(std::uint32_t n, std::uint32_t k, Rng& rng);

// Observation of trial t uses only Rng::stream(seed, t), so the result does
// not depend on the thread count.
std::vector<std::int64_t> run_trials(const SubsetUniverse& u, const SamplingConfig& cfg, const Statistic& stat);
McEstimate summarize(const std::vector<std::int64_t>& values, bool histogram);
McEstimate mc_expected(const SubsetUniverse& u, const SamplingConfig& cfg, const Statistic& stat);

// Exact mean over all k-subsets (and all h-subsets D when the statistic uses one).
Rational brute_force_expected(const SubsetUniverse& u, std::uint64_t k, const Statistic& stat, const Caps& caps = {});

}  // namespace rse
