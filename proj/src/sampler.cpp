#include "rse/sampler.hpp"
#include "rse/parallel.hpp"
#include "rse/runs.hpp"

#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <numeric>

namespace rse {

unsigned default_threads() {
    if (const char* env = std::getenv("RSE_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return unsigned(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

GroupUniverse::GroupUniverse(GroupPtr g) : group_(std::move(g)) {
    points_.resize(group_->order());
    std::iota(points_.begin(), points_.end(), 0);
}

GroupUniverse::GroupUniverse(GroupPtr g, Subset f) : group_(std::move(g)) {
    if (f.universe != group_->order()) throw DomainError("subset universe does not match the group order");
    points_ = std::move(f.members);
}

std::string GroupUniverse::describe() const {
    if (points_.size() == group_->order()) return group_->tag();
    return group_->tag() + " restricted to " + std::to_string(points_.size()) + " elements";
}

std::uint64_t GroupUniverse::energy(std::span<const Index> a, Pairing p) const {
    std::vector<Element> keys;
    keys.reserve(a.size() * a.size());
    const FiniteGroup& g = *group_;
    for (Index x : a)
        for (Index y : a)
            keys.push_back(p == Pairing::AA ? g.mul(points_[x], points_[y]) : g.mul(points_[x], g.inv(points_[y])));
    return sum_squared_runs(keys);
}

std::uint64_t GroupUniverse::action_energy(std::span<const Index> a, std::span<const Index> d) const {
    std::vector<Element> keys;
    keys.reserve(a.size() * d.size());
    for (Index w : d)
        for (Index x : a) keys.push_back(group_->mul(points_[w], points_[x]));
    return sum_squared_runs(keys);
}

std::uint64_t GroupUniverse::product_set_size(std::span<const Index> a, Pairing p) const {
    std::vector<Element> keys;
    keys.reserve(a.size() * a.size());
    const FiniteGroup& g = *group_;
    for (Index x : a)
        for (Index y : a)
            keys.push_back(p == Pairing::AA ? g.mul(points_[x], points_[y]) : g.mul(points_[x], g.inv(points_[y])));
    return count_distinct(keys);
}

bool GroupUniverse::is_involution(Index x) const {
    return group_->mul(points_[x], points_[x]) == group_->identity();
}

bool GroupUniverse::commutes(Index x, Index y) const {
    return group_->mul(points_[x], points_[y]) == group_->mul(points_[y], points_[x]);
}

namespace {

std::mutex& registry_lock() {
    static std::mutex m;
    return m;
}

std::map<std::string, StatisticBuilder>& registry() {
    static std::map<std::string, StatisticBuilder> r = [] {
        std::map<std::string, StatisticBuilder> init;
        init["INVOLUTIONS"] = [](std::shared_ptr<const SubsetUniverse> u) {
            return Statistic{"INVOLUTIONS", 0, [u](std::span<const Index> a, std::span<const Index>) {
                                 std::int64_t c = 0;
                                 for (Index x : a) c += u->is_involution(x);
                                 return c;
                             }};
        };
        init["COMMUTING_PAIRS"] = [](std::shared_ptr<const SubsetUniverse> u) {
            return Statistic{"COMMUTING_PAIRS", 0, [u](std::span<const Index> a, std::span<const Index>) {
                                 std::int64_t c = 0;
                                 for (Index x : a)
                                     for (Index y : a) c += u->commutes(x, y);
                                 return c;
                             }};
        };
        return init;
    }();
    return r;
}

}  // namespace

void register_statistic(const std::string& name, StatisticBuilder builder) {
    std::lock_guard<std::mutex> g(registry_lock());
    registry()[name] = std::move(builder);
}

std::vector<std::string> statistic_names() {
    std::vector<std::string> out = {"ENERGY_AA", "ENERGY_AAINV", "ENERGY_ACTION", "SIZE_A2", "SIZE_AAINV",
                                    "RATIO_EVENT:<c>"};
    std::lock_guard<std::mutex> g(registry_lock());
    for (auto& [name, _] : registry()) out.push_back(name);
    return out;
}

Statistic make_statistic(std::string_view name, std::shared_ptr<const SubsetUniverse> u, std::size_t h) {
    using Span = std::span<const Index>;
    std::string n(name);
    if (n == "ENERGY_AA" || n == "ENERGY_AAINV") {
        Pairing p = n == "ENERGY_AA" ? Pairing::AA : Pairing::AAINV;
        return {n, 0, [u, p](Span a, Span) { return std::int64_t(u->energy(a, p)); }};
    }
    if (n == "SIZE_A2" || n == "SIZE_AAINV") {
        Pairing p = n == "SIZE_A2" ? Pairing::AA : Pairing::AAINV;
        return {n, 0, [u, p](Span a, Span) { return std::int64_t(u->product_set_size(a, p)); }};
    }
    if (n == "ENERGY_ACTION") {
        if (h == 0 || h > u->size()) throw DomainError("ENERGY_ACTION needs 1 <= h <= universe size");
        return {n, h, [u](Span a, Span d) { return std::int64_t(u->action_energy(a, d)); }};
    }
    if (n.rfind("RATIO_EVENT:", 0) == 0) {
        Rational c = parse_rational(n.substr(12));
        BigInt num = numerator(c), den = denominator(c);
        return {n, 0, [u, num, den](Span a, Span) {
                    BigInt diff = u->product_set_size(a, Pairing::AAINV);
                    BigInt sum = u->product_set_size(a, Pairing::AA);
                    return std::int64_t(diff * den <= num * sum);
                }};
    }
    StatisticBuilder b;
    {
        std::lock_guard<std::mutex> g(registry_lock());
        auto it = registry().find(n);
        if (it == registry().end()) throw SpecError("unknown statistic '" + n + "'");
        b = it->second;
    }
    return b(std::move(u));
}

void sample_k_subset(std::uint32_t n, std::uint32_t k, Rng& rng, std::vector<Index>& out) {
    if (k > n) throw DomainError("cannot draw " + std::to_string(k) + " of " + std::to_string(n));
    out.clear();
    // Floyd: for j = n-k .. n-1 draw t in [0, j]; take t unless already taken, else j.
    for (std::uint32_t j = n - k; j < n; ++j) {
        auto t = Index(rng.below(std::uint64_t(j) + 1));
        auto pos = std::lower_bound(out.begin(), out.end(), t);
        if (pos != out.end() && *pos == t) {
            out.push_back(j);  // j exceeds every element drawn so far
        } else {
            out.insert(pos, t);
        }
    }
}

Subset sample_k_subset(std::uint32_t n, std::uint32_t k, Rng& rng) {
    std::vector<Index> out;
    sample_k_subset(n, k, rng, out);
    Subset s;
    s.universe = n;
    s.members = std::move(out);
    return s;
}

std::vector<std::int64_t> run_trials(const SubsetUniverse& u, const SamplingConfig& cfg, const Statistic& stat) {
    if (cfg.trials < 1) throw DomainError("trials must be at least 1");
    if (cfg.k > u.size()) throw DomainError("k exceeds the universe size");
    std::vector<std::int64_t> values(cfg.trials);
    parallel_for(cfg.trials, cfg.threads, [&](std::uint64_t begin, std::uint64_t end) {
        std::vector<Index> a, d;
        for (std::uint64_t t = begin; t < end; ++t) {
            Rng rng = Rng::stream(cfg.seed, t);
            sample_k_subset(u.size(), std::uint32_t(cfg.k), rng, a);
            if (stat.delta_size) sample_k_subset(u.size(), std::uint32_t(stat.delta_size), rng, d);
            values[t] = stat.eval(a, d);
        }
    });
    return values;
}

McEstimate summarize(const std::vector<std::int64_t>& values, bool histogram) {
    McEstimate est;
    est.trials = values.size();
    if (values.empty()) return est;
    est.min = est.max = values[0];
    double sums[4] = {0, 0, 0, 0};
    for (auto v : values) {
        est.min = std::min(est.min, v);
        est.max = std::max(est.max, v);
        double x = double(v), p = x;
        for (double& s : sums) {
            s += p;
            p *= x;
        }
    }
    const double t = double(values.size());
    for (int j = 0; j < 4; ++j) est.raw_moments[j] = sums[j] / t;
    est.mean = est.raw_moments[0];
    if (values.size() > 1) {
        double ss = 0;
        for (auto v : values) ss += (double(v) - est.mean) * (double(v) - est.mean);
        est.stderr_ = std::sqrt(ss / (t - 1)) / std::sqrt(t);
    }
    if (histogram) {
        std::map<std::int64_t, std::uint64_t> h;
        for (auto v : values) ++h[v];
        est.histogram.assign(h.begin(), h.end());
    }
    return est;
}

McEstimate mc_expected(const SubsetUniverse& u, const SamplingConfig& cfg, const Statistic& stat) {
    return summarize(run_trials(u, cfg, stat), cfg.histogram);
}

namespace {

bool next_combination(std::vector<Index>& c, std::uint32_t n) {
    const std::size_t k = c.size();
    for (std::size_t i = k; i-- > 0;) {
        if (c[i] < n - k + i) {
            ++c[i];
            for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
            return true;
        }
    }
    return false;
}

}  // namespace

Rational brute_force_expected(const SubsetUniverse& u, std::uint64_t k, const Statistic& stat, const Caps& caps) {
    const std::uint32_t n = u.size();
    if (k > n) throw DomainError("k exceeds the universe size");
    BigInt subsets = binomial(n, std::int64_t(k));
    if (stat.delta_size) subsets *= binomial(n, std::int64_t(stat.delta_size));
    if (subsets > caps.subsets)
        throw CapExceeded("brute force over " + subsets.str() + " subsets exceeds the cap");
    std::vector<Index> a(k), d(stat.delta_size);
    std::iota(a.begin(), a.end(), 0);
    __int128 total = 0;
    std::uint64_t count = 0;
    do {
        std::iota(d.begin(), d.end(), 0);
        do {
            total += stat.eval(a, d);
            ++count;
        } while (stat.delta_size && next_combination(d, n));
    } while (next_combination(a, n));
    BigInt t = std::int64_t(total >> 62);
    t <<= 62;
    t += std::int64_t(total & ((__int128(1) << 62) - 1));
    return Rational(t, BigInt(count));
}

}  // namespace rse
