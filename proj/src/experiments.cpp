#include "rse/experiments.hpp"
#include "rse/energy.hpp"
#include "rse/parallel.hpp"
#include "rse/rng.hpp"
#include "rse/runs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rse {

// ---- dominance ----

namespace {

bool ratio_le(std::uint64_t top, std::uint64_t bottom, const Rational& t) {
    return BigInt(top) * denominator(t) <= numerator(t) * BigInt(bottom);
}

}  // namespace

double ratio_event_probability(const DominanceReport& r, const Rational& t, bool diff_over_sum) {
    if (r.sum_sizes.empty()) return 0;
    std::uint64_t hits = 0;
    for (std::size_t i = 0; i < r.sum_sizes.size(); ++i) {
        hits += diff_over_sum ? ratio_le(r.diff_sizes[i], r.sum_sizes[i], t)
                              : ratio_le(r.sum_sizes[i], r.diff_sizes[i], t);
    }
    return double(hits) / double(r.sum_sizes.size());
}

DominanceReport dominance_experiment(const SubsetUniverse& u, const DominanceConfig& cfg, const GroupInvariants* inv) {
    if (cfg.k < 1 || cfg.k > u.size()) throw DomainError("k must lie in 1..universe size");
    if (cfg.trials < 1) throw DomainError("trials must be at least 1");
    DominanceReport r;
    r.k = cfg.k;
    r.trials = cfg.trials;
    r.seed = cfg.seed;
    r.universe = u.describe();
    r.sum_sizes.resize(cfg.trials);
    r.diff_sizes.resize(cfg.trials);
    std::vector<std::int64_t> e_aa(cfg.trials), e_aainv(cfg.trials);

    parallel_for(cfg.trials, cfg.threads, [&](std::uint64_t begin, std::uint64_t end) {
        std::vector<Index> a;
        for (std::uint64_t t = begin; t < end; ++t) {
            Rng rng = Rng::stream(cfg.seed, t);
            sample_k_subset(u.size(), std::uint32_t(cfg.k), rng, a);
            r.sum_sizes[t] = u.product_set_size(a, Pairing::AA);
            r.diff_sizes[t] = u.product_set_size(a, Pairing::AAINV);
            e_aa[t] = std::int64_t(u.energy(a, Pairing::AA));
            e_aainv[t] = std::int64_t(u.energy(a, Pairing::AAINV));
        }
    });
    r.energy_aa = summarize(e_aa, false);
    r.energy_aainv = summarize(e_aainv, false);
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        double s = double(r.sum_sizes[t]), d = double(r.diff_sizes[t]);
        r.max_diff_over_sum = std::max(r.max_diff_over_sum, d / s);
        r.max_sum_over_diff = std::max(r.max_sum_over_diff, s / d);
    }

    auto add_row = [&](std::string source, const Rational& delta, const Rational& td, const Rational& ts) {
        DominanceRow row;
        row.source = std::move(source);
        row.delta = delta;
        row.diff_threshold = td;
        row.sum_threshold = ts;
        row.p_diff_over_sum = ratio_event_probability(r, td, true);
        row.p_sum_over_diff = ratio_event_probability(r, ts, false);
        row.lower_bound = cfg.c * delta;
        r.rows.push_back(std::move(row));
    };
    for (const Rational& delta : cfg.deltas) {
        if (delta <= 0 || delta >= Rational(1, 3)) throw DomainError("delta must lie in (0, 1/3)");
        Rational t = 1 / (Rational(1, 3) - delta);
        add_row("generic", delta, t, t);
    }
    if (inv) {
        const Rational n = inv->order;
        const Rational diff_base = 1 / (1 + Rational(inv->epsilon) / n + Rational(inv->kappa) / n);
        const Rational sum_base = 1 / (2 + Rational(inv->iota) / n);
        for (const Rational& delta : cfg.deltas)
            if (delta < diff_base && delta < sum_base)
                add_row("finite-group", delta, 1 / (diff_base - delta), 1 / (sum_base - delta));
    }
    return r;
}

// ---- basis search ----

std::string_view h_function_name(HFunction h) {
    switch (h) {
    case HFunction::LOG2:
        return "log2";
    case HFunction::SQRT_LOG:
        return "sqrt_log";
    case HFunction::CONST:
        return "const";
    }
    return "?";
}

HFunction parse_h_function(std::string_view s) {
    if (s == "log2") return HFunction::LOG2;
    if (s == "sqrt_log") return HFunction::SQRT_LOG;
    if (s == "const") return HFunction::CONST;
    throw SpecError("unknown h function '" + std::string(s) + "' (log2, sqrt_log, const)");
}

double h_value(HFunction h, double n) {
    switch (h) {
    case HFunction::LOG2:
        return std::log2(n);
    case HFunction::SQRT_LOG:
        return std::sqrt(std::log2(n));
    case HFunction::CONST:
        return 1.0;
    }
    return 1.0;
}

std::uint64_t basis_size(HFunction h, std::uint64_t n) {
    auto k = std::uint64_t(std::floor(std::sqrt(double(n)) * h_value(h, double(n))));
    return std::clamp<std::uint64_t>(k, 1, n);
}

double markov_delta(HFunction h, double n) {
    double hv = h_value(h, n);
    return 1.0 + (3.0 + 1.0) / (hv * hv);
}

namespace {

std::uint64_t square_size(const FiniteGroup& g, const std::vector<Element>& a) {
    std::vector<Element> keys;
    keys.reserve(a.size() * a.size());
    for (Element x : a)
        for (Element y : a) keys.push_back(g.mul(x, y));
    return count_distinct(keys);
}

std::uint64_t square_energy(const FiniteGroup& g, const std::vector<Element>& a) {
    std::vector<Element> keys;
    keys.reserve(a.size() * a.size());
    for (Element x : a)
        for (Element y : a) keys.push_back(g.mul(x, y));
    return sum_squared_runs(keys);
}

struct LayerSearch {
    std::vector<Element> best;
    std::uint64_t best_products = 0;
    bool found = false;
    std::uint64_t tried = 0;
    std::uint64_t rejected = 0;
};

// Samples k-subsets of the pool until |A*2| >= target; keeps the best seen.
LayerSearch search_layer(const FiniteGroup& g, const std::vector<Element>& pool, std::uint64_t k,
                         std::uint64_t target, double energy_limit, bool prefilter, std::uint64_t budget,
                         std::uint64_t seed) {
    LayerSearch s;
    std::vector<Index> idx;
    std::vector<Element> a;
    for (std::uint64_t t = 0; t < budget; ++t) {
        Rng rng = Rng::stream(seed, t);
        sample_k_subset(std::uint32_t(pool.size()), std::uint32_t(k), rng, idx);
        a.clear();
        for (Index i : idx) a.push_back(pool[i]);
        ++s.tried;
        if (prefilter && double(square_energy(g, a)) > energy_limit) {
            ++s.rejected;
            continue;
        }
        std::uint64_t size = square_size(g, a);
        if (size > s.best_products || s.best.empty()) {
            s.best_products = size;
            s.best = a;
        }
        if (size >= target) {
            s.found = true;
            break;
        }
    }
    return s;
}

}  // namespace

BasisSearchResult basis_search(const FiniteGroup& g, const BasisSearchConfig& cfg) {
    const std::uint64_t n = g.order();
    if (n < 8) throw DomainError("basis search needs |G| >= 8");
    if (cfg.epsilon < 0 || cfg.epsilon > 1) throw DomainError("epsilon must lie in [0, 1]");
    BasisSearchResult r;
    r.group = g.tag();
    r.epsilon = cfg.epsilon;
    r.h = cfg.h;
    r.k = basis_size(cfg.h, n);
    r.budget = cfg.budget;
    r.seed = cfg.seed;

    // least integer >= (1 - epsilon) n
    Rational need = (1 - cfg.epsilon) * Rational(n);
    BigInt target_big = numerator(need) / denominator(need);
    if (Rational(target_big) < need) ++target_big;
    auto target = std::uint64_t(target_big);
    const double k4 = std::pow(double(r.k), 4);
    const double limit = markov_delta(cfg.h, double(n)) * k4 / double(n);

    std::vector<Element> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    LayerSearch s = search_layer(g, pool, r.k, target, limit, cfg.prefilter, cfg.budget, cfg.seed);
    r.candidates_tried = s.tried;
    r.prefilter_rejected = s.rejected;
    r.achieved_cover = Rational(s.best_products, n);
    if (s.found) {
        Subset a(std::uint32_t(n), s.best);
        Subset sq = product_set(a, a, g);
        if (a.members.size() != r.k || sq.members.size() != s.best_products || sq.members.size() < target)
            throw InvariantViolation("basis search result failed re-verification");
        if (Rational(a.members.size()) > Rational(std::sqrt(double(n)) * h_value(cfg.h, double(n))))
            throw InvariantViolation("basis search result is larger than sqrt(|G|) h(|G|)");
        r.found = std::move(a);
    }
    return r;
}

// ---- power cover ----

PowerCover power_cover(const FiniteGroup& g, const Subset& a, std::uint32_t m) {
    if (m < 1 || m > 8) throw DomainError("power cover needs 1 <= m <= 8");
    if (a.universe != g.order()) throw DomainError("subset universe does not match the group order");
    if (a.members.empty()) throw DomainError("power cover needs a nonempty set");
    PowerCover pc;
    std::vector<char> cur(g.order(), 0);
    for (Element x : a.members) cur[x] = 1;
    std::vector<Element> members = a.members;
    pc.sizes.push_back(members.size());
    for (std::uint32_t j = 2; j <= m; ++j) {
        std::vector<char> next(g.order(), 0);
        std::vector<Element> out;
        for (Element x : members)
            for (Element y : a.members) {
                Element z = g.mul(x, y);
                if (!next[z]) {
                    next[z] = 1;
                    out.push_back(z);
                }
            }
        if (!pc.stable_from && next == cur) pc.stable_from = j - 1;
        cur.swap(next);
        members.swap(out);
        pc.sizes.push_back(members.size());
    }
    for (std::uint32_t j = 0; j < pc.sizes.size(); ++j)
        if (pc.sizes[j] == g.order()) {
            pc.first_cover = j + 1;
            break;
        }
    pc.covers = pc.sizes.back() == g.order();
    return pc;
}

// ---- thin basis ----

bool in_square_sumset(std::int64_t m) {
    // m = s x^2 + t y^2 with s, t in {+1, -1}; scan x and test the remainder.
    auto is_square = [](std::int64_t v) {
        if (v < 0) return false;
        auto r = std::int64_t(std::llround(std::sqrt(double(v))));
        while (r * r > v) --r;
        while ((r + 1) * (r + 1) <= v) ++r;
        return r * r == v;
    };
    std::int64_t bound = std::abs(m);
    for (std::int64_t x = 0; x * x <= bound; ++x) {
        const std::int64_t x2 = x * x;
        if (is_square(m - x2) || is_square(x2 - m) || is_square(-m - x2)) return true;
    }
    // differences x^2 - y^2 with x^2 > |m| need x - y to divide m
    const std::int64_t am = std::abs(m);
    for (std::int64_t d = 1; d * d <= am; ++d)
        if (am % d == 0 && (d + am / d) % 2 == 0) return true;
    return false;
}

ThinBasisReport thin_basis_demo(std::uint64_t n) {
    if (n > 100'000'000) throw DomainError("thin basis demo needs n <= 10^8");
    ThinBasisReport r;
    r.n = n;
    const std::uint64_t total = 2 * n + 1;
    std::uint64_t root = 0;
    while ((root + 1) * (root + 1) <= n) ++root;
    r.a_count = 2 * root + 1;

    // |m| as a sum of two squares; only the 2 mod 4 ones are needed
    std::vector<bool> two_sq(n + 1, false);
    for (std::uint64_t x = 0; x * x <= n; ++x)
        for (std::uint64_t y = x; x * x + y * y <= n; ++y) two_sq[x * x + y * y] = true;

    std::uint64_t extra_pos = 0;
    for (std::uint64_t m = 2; m <= n; m += 4) extra_pos += two_sq[m];
    // residue classes: everything but 2 mod 4 is a difference of two squares
    std::uint64_t twos_pos = n >= 2 ? (n - 2) / 4 + 1 : 0;
    r.residue_count = total - 2 * twos_pos;
    r.two_squares_extra = 2 * extra_pos;
    r.sum_count = r.residue_count + r.two_squares_extra;
    r.a_density = Rational(r.a_count, total);
    r.sum_density = Rational(r.sum_count, total);
    r.residue_density = Rational(r.residue_count, total);
    return r;
}

// ---- locally finite chains ----

namespace {

struct Chain {
    GroupPtr group;                      // the last stage
    std::vector<std::uint32_t> stage;    // stage index of each element
    std::vector<std::uint32_t> indices;  // stage labels, ascending
};

Chain make_chain(std::string_view spec) {
    auto colon = spec.find(':');
    if (colon == std::string_view::npos) throw SpecError("chain needs the form ea2:m or sym:n");
    std::string_view family = spec.substr(0, colon);
    std::string arg(spec.substr(colon + 1));
    int top = 0;
    try {
        std::size_t used = 0;
        top = std::stoi(arg, &used);
        if (used != arg.size()) throw SpecError("bad chain length");
    } catch (const std::logic_error&) {
        throw SpecError("bad chain length in '" + std::string(spec) + "'");
    }
    Chain c;
    if (family == "ea2") {
        if (top < 1 || top > 16) throw SpecError("ea2 chain length must be in 1..16");
        c.group = std::make_shared<const FiniteGroup>(FiniteGroup::elementary_abelian_2(std::uint32_t(top)));
        c.stage.resize(c.group->order());
        // C2^j is spanned by the low j bits
        for (Element x = 0; x < c.group->order(); ++x) {
            std::uint32_t j = 1;
            while ((x >> j) != 0) ++j;
            c.stage[x] = j;
        }
        for (int j = 1; j <= top; ++j) c.indices.push_back(std::uint32_t(j));
    } else if (family == "sym") {
        if (top < 2 || top > 8) throw SpecError("sym chain length must be in 2..8");
        c.group = std::make_shared<const FiniteGroup>(FiniteGroup::symmetric(std::uint32_t(top)));
        // S_j fixes the points j..top-1; same lexicographic order as the group
        std::vector<std::uint32_t> p(static_cast<std::size_t>(top));
        std::iota(p.begin(), p.end(), 0);
        do {
            std::uint32_t j = 2;
            for (std::uint32_t x = 0; x < std::uint32_t(top); ++x)
                if (p[x] != x) j = std::max(j, x + 1);
            c.stage.push_back(j);
        } while (std::next_permutation(p.begin(), p.end()));
        for (int j = 2; j <= top; ++j) c.indices.push_back(std::uint32_t(j));
    } else {
        throw SpecError("unknown chain family '" + std::string(family) + "' (ea2, sym)");
    }
    if (c.group->order() > 100'000) throw SpecError("chain stages are limited to 10^5 elements");
    return c;
}

}  // namespace

ChainReport locally_finite_thin_set(std::string_view spec, const ChainConfig& cfg) {
    Chain chain = make_chain(spec);
    const FiniteGroup& g = *chain.group;
    ChainReport report;
    report.chain = std::string(spec);

    std::vector<Element> a_all;
    std::uint64_t group_size = 0;
    for (std::uint32_t j : chain.indices) {
        std::vector<Element> layer;
        for (Element x = 0; x < g.order(); ++x)
            if (chain.stage[x] == j) layer.push_back(x);
        ChainStage st;
        st.index = j;
        group_size += layer.size();
        st.group_size = group_size;
        st.layer_size = layer.size();

        const double f = double(layer.size());
        st.layer_k = basis_size(cfg.h, layer.size());
        const double delta = markov_delta(cfg.h, std::max(f, 2.0));
        // |A_j*2| >= |F_j| / delta
        auto target = std::uint64_t(std::ceil(f / delta));
        const double limit = delta * std::pow(double(st.layer_k), 4) / f;
        LayerSearch s = search_layer(g, layer, st.layer_k, target, limit, true, cfg.budget,
                                     Rng::mix(cfg.seed ^ (std::uint64_t(j) << 32)));
        st.layer_found = s.found;
        st.layer_candidates = s.tried;
        st.layer_products = s.best_products;
        a_all.insert(a_all.end(), s.best.begin(), s.best.end());

        // G_j is a subgroup, so A*2 ∩ G_j = (A ∩ G_j)*2
        st.a_count = a_all.size();
        st.square_count = square_size(g, a_all);
        st.a_density = double(st.a_count) / double(st.group_size);
        st.square_density = double(st.square_count) / double(st.group_size);
        report.stages.push_back(st);
    }
    return report;
}

}  // namespace rse
