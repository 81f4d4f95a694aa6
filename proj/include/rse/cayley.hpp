#pragma once

#include "rse/common.hpp"
#include "rse/expectation.hpp"
#include "rse/invariants.hpp"
#include "rse/parallel.hpp"
#include "rse/rng.hpp"
#include "rse/runs.hpp"
#include "rse/sampler.hpp"

#include <array>
#include <cmath>
#include <type_traits>
#include <compare>
#include <memory>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <variant>
#include <vector>

namespace rse {

// ---- normal forms -------------------------------------------------------

// Free group of rank r: freely reduced words, letter +(i+1) for generator i
// and -(i+1) for its inverse.
class FreeGroupModel {
public:
    using Elem = std::vector<std::int8_t>;
    explicit FreeGroupModel(int rank);
    std::string name() const { return "free:" + std::to_string(rank_); }
    int rank() const { return rank_; }
    Elem identity() const { return {}; }
    Elem multiply(const Elem& x, const Elem& y) const;
    Elem inverse(const Elem& x) const;
    std::vector<Elem> generators() const;
    bool is_involution(const Elem& x) const { return x.empty(); }
    bool commutes(const Elem& x, const Elem& y) const { return multiply(x, y) == multiply(y, x); }
    std::string format(const Elem& x) const;

private:
    int rank_;
};

// Z^d with the standard generators.
class LatticeModel {
public:
    using Elem = std::vector<std::int32_t>;
    explicit LatticeModel(int dim);
    std::string name() const { return "lattice:" + std::to_string(dim_); }
    int dim() const { return dim_; }
    Elem identity() const { return Elem(dim_, 0); }
    Elem multiply(const Elem& x, const Elem& y) const;
    Elem inverse(const Elem& x) const;
    std::vector<Elem> generators() const;
    bool is_involution(const Elem& x) const { return x == identity(); }
    bool commutes(const Elem&, const Elem&) const { return true; }
    std::string format(const Elem& x) const;

private:
    int dim_;
};

// Integer Heisenberg group, (a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab').
class HeisenbergModel {
public:
    using Elem = std::array<std::int64_t, 3>;
    std::string name() const { return "heisenberg"; }
    Elem identity() const { return {0, 0, 0}; }
    Elem multiply(const Elem& x, const Elem& y) const {
        return {x[0] + y[0], x[1] + y[1], x[2] + y[2] + x[0] * y[1]};
    }
    Elem inverse(const Elem& x) const { return {-x[0], -x[1], -x[2] + x[0] * x[1]}; }
    std::vector<Elem> generators() const { return {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}}; }
    bool is_involution(const Elem& x) const { return x == identity(); }
    bool commutes(const Elem& x, const Elem& y) const { return x[0] * y[1] == y[0] * x[1]; }
    std::string format(const Elem& x) const;
};

// Lamplighter C2 wr Z: lit lamp positions (sorted) and the cursor.
struct LampState {
    std::int32_t cursor = 0;
    std::vector<std::int32_t> lamps;
    auto operator<=>(const LampState&) const = default;
    bool operator==(const LampState&) const = default;
};

class LamplighterModel {
public:
    using Elem = LampState;
    std::string name() const { return "lamplighter"; }
    Elem identity() const { return {}; }
    // (f, m)(g, s) = (f + g shifted by m, m + s)
    Elem multiply(const Elem& x, const Elem& y) const;
    Elem inverse(const Elem& x) const;
    // t, t^-1, a (a toggles the lamp under the cursor)
    std::vector<Elem> generators() const { return {{1, {}}, {-1, {}}, {0, {0}}}; }
    bool is_involution(const Elem& x) const { return x.cursor == 0; }
    bool commutes(const Elem& x, const Elem& y) const { return multiply(x, y) == multiply(y, x); }
    std::string format(const Elem& x) const;
};

struct ElemHash {
    std::size_t operator()(const std::vector<std::int8_t>& v) const;
    std::size_t operator()(const std::vector<std::int32_t>& v) const;
    std::size_t operator()(const std::array<std::int64_t, 3>& v) const;
    std::size_t operator()(const LampState& v) const;
};

using AnyModel = std::variant<FreeGroupModel, LatticeModel, HeisenbergModel, LamplighterModel>;

// free:2, lattice:1, heisenberg, lamplighter
AnyModel parse_model(std::string_view spec);
std::string model_name(const AnyModel& m);

// ---- balls --------------------------------------------------------------

template <class M>
struct Ball {
    std::vector<typename M::Elem> elements;  // BFS layer, then lexicographic
    std::vector<std::size_t> layer_end;      // layer_end[r] = |B_r|

    std::size_t radius() const { return layer_end.size() - 1; }
    std::size_t size_at(std::size_t r) const { return layer_end.at(r); }
};

template <class M>
Ball<M> build_ball(const M& model, std::size_t n, std::uint64_t cap = Caps{}.ball) {
    using E = typename M::Elem;
    Ball<M> ball;
    std::unordered_set<E, ElemHash> seen;
    auto gens = model.generators();
    ball.elements.push_back(model.identity());
    seen.insert(model.identity());
    ball.layer_end.push_back(1);
    std::size_t begin = 0;
    for (std::size_t r = 1; r <= n; ++r) {
        std::size_t end = ball.elements.size();
        std::vector<E> next;
        for (std::size_t i = begin; i < end; ++i)
            for (auto& s : gens) {
                E y = model.multiply(ball.elements[i], s);
                if (seen.insert(y).second) next.push_back(std::move(y));
            }
        if (end + next.size() > cap)
            throw CapExceeded("ball of radius " + std::to_string(r) + " exceeds " + std::to_string(cap) + " elements");
        std::sort(next.begin(), next.end());
        for (auto& y : next) ball.elements.push_back(std::move(y));
        ball.layer_end.push_back(ball.elements.size());
        begin = end;
    }
    return ball;
}

// Closed-form ball sizes for the standard generators.
BigInt free_ball_size(int rank, std::uint64_t n);
BigInt lattice_ball_size(int dim, std::uint64_t n);

/**
 * The ball B_n as a sampling universe. Energies multiply exact normal forms,
 * so coincidences outside the ball are seen.
 */
template <class M>
class BallUniverse : public SubsetUniverse {
public:
    using E = typename M::Elem;
    BallUniverse(M model, std::vector<E> elements) : model_(std::move(model)), points_(std::move(elements)) {
        inverses_.reserve(points_.size());
        for (auto& x : points_) inverses_.push_back(model_.inverse(x));
    }
    std::uint32_t size() const override { return std::uint32_t(points_.size()); }
    std::string describe() const override {
        return model_.name() + " ball with " + std::to_string(points_.size()) + " elements";
    }
    std::uint64_t energy(std::span<const Index> a, Pairing p) const override {
        auto keys = products(a, a, p);
        return sum_squared_runs(keys);
    }
    std::uint64_t action_energy(std::span<const Index> a, std::span<const Index> d) const override {
        auto keys = products(d, a, Pairing::AA);
        return sum_squared_runs(keys);
    }
    std::uint64_t product_set_size(std::span<const Index> a, Pairing p) const override {
        auto keys = products(a, a, p);
        return count_distinct(keys);
    }
    bool is_involution(Index x) const override { return model_.is_involution(points_[x]); }
    bool commutes(Index x, Index y) const override { return model_.commutes(points_[x], points_[y]); }

    const M& model() const { return model_; }
    const std::vector<E>& points() const { return points_; }

private:
    std::vector<E> products(std::span<const Index> left, std::span<const Index> right, Pairing p) const {
        std::vector<E> keys;
        keys.reserve(left.size() * right.size());
        for (Index x : left)
            for (Index y : right)
                keys.push_back(model_.multiply(points_[x], p == Pairing::AA ? points_[y] : inverses_[y]));
        return keys;
    }

    M model_;
    std::vector<E> points_;
    std::vector<E> inverses_;
};

std::shared_ptr<const SubsetUniverse> make_ball_universe(const AnyModel& m, std::size_t n, const Caps& caps = {});

// ---- density profiles ---------------------------------------------------

struct DensityRow {
    std::size_t n = 0;
    std::uint64_t ball = 0;
    bool cp_exact = true;
    Rational cp;              // exact value when cp_exact
    double cp_estimate = 0;   // equals cp when exact
    double cp_stderr = 0;     // 0 when exact
    Rational sq;
    Rational iota;
    double growth_ratio = 0;  // |B_n| / |B_{n-1}|, 0 at n = 0
};

struct DensityProfile {
    std::string model;
    std::vector<DensityRow> rows;
};

struct ProfileOptions {
    std::uint64_t exact_pair_cap = 5000;
    std::uint64_t pair_samples = 1'000'000;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::uint64_t ball_cap = Caps{}.ball;
};

template <class M>
DensityProfile density_profile(const M& model, std::size_t n_max, const ProfileOptions& opt = {}) {
    using E = typename M::Elem;
    auto ball = build_ball(model, n_max, opt.ball_cap);
    DensityProfile prof;
    prof.model = model.name();
    for (std::size_t n = 0; n <= n_max; ++n) {
        const std::size_t N = ball.size_at(n);
        DensityRow row;
        row.n = n;
        row.ball = N;
        row.growth_ratio = n ? double(N) / double(ball.size_at(n - 1)) : 0.0;
        std::uint64_t involutions = 0;
        std::vector<E> squares;
        squares.reserve(N);
        for (std::size_t i = 0; i < N; ++i) {
            involutions += model.is_involution(ball.elements[i]);
            squares.push_back(model.multiply(ball.elements[i], ball.elements[i]));
        }
        row.iota = Rational(involutions, N);
        row.sq = Rational(BigInt(sum_squared_runs(squares)), BigInt(N) * N);
        if (N <= opt.exact_pair_cap) {
            std::vector<std::uint64_t> partial(N, 0);
            parallel_for(N, opt.threads, [&](std::uint64_t b, std::uint64_t e) {
                for (std::uint64_t i = b; i < e; ++i)
                    for (std::size_t j = i + 1; j < N; ++j)
                        partial[i] += model.commutes(ball.elements[i], ball.elements[j]);
            });
            std::uint64_t off = 0;
            for (auto c : partial) off += c;
            row.cp = Rational(BigInt(N + 2 * off), BigInt(N) * N);
            row.cp_estimate = to_double(row.cp);
        } else {
            row.cp_exact = false;
            const std::uint64_t m = opt.pair_samples;
            std::vector<std::uint8_t> hit(m, 0);
            parallel_for(m, opt.threads, [&](std::uint64_t b, std::uint64_t e) {
                for (std::uint64_t s = b; s < e; ++s) {
                    Rng rng = Rng::stream(opt.seed ^ (std::uint64_t(n) << 40), s);
                    auto i = rng.below(N), j = rng.below(N);
                    hit[s] = model.commutes(ball.elements[i], ball.elements[j]);
                }
            });
            std::uint64_t hits = 0;
            for (auto h : hit) hits += h;
            double p = double(hits) / double(m);
            row.cp = Rational(hits, m);
            row.cp_estimate = p;
            row.cp_stderr = std::sqrt(p * (1 - p) / double(m));
        }
        prof.rows.push_back(std::move(row));
    }
    return prof;
}

DensityProfile density_profile(const AnyModel& m, std::size_t n_max, const ProfileOptions& opt = {});

// ---- exact expectation on balls -----------------------------------------

// Products among ball elements, interned into one ambient id space.
template <class M>
PairProducts ball_pair_products(const M& model, const std::vector<typename M::Elem>& pts) {
    using E = typename M::Elem;
    PairProducts t;
    const std::size_t n = pts.size();
    t.size = std::uint32_t(n);
    t.mul.resize(n * n);
    t.mul_inv.resize(n * n);
    std::unordered_map<E, std::uint32_t, ElemHash> ids;
    ids.reserve(2 * n * n);
    auto intern = [&](E&& x) {
        auto [it, fresh] = ids.emplace(std::move(x), std::uint32_t(ids.size()));
        return it->second;
    };
    std::vector<E> inv;
    for (auto& x : pts) inv.push_back(model.inverse(x));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            t.mul[i * n + j] = intern(model.multiply(pts[i], pts[j]));
            t.mul_inv[i * n + j] = intern(model.multiply(pts[i], inv[j]));
        }
    t.ambient = std::uint32_t(ids.size());
    return t;
}

// Q counts for the interval {-n..n} of Z in O(n^2).
QPartitionCounts interval_q_partition(std::int64_t n, Pairing p);

template <class M>
QPartitionCounts ball_q_partition(const M& model, std::size_t n, Pairing p, const Caps& caps = {}) {
    if constexpr (std::is_same_v<M, LatticeModel>) {
        if (model.dim() == 1) return interval_q_partition(std::int64_t(n), p);
    }
    auto ball = build_ball(model, n, caps.ball);
    BigInt size = ball.elements.size();
    if (size * size * size > caps.triples)
        throw CapExceeded("|B_n|^3 = " + BigInt(size * size * size).str() + " exceeds the triple cap");
    return q_partition(ball_pair_products(model, ball.elements), p);
}

QPartitionCounts ball_q_partition(const AnyModel& m, std::size_t n, Pairing p, const Caps& caps = {});

// E[E(A,A)] or E[E(A,A^-1)] for a uniform k-subset of B_n, exactly.
ExpectationResult finite_filtration_expectation(const AnyModel& m, std::size_t n, std::uint64_t k, Pairing p,
                                                const Caps& caps = {});

McEstimate ball_energy_mc(const AnyModel& m, std::size_t n, Pairing p, const SamplingConfig& cfg,
                          const Caps& caps = {});

}  // namespace rse
