#include "rse/cayley.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

using namespace rse;

namespace {

template <class M>
void expect_group_laws(const M& model, std::size_t radius, std::uint64_t seed) {
    auto ball = build_ball(model, radius);
    const auto& pts = ball.elements;
    Rng rng(seed);
    auto pick = [&] { return pts[rng.below(pts.size())]; };
    for (int t = 0; t < 300; ++t) {
        auto x = pick(), y = pick(), z = pick();
        EXPECT_EQ(model.multiply(model.multiply(x, y), z), model.multiply(x, model.multiply(y, z))) << model.name();
        EXPECT_EQ(model.multiply(x, model.identity()), x);
        EXPECT_EQ(model.multiply(model.identity(), x), x);
        EXPECT_EQ(model.multiply(x, model.inverse(x)), model.identity());
        EXPECT_EQ(model.multiply(model.inverse(x), x), model.identity());
        EXPECT_EQ(model.commutes(x, y), model.multiply(x, y) == model.multiply(y, x));
        EXPECT_EQ(model.is_involution(x), model.multiply(x, x) == model.identity());
    }
}

void expect_same_partition(const QPartitionCounts& a, const QPartitionCounts& b) {
    ASSERT_EQ(a.classes.size(), b.classes.size());
    for (std::size_t i = 0; i < a.classes.size(); ++i) {
        EXPECT_EQ(a.classes[i].name, b.classes[i].name);
        EXPECT_EQ(a.classes[i].count, b.classes[i].count) << a.classes[i].name;
        EXPECT_EQ(a.classes[i].completed, b.classes[i].completed) << a.classes[i].name;
    }
}

}  // namespace

TEST(Models, GroupLaws) {
    expect_group_laws(FreeGroupModel(2), 4, 1);
    expect_group_laws(FreeGroupModel(5), 3, 2);
    expect_group_laws(LatticeModel(1), 6, 3);
    expect_group_laws(LatticeModel(3), 4, 4);
    expect_group_laws(HeisenbergModel(), 5, 5);
    expect_group_laws(LamplighterModel(), 6, 6);
}

TEST(Models, ParseAndFormat) {
    EXPECT_EQ(model_name(parse_model("free:2")), "free:2");
    EXPECT_EQ(model_name(parse_model("lattice:3")), "lattice:3");
    EXPECT_EQ(model_name(parse_model("heisenberg")), "heisenberg");
    EXPECT_EQ(model_name(parse_model("lamplighter")), "lamplighter");
    for (const char* bad : {"free:0", "free:27", "lattice:0", "lattice:9", "free:x", "torus", "", "heisenberg:2"})
        EXPECT_THROW(parse_model(bad), SpecError) << bad;
    FreeGroupModel f(2);
    EXPECT_EQ(f.format({}), "1");
    EXPECT_EQ(f.format({1, -2}), "aB");
}

TEST(Balls, ClosedFormSizes) {
    for (int rank : {1, 2, 3})
        for (std::size_t n = 0; n <= 5; ++n)
            EXPECT_EQ(BigInt(build_ball(FreeGroupModel(rank), n).elements.size()), free_ball_size(rank, n));
    for (int dim : {1, 2, 3})
        for (std::size_t n = 0; n <= 6; ++n)
            EXPECT_EQ(BigInt(build_ball(LatticeModel(dim), n).elements.size()), lattice_ball_size(dim, n));
    EXPECT_EQ(free_ball_size(2, 8), 13121);
    EXPECT_EQ(lattice_ball_size(2, 4), 41);
    EXPECT_EQ(lattice_ball_size(1, 5000), 10001);
}

TEST(Balls, LayersMatchOracles) {
    const std::uint64_t free2[] = {1, 5, 17, 53, 161, 485};
    auto fb = build_ball(FreeGroupModel(2), 5);
    for (std::size_t r = 0; r <= 5; ++r) {
        EXPECT_EQ(fb.size_at(r), free2[r]);
        EXPECT_EQ(fb.size_at(r), oracle::free2_ball_size(int(r)));
    }

    const std::uint64_t heis[] = {1, 5, 17, 53, 135, 299, 593};
    auto hb = build_ball(HeisenbergModel(), 6);
    for (std::size_t r = 0; r <= 6; ++r) EXPECT_EQ(hb.size_at(r), heis[r]);
    auto ho = oracle::heisenberg_ball(6);
    std::set<std::array<std::int64_t, 3>> hs(hb.elements.begin(), hb.elements.end()), os;
    for (auto& x : ho) os.insert({x[0], x[1], x[2]});
    EXPECT_EQ(hs, os);

    const std::uint64_t lamp[] = {1, 4, 10, 22, 44, 84, 155, 278};
    const std::uint64_t lamp_inv[] = {1, 2, 2, 4, 6, 8, 13, 18};
    auto lb = build_ball(LamplighterModel(), 7);
    for (std::size_t r = 0; r <= 7; ++r) {
        EXPECT_EQ(lb.size_at(r), lamp[r]);
        auto ol = oracle::lamplighter_ball(int(r));
        EXPECT_EQ(ol.size(), lamp[r]);
        std::uint64_t inv = 0;
        for (auto& x : ol) inv += x.cursor == 0;
        EXPECT_EQ(inv, lamp_inv[r]);
    }
    std::set<LampState> ls(lb.elements.begin(), lb.elements.end()), ols;
    for (auto& x : oracle::lamplighter_ball(7))
        ols.insert({std::int32_t(x.cursor), std::vector<std::int32_t>(x.lamps.begin(), x.lamps.end())});
    EXPECT_EQ(ls, ols);
}

TEST(Balls, CapIsEnforced) {
    EXPECT_THROW(build_ball(FreeGroupModel(2), 5, 100), CapExceeded);
    Caps caps;
    caps.ball = 10;
    EXPECT_THROW(make_ball_universe(parse_model("free:2"), 3, caps), CapExceeded);
    EXPECT_THROW(finite_filtration_expectation(parse_model("free:2"), 6, 3, Pairing::AA), CapExceeded);
}

TEST(Densities, FrozenProfiles) {
    auto heis = density_profile(parse_model("heisenberg"), 6);
    const std::uint64_t hsz[] = {1, 5, 17, 53, 135, 299, 593};
    for (auto& row : heis.rows) {
        EXPECT_EQ(row.ball, hsz[row.n]);
        EXPECT_EQ(row.sq, Rational(1, hsz[row.n]));
        EXPECT_EQ(row.iota, Rational(1, hsz[row.n]));
    }
    auto lamp = density_profile(parse_model("lamplighter"), 8);
    const Rational iota[] = {1, Rational(1, 2), Rational(1, 5), Rational(2, 11), Rational(3, 22),
                             Rational(2, 21), Rational(13, 155), Rational(9, 139), Rational(13, 245)};
    for (auto& row : lamp.rows) EXPECT_EQ(row.iota, iota[row.n]) << row.n;
    auto lat = density_profile(parse_model("lattice:2"), 5);
    for (auto& row : lat.rows) {
        EXPECT_EQ(row.cp, 1);
        EXPECT_EQ(row.sq, Rational(1, row.ball));
    }
    EXPECT_DOUBLE_EQ(lat.rows[1].growth_ratio, 5.0);
}

TEST(Densities, SampledCommutingDensityNearExact) {
    ProfileOptions sampled;
    sampled.exact_pair_cap = 100;
    sampled.pair_samples = 200000;
    sampled.seed = 3;
    sampled.threads = 2;
    auto est = density_profile(parse_model("free:2"), 6, sampled);
    auto exact = density_profile(parse_model("free:2"), 6);
    for (std::size_t n = 0; n <= 6; ++n) {
        ASSERT_TRUE(exact.rows[n].cp_exact);
        if (est.rows[n].ball <= 100) {
            EXPECT_TRUE(est.rows[n].cp_exact);
            continue;
        }
        EXPECT_FALSE(est.rows[n].cp_exact);
        EXPECT_GT(est.rows[n].cp_stderr, 0);
        EXPECT_LT(std::abs(est.rows[n].cp_estimate - exact.rows[n].cp_estimate),
                  5 * est.rows[n].cp_stderr + 1e-4);
    }
    sampled.threads = 1;
    auto again = density_profile(parse_model("free:2"), 6, sampled);
    EXPECT_EQ(again.rows.back().cp, est.rows.back().cp);
}

TEST(IntervalPartition, MatchesGenericTripleCount) {
    LatticeModel z(1);
    for (std::int64_t n = 0; n <= 6; ++n) {
        auto ball = build_ball(z, std::size_t(n));
        auto generic = ball_pair_products(z, ball.elements);
        for (Pairing p : {Pairing::AA, Pairing::AAINV})
            expect_same_partition(interval_q_partition(n, p), q_partition(generic, p));
    }
}

TEST(FiltrationExpectation, FrozenValues) {
    auto interval = parse_model("lattice:1");
    const Rational n2[] = {1, 6, Rational(83, 5), Rational(196, 5)};
    const Rational n3[] = {1, 6, Rational(561, 35), Rational(1228, 35)};
    for (std::uint64_t k = 1; k <= 4; ++k)
        for (Pairing p : {Pairing::AA, Pairing::AAINV}) {
            EXPECT_EQ(finite_filtration_expectation(interval, 2, k, p).value, n2[k - 1]);
            EXPECT_EQ(finite_filtration_expectation(interval, 3, k, p).value, n3[k - 1]);
        }
    auto free2 = parse_model("free:2");
    const Rational aa[] = {1, Rational(76, 17), Rational(897, 85)};
    const Rational aainv[] = {1, 6, Rational(257, 17)};
    for (std::uint64_t k = 1; k <= 3; ++k) {
        EXPECT_EQ(finite_filtration_expectation(free2, 2, k, Pairing::AA).value, aa[k - 1]);
        EXPECT_EQ(finite_filtration_expectation(free2, 2, k, Pairing::AAINV).value, aainv[k - 1]);
    }
}

TEST(FiltrationExpectation, MatchesBruteForceOnBalls) {
    for (const char* spec : {"heisenberg", "lamplighter", "free:2"}) {
        auto m = parse_model(spec);
        auto u = make_ball_universe(m, 2);
        for (Pairing p : {Pairing::AA, Pairing::AAINV}) {
            Statistic stat = make_statistic(p == Pairing::AA ? "ENERGY_AA" : "ENERGY_AAINV", u);
            for (std::uint64_t k = 1; k <= 3; ++k)
                EXPECT_EQ(finite_filtration_expectation(m, 2, k, p).value, brute_force_expected(*u, k, stat))
                    << spec << " k=" << k;
        }
    }
}

TEST(FiltrationExpectation, MonteCarloAgrees) {
    auto m = parse_model("lattice:1");
    for (Pairing p : {Pairing::AA, Pairing::AAINV}) {
        McEstimate est = ball_energy_mc(m, 60, p, {.seed = 1, .trials = 20000, .k = 6, .threads = 2});
        double exact = to_double(finite_filtration_expectation(m, 60, 6, p).value);
        EXPECT_LT(std::abs(est.mean - exact), 5 * est.stderr_);
    }
}
