#include "rse/expectation.hpp"
#include "rse/sampler.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace rse;

namespace {

struct FrozenRow {
    const char* spec;
    int k;
    const char* aa;
    const char* aainv;
};

// Averages of quadruple counts over every k-subset, from the naive oracle.
const FrozenRow kFrozen[] = {
    {"cyclic:5", 2, "6/1", "6/1"},          {"cyclic:5", 3, "19/1", "19/1"},
    {"cyclic:5", 4, "52/1", "52/1"},        {"cyclic:6", 2, "32/5", "32/5"},
    {"cyclic:6", 3, "93/5", "93/5"},        {"cyclic:6", 4, "232/5", "232/5"},
    {"ea2:3", 2, "8/1", "8/1"},             {"ea2:3", 3, "21/1", "21/1"},
    {"ea2:3", 4, "224/5", "224/5"},         {"sym:3", 2, "28/5", "36/5"},
    {"sym:3", 3, "87/5", "99/5"},           {"sym:3", 4, "228/5", "236/5"},
    {"sym:4", 2, "108/23", "156/23"},       {"sym:4", 3, "3033/253", "4473/253"},
    {"sym:4", 4, "43984/1771", "62224/1771"}, {"dihedral:4", 2, "44/7", "52/7"},
    {"dihedral:4", 3, "123/7", "139/7"},    {"dihedral:4", 4, "1424/35", "304/7"},
    {"dihedral:5", 2, "16/3", "64/9"},      {"dihedral:5", 3, "15/1", "19/1"},
    {"dihedral:5", 4, "244/7", "284/7"},    {"gl2:2", 2, "28/5", "36/5"},
    {"gl2:2", 3, "87/5", "99/5"},           {"prod(sym:3,cyclic:2)", 2, "64/11", "80/11"},
    {"prod(sym:3,cyclic:2)", 3, "867/55", "1059/55"}, {"prod(sym:3,cyclic:2)", 4, "5696/165", "6592/165"},
};

const char* kBattery[] = {"cyclic:2", "cyclic:3", "cyclic:4", "cyclic:5", "cyclic:6", "cyclic:7",
                          "cyclic:8", "ea2:2",    "ea2:3",    "ea2:4",    "sym:3",    "sym:4",
                          "dihedral:4", "dihedral:5", "gl2:2", "gl2:3"};

}  // namespace

TEST(Expectation, MatchesFrozenOracleValues) {
    for (const auto& row : kFrozen) {
        FiniteGroup g = parse_group(row.spec);
        EXPECT_EQ(to_string(expected_energy(g, row.k, Pairing::AA).value), row.aa) << row.spec << " k=" << row.k;
        EXPECT_EQ(to_string(expected_energy(g, row.k, Pairing::AAINV).value), row.aainv)
            << row.spec << " k=" << row.k;
    }
}

TEST(Expectation, OracleReproducesFrozenValues) {
    EXPECT_EQ(oracle::expected_energy(oracle::sym(3), 2, false), Rational(28, 5));
    EXPECT_EQ(oracle::expected_energy(oracle::sym(3), 2, true), Rational(36, 5));
    EXPECT_EQ(oracle::expected_energy(oracle::dihedral(4), 4, false), Rational(1424, 35));
    EXPECT_EQ(oracle::expected_energy(oracle::product(oracle::sym(3), oracle::cyclic(2)), 3, true),
              Rational(1059, 55));
}

TEST(Expectation, BinomialQEqualsBruteForceOnBattery) {
    for (const char* spec : kBattery) {
        GroupPtr g = make_group(spec);
        auto u = std::make_shared<GroupUniverse>(g);
        for (Pairing p : {Pairing::AA, Pairing::AAINV}) {
            Statistic stat = make_statistic(p == Pairing::AA ? "ENERGY_AA" : "ENERGY_AAINV", u);
            auto q = q_partition(*g, full_subset(*g), p);
            for (std::uint64_t k = 1; k <= std::min<std::uint64_t>(g->order(), 4); ++k)
                EXPECT_EQ(expected_energy(q, k).value, brute_force_expected(*u, k, stat)) << spec << " k=" << k;
        }
    }
}

TEST(Expectation, PrintedInverseFormMatches) {
    for (const char* spec : kBattery) {
        FiniteGroup g = parse_group(spec);
        if (g.order() < 4) continue;
        auto inv = compute_invariants(g);
        for (std::uint64_t k = 1; k <= g.order(); ++k)
            EXPECT_EQ(paper_closed_form(inv, k, Pairing::AAINV).value, expected_energy(g, k, Pairing::AAINV).value)
                << spec << " k=" << k;
    }
}

TEST(Expectation, CorrectedProductFormMatchesAndPrintedIsOffByDiagonal) {
    for (const char* spec : kBattery) {
        FiniteGroup g = parse_group(spec);
        const std::uint64_t n = g.order();
        if (n < 4) continue;
        auto inv = compute_invariants(g);
        for (std::uint64_t k = 1; k <= n; ++k) {
            Rational exact = expected_energy(g, k, Pairing::AA).value;
            Rational corrected = corrected_closed_form(inv, k, Pairing::AA).value;
            Rational printed = paper_closed_form(inv, k, Pairing::AA).value;
            EXPECT_EQ(corrected, exact) << spec << " k=" << k;
            EXPECT_EQ(printed - corrected, diagonal_term(n, k)) << spec << " k=" << k;
            // k^(2) (n-k)^(2) / (n-1)^(3)
            EXPECT_EQ(diagonal_term(n, k), Rational(falling(std::int64_t(k), 2) * falling(std::int64_t(n - k), 2),
                                                    falling(std::int64_t(n) - 1, 3)));
        }
    }
    auto s3 = compute_invariants(parse_group("sym:3"));
    EXPECT_NE(paper_closed_form(s3, 2, Pairing::AA).value, Rational(28, 5));
    EXPECT_EQ(diagonal_term(6, 2), Rational(2, 5));
    EXPECT_EQ(diagonal_term(8, 2), Rational(2 * 30, 7 * 6 * 5));
    EXPECT_EQ(diagonal_term(8, 1), 0);
    EXPECT_EQ(diagonal_term(8, 8), 0);
}

TEST(Expectation, SmallGroupsRejectClosedForms) {
    auto inv = compute_invariants(parse_group("cyclic:3"));
    EXPECT_THROW(paper_closed_form(inv, 2, Pairing::AA), DomainError);
    FiniteGroup g = parse_group("cyclic:5");
    EXPECT_THROW(expected_energy(g, 0, Pairing::AA), DomainError);
    EXPECT_THROW(expected_energy(g, 6, Pairing::AA), DomainError);
}

TEST(Expectation, SaturatedElementaryAbelian) {
    // iota = epsilon = kappa = |G|
    FiniteGroup g = parse_group("ea2:16");
    GroupInvariants sat;
    sat.order = 65536;
    sat.kappa = sat.epsilon = sat.iota = 65536;
    for (std::uint64_t k : {2u, 8u, 100u}) {
        Rational exact = expected_energy(g, k, Pairing::AAINV).value;
        EXPECT_EQ(exact, paper_closed_form(sat, k, Pairing::AAINV).value);
        EXPECT_EQ(exact, expected_energy(g, k, Pairing::AA).value);
    }
    Rational k8 = expected_energy(g, 8, Pairing::AAINV).value;
    EXPECT_NEAR(to_double(k8), 176.0, 0.05);
}

TEST(Expectation, SubsetsUseCompletedTriples) {
    GroupPtr g = make_group("dihedral:6");
    Subset f = parse_subset("0,1,2,3,7,9", g->order());
    auto u = std::make_shared<GroupUniverse>(g, f);
    for (Pairing p : {Pairing::AA, Pairing::AAINV}) {
        Statistic stat = make_statistic(p == Pairing::AA ? "ENERGY_AA" : "ENERGY_AAINV", u);
        for (std::uint64_t k = 1; k <= 6; ++k)
            EXPECT_EQ(expected_energy(*g, f, k, p).value, brute_force_expected(*u, k, stat));
    }
}

TEST(Expectation, InclusionProbability) {
    EXPECT_EQ(inclusion_probability(10, 3, 0), 1);
    EXPECT_EQ(inclusion_probability(10, 3, 1), Rational(3, 10));
    EXPECT_EQ(inclusion_probability(10, 3, 2), Rational(1, 15));
    EXPECT_EQ(inclusion_probability(10, 3, 4), 0);
}

TEST(ActionExpectation, CyclicSixEqualityCase) {
    GroupPtr g = make_group("cyclic:6");
    Subset full = full_subset(*g);
    auto r = independent_action_expectation(GroupAction::regular(g), full, full, 2, 2);
    EXPECT_EQ(r.value, Rational(24, 5));
    EXPECT_EQ(oracle::expected_action_energy(oracle::cyclic(6), 2, 2), Rational(24, 5));
    auto ordered = action_expectation_bounds(2, 2, 6, ConstantMode::ORDERED_CORRECTED);
    auto printed = action_expectation_bounds(2, 2, 6, ConstantMode::AS_PRINTED);
    EXPECT_EQ(ordered.upper, Rational(24, 5));
    EXPECT_EQ(printed.upper, Rational(22, 5));
    EXPECT_EQ(ordered.lower, 4);
}

TEST(ActionExpectation, FrozenOracleAndBounds) {
    GroupPtr s3 = make_group("sym:3");
    Subset full = full_subset(*s3);
    EXPECT_EQ(independent_action_expectation(GroupAction::regular(s3), full, full, 2, 3).value, Rational(42, 5));
    for (const char* spec : {"sym:3", "dihedral:4", "cyclic:7", "gl2:2"}) {
        GroupPtr g = make_group(spec);
        Subset f = full_subset(*g);
        auto u = std::make_shared<GroupUniverse>(g);
        for (std::uint64_t k = 1; k <= 3; ++k)
            for (std::uint64_t h = 1; h <= 3; ++h) {
                Rational v = independent_action_expectation(GroupAction::regular(g), f, f, k, h).value;
                auto b = action_expectation_bounds(k, h, g->order(), ConstantMode::ORDERED_CORRECTED);
                EXPECT_LE(b.lower, v);
                EXPECT_LE(v, b.upper);
                EXPECT_EQ(v, brute_force_expected(*u, k, make_statistic("ENERGY_ACTION", u, h)));
            }
    }
}

TEST(MultiplicativeBounds, S3AndBattery) {
    auto b = multiplicative_bounds(2, 6, 3, Pairing::AA);
    EXPECT_EQ(b.lower, 4);
    EXPECT_EQ(b.upper, Rational(34, 5));
    EXPECT_THROW(multiplicative_bounds(2, 4, 2, Pairing::AA), DomainError);
    for (const char* spec : kBattery) {
        FiniteGroup g = parse_group(spec);
        if (g.order() < 5) continue;
        auto inv = compute_invariants(g);
        for (std::uint64_t k = 1; k <= g.order(); ++k)
            for (Pairing p : {Pairing::AA, Pairing::AAINV}) {
                auto bd = multiplicative_bounds(k, g.order(), inv.max_centralizer_nontrivial, p);
                Rational v = expected_energy(g, k, p).value;
                EXPECT_LE(bd.lower, v) << spec << " k=" << k;
                EXPECT_LE(v, bd.upper) << spec << " k=" << k;
            }
    }
}

TEST(Asymptotics, Predictions) {
    EXPECT_EQ(asymptotic_prediction_aa(0, 0, 10), 100);
    EXPECT_EQ(asymptotic_prediction_aa(1, 0, 10), 190);
    EXPECT_EQ(asymptotic_prediction_aa(1, 1, 8), 176);
    EXPECT_EQ(asymptotic_prediction_aainv(0, 10), 190);
    EXPECT_EQ(asymptotic_prediction_aainv(1, 8), 176);
}
