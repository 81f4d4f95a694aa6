#include "rse/invariants.hpp"
#include "rse/rng.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace rse;

namespace {

struct Frozen {
    const char* spec;
    std::uint64_t kappa, epsilon, iota;
};

// Independent oracle counts (pair loops over groups rebuilt from permutations and matrices).
const Frozen kFrozen[] = {
    {"cyclic:5", 5, 1, 1},   {"cyclic:6", 6, 2, 2},      {"ea2:3", 8, 8, 8},
    {"sym:3", 3, 3, 4},      {"sym:4", 5, 5, 10},        {"dihedral:4", 5, 5, 6},
    {"dihedral:5", 4, 4, 6}, {"gl2:2", 3, 3, 4},         {"gl2:3", 8, 6, 14},
    {"gl2:5", 24, 8, 32},    {"prod(sym:3,cyclic:2)", 6, 6, 8},
};

const char* kBattery[] = {"cyclic:2", "cyclic:3", "cyclic:4", "cyclic:5", "cyclic:6", "cyclic:7",
                          "cyclic:8", "ea2:2",    "ea2:3",    "ea2:4",    "sym:3",    "sym:4",
                          "dihedral:4", "dihedral:5", "gl2:2", "gl2:3"};

}  // namespace

TEST(Invariants, MatchFrozenOracleCounts) {
    for (const auto& f : kFrozen) {
        auto inv = compute_invariants(parse_group(f.spec));
        EXPECT_EQ(inv.kappa, f.kappa) << f.spec;
        EXPECT_EQ(inv.epsilon, f.epsilon) << f.spec;
        EXPECT_EQ(inv.iota, f.iota) << f.spec;
    }
}

TEST(Invariants, OracleReproducesFrozenCounts) {
    auto check = [](const oracle::Group& g, std::uint64_t k, std::uint64_t e, std::uint64_t i) {
        auto inv = oracle::invariants(g);
        EXPECT_EQ(inv.kappa, k);
        EXPECT_EQ(inv.epsilon, e);
        EXPECT_EQ(inv.iota, i);
    };
    check(oracle::sym(4), 5, 5, 10);
    check(oracle::dihedral(5), 4, 4, 6);
    check(oracle::gl2(3), 8, 6, 14);
    check(oracle::product(oracle::sym(3), oracle::cyclic(2)), 6, 6, 8);
}

TEST(Invariants, GeneralLinearClosedForms) {
    // q odd: epsilon = q + 3, iota = q^2 + q + 2; kappa = q^2 - 1
    for (std::uint32_t q : {3u, 5u, 7u}) {
        auto inv = compute_invariants(FiniteGroup::gl2(q));
        EXPECT_EQ(inv.kappa, q * q - 1);
        EXPECT_EQ(inv.epsilon, q + 3);
        EXPECT_EQ(inv.iota, q * q + q + 2);
    }
    auto two = compute_invariants(FiniteGroup::gl2(2));
    EXPECT_EQ(two.kappa, 3u);
    EXPECT_EQ(two.epsilon, 3u);
    EXPECT_EQ(two.iota, 4u);
}

TEST(Invariants, CentralizerAndSquareRootSums) {
    for (const char* spec : kBattery) {
        FiniteGroup g = parse_group(spec);
        auto inv = compute_invariants(g);
        const std::uint64_t n = g.order();
        std::uint64_t cent = 0, roots2 = 0, roots = 0;
        for (auto c : inv.centralizer_sizes) cent += c;
        for (auto r : inv.r_profile) {
            roots2 += std::uint64_t(r) * r;
            roots += r;
        }
        EXPECT_EQ(cent, inv.kappa * n) << spec;
        EXPECT_EQ(roots2, inv.epsilon * n) << spec;
        EXPECT_EQ(roots, n) << spec;
        EXPECT_EQ(inv.r_profile[g.identity()], inv.iota) << spec;
        EXPECT_EQ(commuting_pairs(g), inv.kappa * n) << spec;
        EXPECT_EQ(inv.cp, Rational(inv.kappa, n)) << spec;
        EXPECT_EQ(inv.sq, Rational(inv.epsilon, n)) << spec;
    }
}

TEST(Invariants, AbelianShortcut) {
    auto inv = compute_invariants(parse_group("ea2:16"));
    EXPECT_EQ(inv.kappa, 65536u);
    EXPECT_EQ(inv.epsilon, 65536u);
    EXPECT_EQ(inv.iota, 65536u);
    auto c = compute_invariants(parse_group("cyclic:10007"));
    EXPECT_EQ(c.epsilon, 1u);
    EXPECT_EQ(c.iota, 1u);
}

TEST(QPartition, ClosedFormMatchesEnumeration) {
    for (const char* spec : kBattery) {
        FiniteGroup g = parse_group(spec);
        auto inv = compute_invariants(g);
        for (Pairing p : {Pairing::AA, Pairing::AAINV}) {
            auto counted = q_partition(g, full_subset(g), p);
            auto closed = q_partition_closed_form(inv, p);
            ASSERT_EQ(counted.classes.size(), closed.classes.size());
            EXPECT_EQ(counted.classes.size(), p == Pairing::AA ? 9u : 7u);
            for (std::size_t i = 0; i < counted.classes.size(); ++i) {
                EXPECT_EQ(counted.classes[i].name, closed.classes[i].name);
                EXPECT_EQ(counted.classes[i].count, closed.classes[i].count) << spec << " " << closed.classes[i].name;
                EXPECT_EQ(counted.classes[i].completed, counted.classes[i].count);
            }
            EXPECT_EQ(counted.total(), BigInt(g.order()) * g.order() * g.order());
        }
    }
}

TEST(QPartition, SymmetricGroupS3Counts) {
    FiniteGroup g = parse_group("sym:3");
    auto aa = q_partition(g, full_subset(g), Pairing::AA);
    // every (a, a, a) triple closes with d = a
    EXPECT_EQ(aa.at("Q5").count, 6);
    EXPECT_EQ(aa.weight(1), 6);
    EXPECT_EQ(aa.weight(1) + aa.weight(2) + aa.weight(3) + aa.weight(4), 216);
    auto ai = q_partition(g, full_subset(g), Pairing::AAINV);
    EXPECT_EQ(ai.at("Q5").count, 6);
    EXPECT_THROW(ai.at("Q1(3)"), Error);
}

TEST(QPartition, SubsetCompletionNeverExceedsCount) {
    FiniteGroup g = parse_group("sym:4");
    Subset f = parse_subset("0,1,2,5,7,11,13,17,19,23", g.order());
    for (Pairing p : {Pairing::AA, Pairing::AAINV}) {
        auto q = q_partition(g, f, p);
        EXPECT_EQ(q.total(), 1000);
        BigInt completed = 0;
        for (auto& c : q.classes) {
            EXPECT_LE(c.completed, c.count);
            completed += c.completed;
        }
        EXPECT_LT(completed, 1000);
    }
}

TEST(QPartition, TripleCap) {
    FiniteGroup g = parse_group("sym:5");
    Caps caps;
    caps.triples = 1000;
    EXPECT_THROW(q_partition(g, full_subset(g), Pairing::AA, caps), CapExceeded);
}

TEST(OverlapSum, EqualsSquaredSizeForSymmetricSets) {
    for (const char* spec : kBattery) {
        FiniteGroup g = parse_group(spec);
        Rng rng(Rng::mix(g.order()));
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<Element> members;
            for (Element x = 0; x < g.order(); ++x)
                if (rng.below(2)) {
                    members.push_back(x);
                    members.push_back(g.inv(x));
                }
            Subset f(g.order(), members);
            EXPECT_EQ(fn_overlap_sum(g, f), BigInt(f.size()) * f.size()) << spec;
        }
    }
}

TEST(OverlapSum, RejectsNonSymmetricSets) {
    FiniteGroup g = parse_group("cyclic:5");
    EXPECT_THROW(fn_overlap_sum(g, parse_subset("1,2", 5)), DomainError);
}

TEST(Centralizers, MaxInsideSubset) {
    FiniteGroup g = parse_group("sym:3");
    EXPECT_EQ(max_centralizer_in(g, full_subset(g)), 3u);
    EXPECT_EQ(max_centralizer_in(g, parse_subset("0", 6)), 0u);
    EXPECT_EQ(compute_invariants(g).max_centralizer_nontrivial, 3u);
}

TEST(Pairing, NamesRoundTrip) {
    EXPECT_EQ(parse_pairing(pairing_name(Pairing::AA)), Pairing::AA);
    EXPECT_EQ(parse_pairing(pairing_name(Pairing::AAINV)), Pairing::AAINV);
    EXPECT_THROW(parse_pairing("AB"), SpecError);
}
