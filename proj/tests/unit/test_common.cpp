#include "rse/common.hpp"
#include "rse/rng.hpp"
#include "rse/runs.hpp"

#include <gtest/gtest.h>

using namespace rse;

TEST(Binomial, KnownValuesAndEdges) {
    EXPECT_EQ(binomial(10, 3), 120);
    EXPECT_EQ(binomial(48, 6), 12271512);
    EXPECT_EQ(binomial(5, 0), 1);
    EXPECT_EQ(binomial(5, 6), 0);
    EXPECT_EQ(binomial(5, -1), 0);
    EXPECT_EQ(binomial(-2, 1), 0);
    EXPECT_EQ(binomial(100, 50).str(), "100891344545564193334812497256");
}

TEST(Binomial, PascalRule) {
    for (int n = 1; n < 40; ++n)
        for (int r = 1; r <= n; ++r) EXPECT_EQ(binomial(n, r), binomial(n - 1, r - 1) + binomial(n - 1, r));
}

TEST(Falling, Values) {
    EXPECT_EQ(falling(7, 0), 1);
    EXPECT_EQ(falling(7, 3), 210);
    EXPECT_EQ(falling(3, 4), 0);
}

TEST(Rational, RendersAsFraction) {
    EXPECT_EQ(to_string(Rational(36, 5)), "36/5");
    EXPECT_EQ(to_string(Rational(3)), "3/1");
    EXPECT_EQ(to_string(Rational(-2, 4)), "-1/2");
}

TEST(Rational, Parses) {
    EXPECT_EQ(parse_rational("36/5"), Rational(36, 5));
    EXPECT_EQ(parse_rational("-3/6"), Rational(-1, 2));
    EXPECT_EQ(parse_rational("0.1"), Rational(1, 10));
    EXPECT_EQ(parse_rational("007"), Rational(7));
    EXPECT_EQ(parse_rational("0"), Rational(0));
    EXPECT_EQ(parse_rational("2.50"), Rational(5, 2));
    EXPECT_THROW(parse_rational("1/0"), SpecError);
    EXPECT_THROW(parse_rational("abc"), SpecError);
    EXPECT_THROW(parse_rational(""), SpecError);
    EXPECT_THROW(parse_rational("1.2.3"), SpecError);
}

TEST(Rational, RoundTrip) {
    for (int p = -20; p <= 20; ++p)
        for (int q = 1; q <= 12; ++q) EXPECT_EQ(parse_rational(to_string(Rational(p, q))), Rational(p, q));
}

TEST(Rng, StreamsAreReproducibleAndDistinct) {
    Rng a = Rng::stream(7, 3), b = Rng::stream(7, 3), c = Rng::stream(7, 4);
    for (int i = 0; i < 10; ++i) {
        auto x = a.next();
        EXPECT_EQ(x, b.next());
        EXPECT_NE(x, c.next());
    }
}

TEST(Rng, BelowStaysInRangeAndCoversIt) {
    Rng r(1);
    std::vector<int> hits(7, 0);
    for (int i = 0; i < 70000; ++i) {
        auto v = r.below(7);
        ASSERT_LT(v, 7u);
        ++hits[v];
    }
    for (int h : hits) EXPECT_NEAR(h, 10000, 500);
}

TEST(Runs, SumOfSquaredMultiplicities) {
    std::vector<int> v = {3, 1, 3, 2, 3, 1};
    EXPECT_EQ(sum_squared_runs(v), 9u + 4u + 1u);
    std::vector<int> w = {5, 4, 5, 4, 1};
    EXPECT_EQ(count_distinct(w), 3u);
    std::vector<int> e;
    EXPECT_EQ(sum_squared_runs(e), 0u);
}
