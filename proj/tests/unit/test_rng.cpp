#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "trochoid/rng.hpp"

using trochoid::Rng;

TEST(Mix64, MatchesPublishedSplitmixOutput) {
    // First output of splitmix64 started from state 0.
    EXPECT_EQ(trochoid::mix64(0), 0xe220a8397b1dcdafULL);
}

TEST(Rng, SameKeySameSequence) {
    Rng a = Rng::stream(7, 1, 2), b = Rng::stream(7, 1, 2);
    for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next(), b.next());
}

TEST(Rng, StreamsDifferBySeedTagAndIndex) {
    const auto first = [](Rng r) { return r.next(); };
    const auto base = first(Rng::stream(7, 1, 2));
    EXPECT_NE(base, first(Rng::stream(8, 1, 2)));
    EXPECT_NE(base, first(Rng::stream(7, 2, 2)));
    EXPECT_NE(base, first(Rng::stream(7, 1, 3)));
}

TEST(Rng, UniformMomentsAndRange) {
    Rng r(42);
    const int n = 200000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = r.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
        sq += u * u;
    }
    EXPECT_NEAR(sum / n, 0.5, 0.005);
    EXPECT_NEAR(sq / n - (sum / n) * (sum / n), 1.0 / 12.0, 0.002);
}

TEST(Rng, BelowIsUniformOverSmallRange) {
    Rng r(5);
    const int bins = 7, draws = 70000;
    std::vector<int> counts(bins, 0);
    for (int i = 0; i < draws; ++i) {
        const auto v = r.below(bins);
        ASSERT_LT(v, static_cast<std::uint64_t>(bins));
        ++counts[v];
    }
    double chi2 = 0.0;
    const double expected = static_cast<double>(draws) / bins;
    for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
    EXPECT_LT(chi2, 22.46);  // 0.999 quantile, 6 degrees of freedom
}

TEST(Rng, NormalMoments) {
    Rng r(11);
    const int n = 200000;
    double m1 = 0.0, m2 = 0.0, m4 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = r.normal();
        m1 += x;
        m2 += x * x;
        m4 += x * x * x * x;
    }
    EXPECT_NEAR(m1 / n, 0.0, 0.01);
    EXPECT_NEAR(m2 / n, 1.0, 0.01);
    EXPECT_NEAR(m4 / n, 3.0, 0.06);
}
