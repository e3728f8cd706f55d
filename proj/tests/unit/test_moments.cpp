#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "trochoid/ensemble.hpp"
#include "trochoid/errors.hpp"
#include "trochoid/spectra.hpp"

using namespace trochoid;
using namespace trochoid::spectra;

TEST(Moments, IdentityMatrix) {
    const DenseMatrix id = DenseMatrix::Identity(7, 7);
    const auto s = compute_eigenvalues(id);
    for (int k = 1; k <= 6; ++k) {
        EXPECT_NEAR(empirical_pure_moment(s, k), 1.0, 1e-13);
        EXPECT_NEAR(trace_power(id, k), 1.0, 1e-15);
        EXPECT_NEAR(empirical_mixed_moment(id, k), 1.0, 1e-15);
    }
}

TEST(Moments, TracePowerAgreesWithEigenvalues) {
    const auto m = ensemble::generate_base_iid(120, 8);
    const auto s = compute_eigenvalues(m);
    for (int k = 1; k <= 7; ++k) EXPECT_NEAR(trace_power(m, k), empirical_pure_moment(s, k), 1e-9) << k;
}

TEST(Moments, MixedMomentDefinition) {
    const auto m = ensemble::generate_base_iid(60, 2);
    const DenseMatrix b = m * m.transpose();
    DenseMatrix power = DenseMatrix::Identity(60, 60);
    for (int l = 1; l <= 5; ++l) {
        power = power * b;
        EXPECT_NEAR(empirical_mixed_moment(m, l), power.trace() / 60.0, 1e-10 * power.trace()) << l;
    }
    EXPECT_DOUBLE_EQ(empirical_mixed_moment(m, 1), m.squaredNorm() / 60.0);
}

TEST(Moments, IidMixedMomentsAreCatalan) {
    const auto m = ensemble::generate_base_iid(500, 21);
    EXPECT_NEAR(empirical_mixed_moment(m, 1), 1.0, 0.05);
    EXPECT_NEAR(empirical_mixed_moment(m, 2), 2.0, 0.1);
    EXPECT_EQ(mixed_moment_prediction(1, MixedPrefactor::catalan), 1.0);
    EXPECT_EQ(mixed_moment_prediction(2, MixedPrefactor::catalan), 2.0);
    EXPECT_EQ(mixed_moment_prediction(3, MixedPrefactor::catalan), 5.0);
    EXPECT_EQ(mixed_moment_prediction(1, MixedPrefactor::printed), 2.0);
    EXPECT_EQ(mixed_moment_prediction(2, MixedPrefactor::printed), 3.0);
}

TEST(Moments, RejectsNonRealPureMoment) {
    const Spectrum s{{{0.0, 1.0}}, ""};
    EXPECT_THROW(empirical_pure_moment(s, 1), InvalidInput);
    EXPECT_NEAR(empirical_pure_moment(s, 2), -1.0, 1e-15);
    EXPECT_THROW(empirical_pure_moment(s, 0), InvalidInput);
    EXPECT_THROW(empirical_mixed_moment(DenseMatrix::Identity(2, 2), 0), InvalidInput);
}

TEST(FussCatalan, SmallOrdersAndOracle) {
    EXPECT_DOUBLE_EQ(fuss_catalan_prediction(1, 0.3), 0.3);
    EXPECT_DOUBLE_EQ(fuss_catalan_prediction(2, 0.5), 3.0 * 0.25);
    EXPECT_DOUBLE_EQ(fuss_catalan_prediction(3, 1.0), 12.0);
    for (int l : {4, 10, 20}) {
        const double oracle = static_cast<double>(oracle::binomial(3 * l, l)) / (2 * l + 1);
        EXPECT_NEAR(fuss_catalan_prediction(l, 1.0) / oracle, 1.0, 1e-15) << l;
    }
    EXPECT_NEAR(fuss_catalan_prediction(20, 1.0), 4191844505805495.0 / 41.0, 1.0);
    EXPECT_THROW(fuss_catalan_prediction(0, 1.0), InvalidInput);
}

TEST(TreeWalks, ClosedFormExamples) {
    for (double d : {1.0, 2.5, 7.0}) EXPECT_DOUBLE_EQ(tree_walk_prediction(2, 1, d, d), d);
    EXPECT_DOUBLE_EQ(tree_walk_prediction(2, 2, 3.0, 3.0), 15.0);
    EXPECT_DOUBLE_EQ(tree_walk_prediction(3, 1, 4.0, 4.0), 4.0);
}

TEST(TreeWalks, BruteForceMatchesFormula) {
    for (int m : {2, 3}) {
        for (int d = 1; d <= 4; ++d) {
            for (int l = 1; l <= (m == 2 ? 4 : 3); ++l) {
                const double formula = tree_walk_prediction(m, l, d, d);
                EXPECT_EQ(static_cast<double>(brute_force_tree_walks(m, l, d, d - 1)), formula)
                    << "m=" << m << " l=" << l << " d=" << d;
            }
        }
    }
}

TEST(TreeWalks, BruteForceOnTheBinaryTree) {
    // Root with two children, each node below with two children: walks of
    // length 2 and 4 counted by hand.
    EXPECT_EQ(brute_force_tree_walks(2, 1, 2, 2), 2u);
    EXPECT_EQ(brute_force_tree_walks(2, 2, 2, 2), 8u);
}

TEST(TreeWalks, LargeDegreeLimit) {
    const double d = 1e4;
    for (int l = 1; l <= 5; ++l) {
        const double catalan = static_cast<double>(oracle::binomial(2 * l, l)) / (l + 1);
        const double fuss = static_cast<double>(oracle::binomial(3 * l, l)) / (2 * l + 1);
        EXPECT_NEAR(tree_walk_prediction(2, l, d, d) / std::pow(d, l) / catalan, 1.0, 0.02) << l;
        EXPECT_NEAR(tree_walk_prediction(3, l, d, d) / std::pow(d, l) / fuss, 1.0, 0.02) << l;
    }
}

TEST(TreeWalks, Guards) {
    EXPECT_THROW(brute_force_tree_walks(4, 1, 2, 1), InvalidInput);
    EXPECT_THROW(brute_force_tree_walks(2, 5, 2, 1), InvalidInput);
    EXPECT_THROW(brute_force_tree_walks(2, 1, -1, 1), InvalidInput);
    EXPECT_THROW(tree_walk_prediction(1, 1, 2, 2), InvalidInput);
    EXPECT_THROW(tree_walk_prediction(2, 0, 2, 2), InvalidInput);
}
