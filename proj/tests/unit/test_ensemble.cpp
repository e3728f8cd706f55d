#include <cmath>
#include <functional>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "trochoid/ensemble.hpp"
#include "trochoid/errors.hpp"
#include "trochoid/rng.hpp"
#include "trochoid/spectra.hpp"

using namespace trochoid;
using namespace trochoid::ensemble;

namespace {

double trace_cube_over_n(const DenseMatrix& m) { return (m * m * m).trace() / static_cast<double>(m.rows()); }

// Step-by-step walk through the sign-flip sweep with explicit index sums.
// P_1[a][b] = S[a][b]; P_j[a][b] = sum_c S[a][c] P_{j-1}[c][b] for a != b, 0 on
// the diagonal. w(b) = sum_a M[v][a] P_{k-2}[a][b] M[b][v].
DenseMatrix scripted_sweep(DenseMatrix m, int k, double p, int sign, std::uint64_t seed) {
    const int n = static_cast<int>(m.rows());
    for (int v = k - 1; v < n; ++v) {
        std::vector<std::vector<double>> paths(v, std::vector<double>(v));
        for (int a = 0; a < v; ++a)
            for (int b = 0; b < v; ++b) paths[a][b] = m(a, b);
        for (int j = 2; j <= k - 2; ++j) {
            std::vector<std::vector<double>> next(v, std::vector<double>(v, 0.0));
            for (int a = 0; a < v; ++a)
                for (int b = 0; b < v; ++b) {
                    if (a == b) continue;
                    for (int c = 0; c < v; ++c) next[a][b] += m(a, c) * paths[c][b];
                }
            paths = next;
        }
        Rng rng = Rng::stream(seed, stream_tag::sign_flips, static_cast<std::uint64_t>(v));
        for (int b = 0; b < v; ++b) {
            const double u = rng.uniform();
            double w = 0.0;
            for (int a = 0; a < v; ++a) w += m(v, a) * paths[a][b];
            w *= m(b, v);
            if (sign * w < 0.0 && u < p) m(b, v) = -m(b, v);
        }
    }
    return m;
}

}  // namespace

TEST(BaseIid, DeterministicForSeed) {
    EXPECT_EQ(generate_base_iid(1, 7), generate_base_iid(1, 7));
    EXPECT_NE(generate_base_iid(5, 7), generate_base_iid(5, 8));
}

TEST(BaseIid, VarianceIsOneOverN) {
    const int n = 1000;
    const DenseMatrix m = generate_base_iid(n, 1);
    const double mean = m.mean();
    const double var = (m.array() - mean).square().sum() / (static_cast<double>(n) * n - 1.0);
    EXPECT_GT(var, 0.9 / n);
    EXPECT_LT(var, 1.1 / n);
    EXPECT_LT(std::abs((m * m.transpose()).trace() / n - 1.0), 0.1);
}

TEST(BaseIid, UniformToggleKeepsVariance) {
    const int n = 600;
    const DenseMatrix m = generate_base_iid(n, 3, BaseDistribution::uniform);
    const double bound = std::sqrt(3.0 / n);
    EXPECT_LE(m.cwiseAbs().maxCoeff(), bound);
    EXPECT_NEAR(m.squaredNorm() / n, 1.0, 0.02);
}

TEST(BaseIid, RejectsZeroDimension) { EXPECT_THROW(generate_base_iid(0, 1), InvalidSpec); }

TEST(DenseElliptic, PairCorrelationMatchesRho) {
    const int n = 800;
    const DenseMatrix m = generate_dense_elliptic({n, 0.5, BaseDistribution::gaussian}, 2);
    double pair = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) pair += m(i, j) * m(j, i);
    // sum over i<j of M_ij M_ji ~ (n^2/2) * rho / n
    EXPECT_NEAR(pair / (n * (n - 1) / 2.0) * n, 0.5, 0.03);
    EXPECT_NEAR(m.squaredNorm() / n, 1.0, 0.02);
}

TEST(SignFlips, ZeroProbabilityIsIdentity) {
    const DenseMatrix m = generate_base_iid(40, 9);
    EXPECT_EQ(induce_cyclic_correlations(m, {40, 3, 0.0, +1}, 9), m);
    EXPECT_EQ(induce_cyclic_correlations_reference(m, {40, 5, 0.0, -1}, 9), m);
}

TEST(SignFlips, OnlySignsChange) {
    const DenseMatrix m = generate_base_iid(60, 4);
    const DenseMatrix out = induce_cyclic_correlations(m, {60, 4, 0.7, +1}, 4);
    EXPECT_EQ(out.cwiseAbs(), m.cwiseAbs());
    EXPECT_NE(out, m);
}

TEST(SignFlips, MatchesScriptedWalkThroughAtTinyN) {
    for (int k : {3, 4, 5}) {
        for (std::uint64_t seed : {1u, 2u, 3u}) {
            const DenseMatrix m = generate_base_iid(6, seed);
            const DenseMatrix expected = scripted_sweep(m, k, 1.0, +1, seed);
            EXPECT_EQ(induce_cyclic_correlations_reference(m, {6, k, 1.0, +1}, seed), expected) << "k=" << k;
            EXPECT_EQ(induce_cyclic_correlations(m, {6, k, 1.0, +1}, seed), expected) << "k=" << k;
        }
    }
    const DenseMatrix m = generate_base_iid(6, 11);
    EXPECT_EQ(induce_cyclic_correlations(m, {6, 3, 0.5, -1}, 11), scripted_sweep(m, 3, 0.5, -1, 11));
}

// The incremental kernel must reproduce the reference bit for bit.
TEST(SignFlips, IncrementalEqualsReferenceExactly) {
    for (int n : {8, 50, 200}) {
        for (int k : {3, 4, 5, 6}) {
            for (std::uint64_t seed = 1; seed <= 5; ++seed) {
                if (n == 200 && k > 4 && seed > 2) continue;  // keep the O(k n^4) reference affordable
                const DenseMatrix m = generate_base_iid(n, seed);
                const DenseCyclicSpec spec{n, k, 0.8, (seed % 2) ? +1 : -1};
                ASSERT_EQ(induce_cyclic_correlations(m, spec, seed), induce_cyclic_correlations_reference(m, spec, seed))
                    << "n=" << n << " k=" << k << " seed=" << seed;
            }
        }
    }
}

TEST(SignFlips, FullProbabilityInducesPositiveTraceCube) {
    const DenseMatrix m = generate_dense_cyclic({500, 3, 1.0, +1}, 3);
    EXPECT_GT(trace_cube_over_n(m), 0.0);
    const DenseMatrix neg = generate_dense_cyclic({500, 3, 1.0, -1}, 3);
    EXPECT_LT(trace_cube_over_n(neg), 0.0);
}

TEST(SignFlips, UncorrelatedCaseHasSmallTraceCube) {
    const int n = 200;
    const DenseMatrix m = generate_dense_cyclic({n, 3, 0.0, +1}, 1);
    EXPECT_LT(std::abs(trace_cube_over_n(m)), 5.0 / std::sqrt(n));
}

TEST(SignFlips, OrderFourExceedsBaselineByThreeStandardErrors) {
    const int n = 500;
    std::vector<double> flipped, baseline;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        flipped.push_back(spectra::trace_power(generate_dense_cyclic({n, 4, 1.0, +1}, seed), 4));
        baseline.push_back(spectra::trace_power(generate_base_iid(n, seed), 4));
    }
    const auto f = oracle::summarize(flipped), b = oracle::summarize(baseline);
    EXPECT_GT(f.mean - b.mean, 3.0 * std::hypot(f.stderr_, b.stderr_));
}

TEST(SignFlips, RejectsBadSpecs) {
    EXPECT_THROW(induce_cyclic_correlations(generate_base_iid(3, 1), {3, 3, 0.5, +1}, 1), InvalidSpec);
    EXPECT_THROW(induce_cyclic_correlations(DenseMatrix::Zero(4, 5), {4, 3, 0.5, +1}, 1), InvalidSpec);
    EXPECT_THROW(induce_cyclic_correlations(generate_base_iid(5, 1), {5, 3, 1.5, +1}, 1), InvalidSpec);
    EXPECT_THROW(induce_cyclic_correlations(generate_base_iid(5, 1), {5, 2, 0.5, +1}, 1), InvalidSpec);
}

TEST(Combine, Definition) {
    const DenseMatrix a = generate_base_iid(20, 1);
    EXPECT_TRUE(combine_correlated(a, DenseMatrix::Zero(20, 20)).isApprox(a / std::sqrt(2.0), 1e-15));
    EXPECT_TRUE(combine_correlated(a, a).isApprox(std::sqrt(2.0) * a, 1e-15));
    EXPECT_THROW(combine_correlated(a, DenseMatrix::Zero(3, 3)), InvalidInput);
}

TEST(Combine, PreservesFrobeniusNormInExpectation) {
    const int n = 300;
    std::vector<double> ratio;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const DenseMatrix a = generate_base_iid(n, seed), b = generate_base_iid(n, seed + 1000);
        ratio.push_back(combine_correlated(a, b).squaredNorm() / (0.5 * (a.squaredNorm() + b.squaredNorm())));
    }
    EXPECT_NEAR(oracle::summarize(ratio).mean, 1.0, 0.05);
}

TEST(Combine, BothOrdersSurvive) {
    const int n = 800;
    std::vector<double> t3, t4, b3, b4;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const DenseMatrix m = combine_correlated(generate_dense_cyclic({n, 3, 1.0, +1}, seed),
                                                 generate_dense_cyclic({n, 4, 1.0, +1}, seed + 500));
        t3.push_back(spectra::trace_power(m, 3));
        t4.push_back(spectra::trace_power(m, 4));
        const DenseMatrix base = combine_correlated(generate_base_iid(n, seed), generate_base_iid(n, seed + 500));
        b3.push_back(spectra::trace_power(base, 3));
        b4.push_back(spectra::trace_power(base, 4));
    }
    const auto s3 = oracle::summarize(t3), s4 = oracle::summarize(t4);
    const auto r3 = oracle::summarize(b3), r4 = oracle::summarize(b4);
    EXPECT_GT(s3.mean, 3.0 * s3.stderr_);
    EXPECT_GT(s4.mean - r4.mean, 3.0 * std::hypot(s4.stderr_, r4.stderr_));
    EXPECT_GT(s3.mean - r3.mean, 3.0 * std::hypot(s3.stderr_, r3.stderr_));
}
