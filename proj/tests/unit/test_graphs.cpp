#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/poisson.hpp>
#include <gtest/gtest.h>

#include "trochoid/ensemble.hpp"
#include "trochoid/errors.hpp"
#include "trochoid/matrix_market.hpp"
#include "trochoid/spectra.hpp"

using namespace trochoid;
using namespace trochoid::ensemble;

namespace {

// Structural invariants of any generated digraph.
void expect_well_formed(const SparseDigraph& g) {
    std::map<std::pair<int, int>, double> expected;
    for (std::size_t c = 0; c < g.cycles.size(); ++c) {
        const auto& cyc = g.cycles[c];
        std::set<int> distinct(cyc.begin(), cyc.end());
        ASSERT_EQ(distinct.size(), cyc.size()) << "cycle " << c << " repeats a node";
        for (std::size_t i = 0; i < cyc.size(); ++i) {
            ASSERT_GE(cyc[i], 0);
            ASSERT_LT(cyc[i], g.n);
            expected[{cyc[i], cyc[(i + 1) % cyc.size()]}] += g.cycle_weights[c];
        }
    }
    ASSERT_EQ(g.edges.size(), expected.size());
    for (const Edge& e : g.edges) {
        ASSERT_NE(e.weight, 0.0);
        ASSERT_DOUBLE_EQ(e.weight, (expected[{e.source, e.target}]));
    }
}

std::vector<int> membership(const SparseDigraph& g, std::size_t first = 0, std::size_t last = SIZE_MAX) {
    std::vector<int> count(static_cast<std::size_t>(g.n), 0);
    for (std::size_t c = first; c < std::min(last, g.cycles.size()); ++c)
        for (int v : g.cycles[c]) ++count[v];
    return count;
}

std::string serialize(const SparseDigraph& g) {
    std::ostringstream out;
    io::write_matrix_market(out, g);
    out << io::cycle_sidecar(g).dump();
    return out.str();
}

}  // namespace

TEST(Regular, SingleTriangle) {
    const SparseDigraph g = generate_regular_cyclic({3, 1, 3, 1.0}, 5);
    ASSERT_EQ(g.cycles.size(), 1u);
    ASSERT_EQ(g.edges.size(), 3u);
    expect_well_formed(g);
    std::vector<int> nodes = g.cycles[0];
    std::sort(nodes.begin(), nodes.end());
    EXPECT_EQ(nodes, (std::vector<int>{0, 1, 2}));
}

TEST(Regular, EveryNodeInExactlyDCycles) {
    for (auto placement : {Placement::layered, Placement::shuffled}) {
        const SparseDigraph g = generate_regular_cyclic({999, 2, 3, 1.0, placement}, 4);
        expect_well_formed(g);
        EXPECT_EQ(g.cycles.size(), 666u);
        for (int c : membership(g)) ASSERT_EQ(c, 2);
        const DenseMatrix m = adjacency_matrix(g);
        for (int i = 0; i < g.n; ++i) {
            ASSERT_DOUBLE_EQ(m.row(i).sum(), 2.0);
            ASSERT_DOUBLE_EQ(m.col(i).sum(), 2.0);
        }
        EXPECT_EQ(m.trace(), 0.0);
    }
}

TEST(Regular, ShuffledPlacementHandlesNonDivisibleN) {
    const SparseDigraph g = generate_regular_cyclic({10, 3, 5, 1.0}, 1);  // 10 % 5 == 0 -> layered
    expect_well_formed(g);
    const SparseDigraph h = generate_regular_cyclic({8, 3, 3, 1.0}, 1);  // 8 % 3 != 0 -> shuffled + repair
    expect_well_formed(h);
    for (int c : membership(h)) EXPECT_EQ(c, 3);
    EXPECT_THROW(generate_regular_cyclic({8, 3, 3, 1.0, Placement::layered}, 1), InvalidSpec);
}

TEST(Regular, AllOnesIsEigenvectorWithEigenvalueTwo) {
    const DenseMatrix m = adjacency_matrix(generate_regular_cyclic({999, 2, 3, 1.0}, 1));
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(999);
    EXPECT_LT((m * ones - 2.0 * ones).norm(), 1e-12);
}

TEST(Regular, LayeredSpectrumIsThreeFoldSymmetric) {
    const SparseDigraph g = generate_regular_cyclic({300, 2, 3, 1.0}, 2);
    const auto s = spectra::compute_eigenvalues(adjacency_matrix(g));
    EXPECT_LT(spectra::rotation_symmetry_residual(s, 3), 1e-8);
}

TEST(Regular, DivisibilityViolationIsInvalidSpec) {
    EXPECT_THROW(generate_regular_cyclic({10, 1, 3, 1.0}, 1), InvalidSpec);
    EXPECT_THROW(generate_regular_cyclic({10, 1, 3, 0.0}, 1), InvalidSpec);
}

TEST(Regular, ShuffledRepairSucceedsOnTightInstances) {
    // Every 4-cycle must use all four nodes; repair has to untangle repeats.
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const SparseDigraph g = generate_regular_cyclic({4, 3, 4, 1.0, Placement::shuffled}, seed);
        expect_well_formed(g);
    }
}

TEST(Poisson, RoundingGivesOneCycle) {
    const SparseDigraph g = generate_poisson_cyclic({10, 0.3, 3, 1.0}, 1);
    EXPECT_EQ(g.cycles.size(), 1u);
    EXPECT_EQ(g.edges.size(), 3u);
    expect_well_formed(g);
}

TEST(Poisson, InDegreeIsPoisson) {
    for (auto placement : {Placement::layered, Placement::shuffled}) {
        const int n = 1000;
        const SparseDigraph g = generate_poisson_cyclic({n - (placement == Placement::layered ? 1 : 0), 8.0, 3, 1.0, placement}, 7);
        expect_well_formed(g);
        const auto degree = membership(g);  // in-degree counting multiplicity
        const double mean = std::accumulate(degree.begin(), degree.end(), 0.0) / g.n;
        EXPECT_NEAR(mean, 8.0, 0.4);

        // Pool tails so every expected count is at least 5.
        const boost::math::poisson_distribution<> law(8.0);
        const int lo = 3, hi = 14;
        std::vector<double> observed(hi - lo + 1, 0.0), expected(hi - lo + 1, 0.0);
        for (int d : degree) observed[std::clamp(d, lo, hi) - lo] += 1.0;
        for (int b = lo; b <= hi; ++b) {
            double prob = boost::math::pdf(law, b);
            if (b == lo) prob = boost::math::cdf(law, lo);
            if (b == hi) prob = boost::math::cdf(boost::math::complement(law, hi - 1));
            expected[b - lo] = prob * g.n;
        }
        double chi2 = 0.0;
        for (std::size_t i = 0; i < observed.size(); ++i) chi2 += std::pow(observed[i] - expected[i], 2) / expected[i];
        const boost::math::chi_squared_distribution<> reference(static_cast<double>(observed.size() - 1));
        EXPECT_GT(boost::math::cdf(boost::math::complement(reference, chi2)), 0.01) << "chi2=" << chi2;
    }
}

TEST(Poisson, FiveCyclesGiveFiveFoldSymmetry) {
    const SparseDigraph g = generate_poisson_cyclic({1000, 8.0, 5, 1.0}, 3);
    EXPECT_EQ(spectra::cycle_length_gcd(g), 5);
    const auto s = spectra::compute_eigenvalues(adjacency_matrix(g));
    EXPECT_LT(spectra::rotation_symmetry_residual(s, 5), 1e-8);
}

TEST(Poisson, RescaledTraceCubeMatchesEffectiveRho) {
    const double scale = 1.0 / std::sqrt(8.0);
    std::vector<double> values;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        values.push_back(spectra::trace_power(adjacency_matrix(generate_poisson_cyclic({1000, 8.0, 3, 1.0}, seed), scale), 3));
    }
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / values.size();
    EXPECT_NEAR(mean, scale, 0.15 * scale);
}

TEST(Mixed, CountsPerSpecies) {
    const SparseDigraph g = generate_mixed_cyclic({12, {CycleSpecies{1, 3, 1.0}, CycleSpecies{1, 4, 1.0}}}, 1);
    expect_well_formed(g);
    int threes = 0, fours = 0;
    for (const auto& c : g.cycles) (c.size() == 3 ? threes : fours)++;
    EXPECT_EQ(threes, 4);
    EXPECT_EQ(fours, 3);
}

TEST(Mixed, FourAndFourRowSums) {
    const SparseDigraph g = generate_mixed_cyclic({996, {CycleSpecies{4, 3, 1.0}, CycleSpecies{4, 4, 1.0}}}, 2);
    expect_well_formed(g);
    const DenseMatrix m = adjacency_matrix(g);
    for (int i = 0; i < g.n; ++i) ASSERT_DOUBLE_EQ(m.row(i).sum(), 8.0);
    const std::size_t split = 4 * 996 / 3;
    for (int c : membership(g, 0, split)) ASSERT_EQ(c, 4);
    for (int c : membership(g, split)) ASSERT_EQ(c, 4);
}

TEST(Mixed, AbsentSpeciesReproducesRegular) {
    const SparseDigraph mixed = generate_mixed_cyclic({999, {CycleSpecies{2, 3, 1.0}, CycleSpecies{0, 4, 1.0}}}, 9);
    const SparseDigraph regular = generate_regular_cyclic({999, 2, 3, 1.0}, 9);
    EXPECT_EQ(serialize(mixed), serialize(regular));
}

TEST(Mixed, RejectsEqualLengths) {
    EXPECT_THROW(generate_mixed_cyclic({12, {CycleSpecies{1, 3, 1.0}, CycleSpecies{1, 3, 1.0}}}, 1), InvalidSpec);
}

TEST(Adjacency, ScaleAndAccumulation) {
    const SparseDigraph g = digraph_from_cycles(3, {{0, 1}}, {2.0});
    const DenseMatrix m = adjacency_matrix(g, 0.5);
    EXPECT_EQ(m(0, 1), 1.0);
    EXPECT_EQ(m(1, 0), 1.0);
    EXPECT_EQ(m.cwiseAbs().sum(), 2.0);

    const SparseDigraph twice = digraph_from_cycles(3, {{0, 1, 2}, {0, 1, 2}}, {1.0, 1.0});
    ASSERT_EQ(twice.edges.size(), 3u);
    for (const auto& e : twice.edges) EXPECT_EQ(e.weight, 2.0);
}

TEST(Determinism, GeneratorsAreByteIdentical) {
    EXPECT_EQ(serialize(generate_regular_cyclic({99, 2, 3, 1.0}, 5)), serialize(generate_regular_cyclic({99, 2, 3, 1.0}, 5)));
    EXPECT_EQ(serialize(generate_poisson_cyclic({100, 4.0, 3, 1.0}, 5)), serialize(generate_poisson_cyclic({100, 4.0, 3, 1.0}, 5)));
    const MixedCyclicSpec mixed{24, {CycleSpecies{2, 3, 1.0}, CycleSpecies{1, 4, -0.5}}};
    EXPECT_EQ(serialize(generate_mixed_cyclic(mixed, 5)), serialize(generate_mixed_cyclic(mixed, 5)));
    EXPECT_NE(serialize(generate_regular_cyclic({99, 2, 3, 1.0}, 5)), serialize(generate_regular_cyclic({99, 2, 3, 1.0}, 6)));
}
