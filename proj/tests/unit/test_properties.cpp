#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "trochoid/boundary.hpp"
#include "trochoid/ensemble.hpp"
#include "trochoid/matrix_market.hpp"
#include "trochoid/rng.hpp"
#include "trochoid/spectra.hpp"

using namespace trochoid;
using std::numbers::pi;

namespace {

constexpr std::uint64_t property_tag = 901;

std::string serialize(const SparseDigraph& g) {
    std::ostringstream out;
    io::write_matrix_market(out, g);
    out << io::cycle_sidecar(g).dump();
    return out.str();
}

}  // namespace

TEST(Property, HypotrochoidRotationSymmetry) {
    Rng rng = Rng::stream(1, property_tag, 0);
    for (int trial = 0; trial < 200; ++trial) {
        const int k = 2 + static_cast<int>(rng.below(8));
        const double rho = 2.0 * rng.uniform() - 1.0;
        const double phi = 2.0 * pi * rng.uniform();
        const auto p = boundary::as_polytrochoid({k, rho});
        const auto lhs = boundary::polytrochoid_point(p, phi + 2.0 * pi / k);
        const auto rhs = std::polar(1.0, -2.0 * pi / k) * boundary::polytrochoid_point(p, phi);
        ASSERT_LT(std::abs(lhs - rhs), 1e-13) << "k=" << k << " rho=" << rho;
    }
}

TEST(Property, SparseLawRotationSymmetry) {
    Rng rng = Rng::stream(2, property_tag, 0);
    for (int trial = 0; trial < 100; ++trial) {
        const int k = 2 + static_cast<int>(rng.below(6));
        const auto p = boundary::make_sparse_params(0.5 + 10.0 * rng.uniform(), k);
        const double phi = 2.0 * pi * rng.uniform();
        ASSERT_LT(std::abs(boundary::sparse_point(p, phi + 2.0 * pi / k) -
                           std::polar(1.0, -2.0 * pi / k) * boundary::sparse_point(p, phi)),
                  1e-12);
    }
}

TEST(Property, CuspThresholdAcrossOrders) {
    for (int k = 3; k <= 7; ++k) {
        const double threshold = 1.0 / (k - 1);
        EXPECT_FALSE(boundary::cusp_or_loop({k, 0.97 * threshold})) << k;
        EXPECT_TRUE(boundary::cusp_or_loop({k, 1.03 * threshold})) << k;
    }
}

TEST(Property, ContainmentMonotoneInInflation) {
    Rng rng = Rng::stream(3, property_tag, 0);
    spectra::Spectrum s;
    for (int i = 0; i < 400; ++i) s.eigenvalues.emplace_back(3.0 * rng.uniform() - 1.5, 3.0 * rng.uniform() - 1.5);
    for (int k : {3, 4, 5}) {
        const auto curve = boundary::dense_hypotrochoid({k, 0.2}, 1024);
        int previous = -1;
        for (double inflation = 0.0; inflation <= 0.5; inflation += 0.05) {
            const int inside = spectra::containment(s, curve, inflation).inside;
            ASSERT_GE(inside, previous);
            previous = inside;
        }
    }
}

TEST(Property, GeneratorsAreDeterministic) {
    using namespace ensemble;
    const DenseEllipticSpec elliptic{40, 0.4};
    EXPECT_EQ(generate_dense_elliptic(elliptic, 5), generate_dense_elliptic(elliptic, 5));
    EXPECT_NE(generate_dense_elliptic(elliptic, 5), generate_dense_elliptic(elliptic, 6));
    const DenseCyclicSpec cyclic{40, 4, 0.5};
    EXPECT_EQ(generate_dense_cyclic(cyclic, 5), generate_dense_cyclic(cyclic, 5));
    EXPECT_EQ(generate_base_iid(30, 9, BaseDistribution::uniform), generate_base_iid(30, 9, BaseDistribution::uniform));

    for (Placement placement : {Placement::layered, Placement::shuffled}) {
        const RegularCyclicSpec regular{60, 3, 3, 1.0, placement};
        EXPECT_EQ(serialize(generate_regular_cyclic(regular, 5)), serialize(generate_regular_cyclic(regular, 5)));
        EXPECT_NE(serialize(generate_regular_cyclic(regular, 5)), serialize(generate_regular_cyclic(regular, 6)));
        const PoissonCyclicSpec poisson{60, 3.0, 3, 1.0, placement};
        EXPECT_EQ(serialize(generate_poisson_cyclic(poisson, 5)), serialize(generate_poisson_cyclic(poisson, 5)));
        const MixedCyclicSpec mixed{120, {CycleSpecies{2, 3, 1.0}, CycleSpecies{1, 4, 0.5}}, placement};
        EXPECT_EQ(serialize(generate_mixed_cyclic(mixed, 5)), serialize(generate_mixed_cyclic(mixed, 5)));
    }
}
