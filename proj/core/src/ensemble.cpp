#include "trochoid/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include "trochoid/errors.hpp"
#include "trochoid/rng.hpp"

namespace trochoid::ensemble {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Unit-variance draw from the requested base law.
double unit_draw(Rng& rng, BaseDistribution distribution) {
    if (distribution == BaseDistribution::uniform) {
        return std::sqrt(3.0) * (2.0 * rng.uniform() - 1.0);
    }
    return rng.normal();
}

void require(bool condition, const std::string& message) {
    if (!condition) throw InvalidSpec(message);
}

void validate_species(int n, const CycleSpecies& s, const std::string& label) {
    require(s.d >= 0, label + ": cycles per node must be non-negative");
    require(s.k >= 2, label + ": cycle length must be at least 2");
    require(s.k <= n, label + ": cycle length exceeds node count");
    require(s.weight != 0.0 && std::isfinite(s.weight), label + ": edge weight must be finite and non-zero");
    require((static_cast<long long>(s.d) * n) % s.k == 0,
            label + ": d*n = " + std::to_string(static_cast<long long>(s.d) * n) +
                " is not divisible by k = " + std::to_string(s.k));
}

void require_layerable(Placement p, int n, int k, const std::string& label) {
    require(p != Placement::layered || n % k == 0,
            label + ": layered placement needs n divisible by k = " + std::to_string(k));
}

}  // namespace

std::string placement_name(Placement p) {
    switch (p) {
        case Placement::layered: return "layered";
        case Placement::shuffled: return "shuffled";
        case Placement::automatic: break;
    }
    return "automatic";
}

Placement parse_placement(const std::string& name) {
    if (name == "automatic") return Placement::automatic;
    if (name == "layered") return Placement::layered;
    if (name == "shuffled") return Placement::shuffled;
    throw InvalidSpec("unknown placement '" + name + "' (expected automatic, layered or shuffled)");
}

bool uses_layers(Placement p, int n, int k) {
    return p == Placement::layered || (p == Placement::automatic && n % k == 0);
}

std::string ensemble_name(const EnsembleSpec& spec) {
    return std::visit(overloaded{
                          [](const DenseEllipticSpec&) { return std::string("dense-elliptic"); },
                          [](const DenseCyclicSpec&) { return std::string("dense-cyclic"); },
                          [](const RegularCyclicSpec&) { return std::string("regular-cyclic"); },
                          [](const PoissonCyclicSpec&) { return std::string("poisson-cyclic"); },
                          [](const MixedCyclicSpec&) { return std::string("mixed-cyclic"); },
                      },
                      spec);
}

bool is_digraph(const EnsembleSpec& spec) {
    return !std::holds_alternative<DenseEllipticSpec>(spec) &&
           !std::holds_alternative<DenseCyclicSpec>(spec);
}

int dimension(const EnsembleSpec& spec) {
    return std::visit([](const auto& s) { return s.n; }, spec);
}

void validate(const DenseEllipticSpec& spec) {
    require(spec.n >= 1, "dense-elliptic: n must be positive");
    require(std::abs(spec.rho) <= 1.0, "dense-elliptic: |rho| must not exceed 1");
}

void validate(const DenseCyclicSpec& spec) {
    require(spec.n >= 1, "dense-cyclic: n must be positive");
    require(spec.k >= 3, "dense-cyclic: k must be at least 3");
    require(spec.k < spec.n, "dense-cyclic: k must be smaller than n");
    require(spec.flip_prob >= 0.0 && spec.flip_prob <= 1.0, "dense-cyclic: flip probability must lie in [0, 1]");
    require(spec.sign == 1 || spec.sign == -1, "dense-cyclic: sign must be +1 or -1");
}

void validate(const RegularCyclicSpec& spec) {
    require(spec.n >= 1, "regular-cyclic: n must be positive");
    require(spec.d >= 1, "regular-cyclic: d must be at least 1");
    validate_species(spec.n, CycleSpecies{spec.d, spec.k, spec.weight}, "regular-cyclic");
    require_layerable(spec.placement, spec.n, spec.k, "regular-cyclic");
}

void validate(const PoissonCyclicSpec& spec) {
    require(spec.n >= 1, "poisson-cyclic: n must be positive");
    require(spec.mean_degree > 0.0 && std::isfinite(spec.mean_degree), "poisson-cyclic: mean degree must be positive");
    require(spec.k >= 2 && spec.k <= spec.n, "poisson-cyclic: cycle length must lie in [2, n]");
    require(spec.weight != 0.0 && std::isfinite(spec.weight), "poisson-cyclic: edge weight must be finite and non-zero");
    require(std::llround(spec.mean_degree * spec.n / spec.k) >= 1,
            "poisson-cyclic: round(<d> n / k) must be at least 1");
    require_layerable(spec.placement, spec.n, spec.k, "poisson-cyclic");
}

void validate(const MixedCyclicSpec& spec) {
    require(spec.n >= 1, "mixed-cyclic: n must be positive");
    validate_species(spec.n, spec.species[0], "mixed-cyclic species 1");
    validate_species(spec.n, spec.species[1], "mixed-cyclic species 2");
    require(spec.species[0].d + spec.species[1].d > 0, "mixed-cyclic: at least one species must be present");
    if (spec.species[0].d > 0 && spec.species[1].d > 0) {
        require(spec.species[0].k != spec.species[1].k, "mixed-cyclic: species must have distinct cycle lengths");
    }
    for (const auto& s : spec.species) {
        if (s.d > 0) require_layerable(spec.placement, spec.n, s.k, "mixed-cyclic");
    }
}

void validate(const EnsembleSpec& spec) {
    std::visit([](const auto& s) { validate(s); }, spec);
}

DenseMatrix generate_base_iid(int n, std::uint64_t seed, BaseDistribution distribution) {
    if (n < 1) throw InvalidSpec("base matrix: n must be positive");
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    DenseMatrix m(n, n);
    for (int i = 0; i < n; ++i) {
        Rng rng = Rng::stream(seed, stream_tag::base_entries, static_cast<std::uint64_t>(i));
        for (int j = 0; j < n; ++j) m(i, j) = scale * unit_draw(rng, distribution);
    }
    return m;
}

DenseMatrix generate_dense_elliptic(const DenseEllipticSpec& spec, std::uint64_t seed) {
    validate(spec);
    const int n = spec.n;
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    const double a = std::sqrt((1.0 + spec.rho) / 2.0);
    const double b = std::sqrt((1.0 - spec.rho) / 2.0);
    DenseMatrix m(n, n);
    for (int i = 0; i < n; ++i) {
        Rng rng = Rng::stream(seed, stream_tag::elliptic, static_cast<std::uint64_t>(i));
        m(i, i) = scale * unit_draw(rng, spec.distribution);
        for (int j = i + 1; j < n; ++j) {
            const double x = unit_draw(rng, spec.distribution);
            const double y = unit_draw(rng, spec.distribution);
            m(i, j) = scale * (a * x + b * y);
            m(j, i) = scale * (a * x - b * y);
        }
    }
    return m;
}

DenseMatrix generate_dense_cyclic(const DenseCyclicSpec& spec, std::uint64_t seed) {
    validate(spec);
    return induce_cyclic_correlations(generate_base_iid(spec.n, seed, spec.distribution), spec, seed);
}

DenseMatrix combine_correlated(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw InvalidInput("combine_correlated: dimension mismatch");
    }
    return (a + b) / std::sqrt(2.0);
}

SparseDigraph digraph_from_cycles(int n, std::vector<std::vector<int>> cycles,
                                  std::vector<double> weights) {
    if (weights.size() != cycles.size()) {
        throw InvalidInput("digraph: one weight per cycle required");
    }
    std::map<std::pair<int, int>, double> accumulated;
    for (std::size_t c = 0; c < cycles.size(); ++c) {
        const auto& cycle = cycles[c];
        const std::size_t len = cycle.size();
        for (std::size_t i = 0; i < len; ++i) {
            const int u = cycle[i];
            const int v = cycle[(i + 1) % len];
            if (u < 0 || u >= n || v < 0 || v >= n) {
                throw InvalidInput("digraph: node id outside [0, n)");
            }
            accumulated[{u, v}] += weights[c];
        }
    }
    SparseDigraph g;
    g.n = n;
    g.edges.reserve(accumulated.size());
    for (const auto& [key, w] : accumulated) {
        // Opposite-sign weights can cancel exactly; drop those pairs.
        if (w != 0.0) g.edges.push_back(Edge{key.first, key.second, w});
    }
    g.cycles = std::move(cycles);
    g.cycle_weights = std::move(weights);
    return g;
}

DenseMatrix adjacency_matrix(const SparseDigraph& g, double scale) {
    DenseMatrix m = DenseMatrix::Zero(g.n, g.n);
    for (const Edge& e : g.edges) m(e.source, e.target) += scale * e.weight;
    return m;
}

}  // namespace trochoid::ensemble
