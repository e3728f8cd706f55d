#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace trochoid {

/// Real N x N matrix. Entry (u, v) is the weight of the edge u -> v.
using DenseMatrix = Eigen::MatrixXd;

struct Edge {
    int source;
    int target;
    double weight;
};

/// Weighted digraph built from recorded cycles. Edges are unique per ordered
/// pair (weights of coinciding cycle edges accumulate) and sorted by
/// (source, target).
struct SparseDigraph {
    int n = 0;
    std::vector<Edge> edges;
    std::vector<std::vector<int>> cycles;
    std::vector<double> cycle_weights;  // one entry per recorded cycle
};

namespace ensemble {

enum class BaseDistribution { gaussian, uniform };

struct DenseEllipticSpec {
    int n = 0;
    double rho = 0.0;  // E[M_ij M_ji] * n
    BaseDistribution distribution = BaseDistribution::gaussian;
};

struct DenseCyclicSpec {
    int n = 0;
    int k = 3;
    double flip_prob = 0.0;
    int sign = +1;  // target sign of the induced k-cycle weights
    BaseDistribution distribution = BaseDistribution::gaussian;
};

/// How cycle tuples are drawn. `layered` splits the nodes into k classes by
/// id mod k and fills position j of every cycle from class j, so each edge
/// runs from class j to class j+1 and the graph is exactly k-periodic.
/// `shuffled` draws from all nodes at once and may close walks whose length is
/// not a multiple of k. `automatic` picks `layered` whenever k divides n.
enum class Placement { automatic, layered, shuffled };

struct RegularCyclicSpec {
    int n = 0;
    int d = 1;  // cycles per node
    int k = 3;  // cycle length
    double weight = 1.0;
    Placement placement = Placement::automatic;
};

struct PoissonCyclicSpec {
    int n = 0;
    double mean_degree = 1.0;
    int k = 3;
    double weight = 1.0;
    Placement placement = Placement::automatic;
};

struct CycleSpecies {
    int d = 0;
    int k = 3;
    double weight = 1.0;
};

struct MixedCyclicSpec {
    int n = 0;
    std::array<CycleSpecies, 2> species{};
    Placement placement = Placement::automatic;  // applied per species
};

using EnsembleSpec = std::variant<DenseEllipticSpec, DenseCyclicSpec, RegularCyclicSpec,
                                  PoissonCyclicSpec, MixedCyclicSpec>;

std::string ensemble_name(const EnsembleSpec& spec);
std::string placement_name(Placement p);
Placement parse_placement(const std::string& name);  // throws InvalidSpec
/// Resolves `automatic` for cycle length k on n nodes.
bool uses_layers(Placement p, int n, int k);
bool is_digraph(const EnsembleSpec& spec);
int dimension(const EnsembleSpec& spec);

// Throw InvalidSpec when the spec's invariants do not hold.
void validate(const DenseEllipticSpec& spec);
void validate(const DenseCyclicSpec& spec);
void validate(const RegularCyclicSpec& spec);
void validate(const PoissonCyclicSpec& spec);
void validate(const MixedCyclicSpec& spec);
void validate(const EnsembleSpec& spec);

/// i.i.d. entries with mean 0 and variance 1/n. Row i is drawn from its own
/// stream, so the result does not depend on evaluation order.
DenseMatrix generate_base_iid(int n, std::uint64_t seed,
                              BaseDistribution distribution = BaseDistribution::gaussian);

/// Pairwise-correlated (elliptic) ensemble: E[M_ij^2] = 1/n and
/// E[M_ij M_ji] = rho/n for i != j.
DenseMatrix generate_dense_elliptic(const DenseEllipticSpec& spec, std::uint64_t seed);

/// Sign-flipping sweep that induces order-k cyclic correlations.
///
/// For v = k-1 ... n-1 the aggregate weight of k-cycles closed by each in-edge
/// b -> v (b < v) is
///
///     w(b) = sum_a M[v,a] * P_{k-2}[a,b] * M[b,v]
///
/// where P is the path-weight recursion on the leading v x v block S:
/// P_1 = S, P_j = S P_{j-1} - diag(S P_{j-1}). Whenever sign * w(b) < 0 the
/// entry M[b,v] flips sign with probability `flip_prob`. Only signs change.
///
/// This version maintains the powers of S incrementally and needs only
/// vector-matrix products per step: O(k^2 n^3) overall.
DenseMatrix induce_cyclic_correlations(DenseMatrix m, const DenseCyclicSpec& spec,
                                       std::uint64_t seed);

/// Same sweep, recomputing P_{k-2} from scratch with dense products at every
/// step (O(k n^4)). Kept as the reference the incremental version is checked
/// against.
DenseMatrix induce_cyclic_correlations_reference(DenseMatrix m, const DenseCyclicSpec& spec,
                                                 std::uint64_t seed);

DenseMatrix generate_dense_cyclic(const DenseCyclicSpec& spec, std::uint64_t seed);

/// (a + b) / sqrt(2).
DenseMatrix combine_correlated(const DenseMatrix& a, const DenseMatrix& b);

SparseDigraph generate_regular_cyclic(const RegularCyclicSpec& spec, std::uint64_t seed);
SparseDigraph generate_poisson_cyclic(const PoissonCyclicSpec& spec, std::uint64_t seed);
SparseDigraph generate_mixed_cyclic(const MixedCyclicSpec& spec, std::uint64_t seed);

/// M[u,v] = scale * (sum of weights of edges u -> v).
DenseMatrix adjacency_matrix(const SparseDigraph& g, double scale = 1.0);

/// Assemble a digraph from cycle tuples; edges of coinciding cycles accumulate.
SparseDigraph digraph_from_cycles(int n, std::vector<std::vector<int>> cycles,
                                  std::vector<double> weights);

}  // namespace ensemble
}  // namespace trochoid
