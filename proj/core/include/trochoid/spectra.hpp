#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "trochoid/boundary.hpp"
#include "trochoid/ensemble.hpp"

namespace trochoid::spectra {

using Complex = std::complex<double>;

inline constexpr int default_eigen_cap = 4000;

struct Spectrum {
    std::vector<Complex> eigenvalues;
    std::string source;
};

/// Dense real nonsymmetric eigensolve (Hessenberg reduction + shifted QR).
/// Throws InvalidInput above `cap` and EigensolverFailure when QR does not
/// converge.
Spectrum compute_eigenvalues(const DenseMatrix& m, std::string source = {}, int cap = default_eigen_cap);

/// Eigenvalues pinned by constant row sums: when every row of the adjacency
/// matrix (at `scale`) sums to r, r is an eigenvalue, and when every recorded
/// cycle length is divisible by g so are r e^{2 pi i j / g}. Returns the
/// spectrum entries within 1e-6 of those points; empty for non-constant rows.
std::vector<Complex> detect_deterministic_outliers(const Spectrum& s, const SparseDigraph& g, double scale = 1.0);

/// Exact algebraic multiplicity of the eigenvalue 0 of the graph's adjacency
/// matrix: n - rank(A^j) once the rank sequence stops decreasing, with ranks
/// taken over GF(2^31 - 1). nullopt when the edge weights are
/// not integer multiples of a common unit.
std::optional<int> zero_eigenvalue_multiplicity(const SparseDigraph& g);

/// Floating-point QR splits a defective zero eigenvalue into a small ring of
/// radius ~ eps^{1/m}. Replaces the `multiplicity` smallest-modulus eigenvalues
/// by exact zeros when they are clearly separated from the rest (largest of
/// them <= 1e-2 * spectral radius and <= half the next modulus). Returns the
/// number replaced.
int snap_zero_eigenvalues(Spectrum& s, int multiplicity);

/// gcd of recorded cycle lengths (0 for a graph without cycles).
int cycle_length_gcd(const SparseDigraph& g);

struct ContainmentReport {
    int total = 0;
    int inside = 0;
    std::vector<Complex> excluded_outliers;
    double worst_violation = 0.0;  // outward distance / mean curve radius

    int outside() const { return total - inside - static_cast<int>(excluded_outliers.size()); }
    double inside_fraction() const;  // inside / (total - excluded)
};

/// Nonzero winding number of `polygon` (implicitly closed) around `p`.
int winding_number(Complex p, std::span<const Complex> polygon);

/// Distance from p to the closed polygon's edges.
double distance_to_polygon(Complex p, std::span<const Complex> polygon);

/// Counts eigenvalues inside the curve scaled by (1 + inflation) about its
/// centroid, using the nonzero-winding rule. Each entry of `exclusions`
/// removes one matching eigenvalue from the count.
ContainmentReport containment(const Spectrum& s, const boundary::BoundaryCurve& curve, double inflation,
                              std::span<const Complex> exclusions = {});

/// (sum_i lambda_i^k) / n. Throws InvalidInput if the imaginary part exceeds 1e-8.
double empirical_pure_moment(const Spectrum& s, int k);

/// Tr (M M^T)^l / n by symmetric matrix powers; l = 1 is ||M||_F^2 / n.
double empirical_mixed_moment(const DenseMatrix& m, int l);

/// Tr M^k / n by repeated multiplication (no eigensolve).
double trace_power(const DenseMatrix& m, int k);

/// (1 / (2l + 1)) C(3l, l) rho3^l.
double fuss_catalan_prediction(int l, double rho3);

/// Candidate prefactors for the limiting Tr (M M^T)^l / n of an i.i.d. matrix.
enum class MixedPrefactor {
    catalan,   // C(2l, l) / (l + 1)
    printed,   // C(2l, l) / l
};
double mixed_moment_prediction(int l, MixedPrefactor prefactor);

/// A^{(m)}(l, d_hat) = (d / l) sum_{j=0}^{l-1} C(ml, j) (l - j) (d_hat - 1)^j.
double tree_walk_prediction(int m_kind, int l, double d, double d_hat);

/// Exact count of closed walks from the root. m_kind = 2: walks of length 2l on
/// an undirected tree whose root has d neighbours and every other node has
/// `branching` children. m_kind = 3: walks of length 3l along directed
/// triangles of a cactus in which the root lies on d triangles and every other
/// node on `branching` further ones.
std::uint64_t brute_force_tree_walks(int m_kind, int l, int d, int branching);

/// Minimal-cost matching distance between {lambda} and {e^{2 pi i / k} lambda},
/// divided by n.
double rotation_symmetry_residual(const Spectrum& s, int k);

/// Max over eigenvalues of the distance to the nearest conjugate partner.
double conjugation_residual(const Spectrum& s);

struct MomentReport {
    enum class Kind { pure, mixed };
    Kind kind = Kind::pure;
    int order = 1;
    double empirical = 0.0;
    double predicted = 0.0;
    double stderr_ = 0.0;
};

nlohmann::json to_json(const ContainmentReport& r);
nlohmann::json to_json(const MomentReport& r);

void write_spectrum_csv(std::ostream& out, const Spectrum& s);  // re,im
Spectrum read_spectrum_csv(std::istream& in);

}  // namespace trochoid::spectra
