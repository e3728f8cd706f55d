#pragma once

#include <array>
#include <complex>
#include <iosfwd>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace trochoid::boundary {

using Complex = std::complex<double>;

inline constexpr int min_samples = 512;

/// z(phi) = e^{-i phi} + rho e^{i(k-1) phi}.
struct HypotrochoidParams {
    int k = 3;
    double rho = 0.0;
};

/// z(phi) = e^{-i phi} + sum_k rho_k e^{i(k-1) phi}.
struct PolytrochoidParams {
    std::map<int, double> terms;
};

/// Sparse cyclic digraph law. `t` is the segment-depth root; build with
/// make_sparse_params() so it is always solved.
struct SparseCyclicParams {
    double d_hat = 1.0;
    int k = 3;
    double weight = 1.0;
    double t = 0.0;
};

struct MixedSpecies {
    double d = 1.0;
    int k = 3;
    double weight = 1.0;
};

/// Two competing cycle species (d_r cycles of length k_r and weight w_r per node).
struct MixedCycleParams {
    std::array<MixedSpecies, 2> species{};
};

/// Large-degree closed form of the mixed law.
struct MixedAsymptoticParams {
    MixedCycleParams mixed;
};

/// One accepted point of the mixed-cycle continuation.
struct MixedCycleState {
    double phi1 = 0.0;
    double t1 = 0.0;
    double t2 = 0.0;
    double phi2 = 0.0;
    double residual = 0.0;
};

using LawParams = std::variant<HypotrochoidParams, PolytrochoidParams, SparseCyclicParams,
                               MixedCycleParams, MixedAsymptoticParams>;

struct CurveSample {
    double phi;
    Complex z;
};

/// Closed parametric curve sampled at phi_i = 2 pi i / n, i = 0 ... n-1; the
/// last sample connects back to the first.
struct BoundaryCurve {
    std::vector<CurveSample> samples;
    LawParams law;
    // Populated by mixed_cycle_boundary only.
    std::vector<MixedCycleState> continuation;
    int step_halvings = 0;
    double closure_error = 0.0;

    std::vector<Complex> points() const;
    Complex centroid() const;
    double mean_radius() const;
};

std::string law_name(const LawParams& law);
nlohmann::json law_to_json(const LawParams& law);

// --- dense laws -------------------------------------------------------------

Complex polytrochoid_point(const PolytrochoidParams& params, double phi);
Complex polytrochoid_velocity(const PolytrochoidParams& params, double phi);
PolytrochoidParams as_polytrochoid(const HypotrochoidParams& params);

BoundaryCurve dense_hypotrochoid(const HypotrochoidParams& params, int n_samples = 2048);
BoundaryCurve dense_polytrochoid(const PolytrochoidParams& params, int n_samples = 2048);

/// Net rotation of the tangent of the sampled polygon, in full turns. A simple
/// curve traversed clockwise gives -1; once the hypotrochoid passes its cusp
/// threshold the extra loops raise it to k-1.
int tangent_turning_number(const BoundaryCurve& curve);

/// min over phi of |dz/dphi|; zero exactly at the cusp threshold.
double min_speed(const HypotrochoidParams& params, int n_samples = 1 << 16);

/// True once |rho|(k-1) >= 1, decided from the sampled geometry (a vanishing
/// tangent or a turning number other than -1).
bool cusp_or_loop(const HypotrochoidParams& params, int n_samples = 1 << 18);

// --- sparse cyclic digraphs -------------------------------------------------

/// Unique root in (0, 1) of d_hat * sum_{j=1}^{k-1} t^{2j} = 1.
double solve_segment_depth(double d_hat, int k);
double segment_depth_residual(double t, double d_hat, int k);
/// d_hat t^{2k} - (d_hat + 1) t^2 + 1, which carries the spurious root t = 1.
double printed_polynomial(double t, double d_hat, int k);

SparseCyclicParams make_sparse_params(double d_hat, int k, double weight = 1.0);
Complex sparse_point(const SparseCyclicParams& params, double phi);
BoundaryCurve sparse_hypotrochoid(const SparseCyclicParams& params, int n_samples = 2048);

// --- mixed cycle species ----------------------------------------------------

/// Residuals of (condt, Re extracond, Im extracond) at a state.
std::array<double, 3> mixed_residual(const MixedCycleParams& params, const MixedCycleState& state);

/// Symmetric real solution at phi_1 = phi_2 = 0.
MixedCycleState mixed_cycle_seed(const MixedCycleParams& params);

/// Continues from the phi_1 = 0 seed to `phi1`.
MixedCycleState mixed_cycle_solve(const MixedCycleParams& params, double phi1);

Complex mixed_boundary_point(const MixedCycleParams& params, const MixedCycleState& state);
BoundaryCurve mixed_cycle_boundary(const MixedCycleParams& params, int n_samples = 2048);

double mixed_mean_degree(const MixedCycleParams& params);  // sqrt(d1 w1^2 + d2 w2^2)
BoundaryCurve mixed_cycle_asymptotic(const MixedCycleParams& params, int n_samples = 2048);

// --- interior ---------------------------------------------------------------

/// Solution h of z = conj(h) + sum_k rho_k h^{k-1} on the branch continued
/// from h = conj(z) at rho = 0. `mu` is the density (1/pi) dh/dconj(z) from
/// implicit differentiation, zero outside the support (|h| > 1).
struct GreensFixedPoint {
    Complex z;
    Complex h;
    double mu = 0.0;
    bool inside = false;
    double residual = 0.0;
};

/// Throws OutsideSupport when the branch cannot be tracked.
GreensFixedPoint interior_fixed_point(Complex z, const PolytrochoidParams& params);

struct GridSpec {
    double re_min = -1.0;
    double re_max = 1.0;
    double im_min = -1.0;
    double im_max = 1.0;
    int nx = 256;
    int ny = 256;

    double dx() const { return (re_max - re_min) / nx; }
    double dy() const { return (im_max - im_min) / ny; }
    Complex cell_center(int ix, int iy) const;
};

/// Bounding box of the curve grown by `margin` (fraction of each extent).
GridSpec grid_around(const BoundaryCurve& curve, int nx, int ny, double margin = 0.02);

struct DensityPoint {
    Complex z;
    double mu;
};

struct DensityField {
    GridSpec grid;
    std::vector<DensityPoint> points;  // row-major over (iy, ix)
    double integral() const;
};

/// mu = (1/pi) Re dh/dconj(z) by central differences with step 1/256 of the
/// grid diagonal; zero at cell centres outside the support.
DensityField interior_density(const PolytrochoidParams& params, const GridSpec& grid);

// --- CSV --------------------------------------------------------------------

void write_curve_csv(std::ostream& out, const BoundaryCurve& curve);  // phi,re,im
BoundaryCurve read_curve_csv(std::istream& in);
void write_density_csv(std::ostream& out, const DensityField& field);  // re,im,mu

}  // namespace trochoid::boundary
