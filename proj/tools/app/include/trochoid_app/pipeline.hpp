#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "trochoid/boundary.hpp"
#include "trochoid/ensemble.hpp"
#include "trochoid/spectra.hpp"
#include "trochoid_app/config.hpp"

namespace trochoid::app {

/// One realisation: the matrix whose spectrum is studied and, for digraph
/// ensembles, the graph it came from.
struct Instance {
    DenseMatrix matrix;
    std::optional<SparseDigraph> graph;
};

Instance generate_instance(const ensemble::EnsembleSpec& spec, std::uint64_t seed);

/// Law predicted for `spec`; dense-cyclic uses the measured rho_k of `s`.
boundary::LawParams auto_law(const ensemble::EnsembleSpec& spec, const spectra::Spectrum& s);

boundary::BoundaryCurve build_curve(const boundary::LawParams& law, int n_samples);

/// Moment orders reported when the config does not list any.
MomentRequest default_moments(const ensemble::EnsembleSpec& spec);

/// Writes the matrix (array form) or digraph (coordinate form + cycle sidecar
/// next to it, extension .json). Returns the paths written.
std::vector<std::filesystem::path> run_generate(const ensemble::EnsembleSpec& spec, std::uint64_t seed,
                                                const std::filesystem::path& out);

/// Full verification report: optional calibration, then one entry per seed
/// (failures are recorded per seed and do not abort the batch), then
/// aggregates. Writes per-seed CSV/SVG artifacts and report.json when an
/// output directory is configured.
nlohmann::json run_verify(const ExperimentConfig& config);

/// Trace moments of a stored matrix; `rho3` adds Fuss-Catalan predictions
/// for pure orders divisible by 3.
nlohmann::json run_moments(const DenseMatrix& m, const std::vector<int>& pure, const std::vector<int>& mixed,
                           std::optional<double> rho3 = std::nullopt);

}  // namespace trochoid::app
