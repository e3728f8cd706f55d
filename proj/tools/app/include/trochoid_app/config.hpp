#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "trochoid/boundary.hpp"
#include "trochoid/ensemble.hpp"
#include "trochoid/errors.hpp"

namespace trochoid::app {

/// Malformed or inconsistent experiment configuration (exit code 2).
class ConfigError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "config-error"; }
};

/// Requested correlation strength cannot be reached by the flip sweep.
class CalibrationError : public Error {
public:
    CalibrationError(const std::string& what, double lo, double hi) : Error(what), lo_(lo), hi_(hi) {}
    const char* kind() const noexcept override { return "calibration-error"; }
    double achievable_lo() const noexcept { return lo_; }
    double achievable_hi() const noexcept { return hi_; }

private:
    double lo_;
    double hi_;
};

struct AutoBoundary {};
using BoundarySelection = std::variant<AutoBoundary, boundary::LawParams>;

/// Flip-probability calibration for dense-cyclic ensembles. When present, the
/// spec's flip_prob is replaced by the calibrated value before generation.
struct CalibrationRequest {
    double target_rho = 0.0;
    std::vector<std::uint64_t> seeds{1, 2};
    double tolerance = 0.10;
};

struct MomentRequest {
    std::vector<int> pure;   // orders k of Tr M^k / n
    std::vector<int> mixed;  // orders l of Tr (M M^T)^l / n
};

struct OutputOptions {
    std::optional<std::filesystem::path> dir;  // per-seed CSVs and report.json
    bool svg = false;
};

struct ExperimentConfig {
    std::string name;
    ensemble::EnsembleSpec ensemble = ensemble::DenseEllipticSpec{};
    BoundarySelection boundary = AutoBoundary{};
    std::vector<std::uint64_t> seeds;
    double inflation = 0.03;
    bool exclude_outliers = true;
    int boundary_samples = 2048;
    std::optional<CalibrationRequest> calibration;
    std::optional<MomentRequest> moments;  // defaults chosen per ensemble when absent
    OutputOptions outputs;
};

ensemble::EnsembleSpec parse_ensemble(const nlohmann::json& j);
nlohmann::json ensemble_to_json(const ensemble::EnsembleSpec& spec);

boundary::LawParams parse_law(const nlohmann::json& j);

ExperimentConfig parse_config(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& c);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Checks everything that can be checked before any generation work.
void validate_config(const ExperimentConfig& c);

}  // namespace trochoid::app
