#pragma once

#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

#include "trochoid/ensemble.hpp"

namespace trochoid::app {

struct CalibrationPoint {
    double flip_prob;
    double mean_rho;
};

struct CalibrationResult {
    double flip_prob = 0.0;
    double mean_rho = 0.0;
    int bisection_steps = 0;
    std::vector<CalibrationPoint> sweep;  // the fixed grid p = 0, 0.25, ..., 1
};

/// Finds p with mean_seeds(Tr M^k / n) within `tolerance` (relative) of
/// `target_rho` for the dense-cyclic ensemble `base` (its flip_prob is
/// ignored). The grid sweep must be monotone and bracket the target, else a
/// CalibrationError reports the achievable interval. A zero target returns
/// p = 0 without any generation.
CalibrationResult calibrate_flip_prob(const ensemble::DenseCyclicSpec& base, double target_rho,
                                      const std::vector<std::uint64_t>& seeds, double tolerance = 0.10);

nlohmann::json to_json(const CalibrationResult& r);

}  // namespace trochoid::app
