#include "trochoid_app/calibrate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "trochoid/spectra.hpp"
#include "trochoid_app/config.hpp"
#include "trochoid_app/parallel.hpp"

namespace trochoid::app {

namespace {

constexpr std::array<double, 5> grid{0.0, 0.25, 0.5, 0.75, 1.0};
constexpr int max_bisection_steps = 30;

class RhoProbe {
public:
    RhoProbe(const ensemble::DenseCyclicSpec& spec, const std::vector<std::uint64_t>& seeds)
        : spec_(spec), seeds_(seeds), bases_(seeds.size()) {
        parallel_for(seeds_.size(), [&](std::size_t i) {
            bases_[i] = ensemble::generate_base_iid(spec_.n, seeds_[i], spec_.distribution);
        });
    }

    double mean_rho(double p) const {
        std::vector<double> values(seeds_.size());
        ensemble::DenseCyclicSpec spec = spec_;
        spec.flip_prob = p;
        parallel_for(seeds_.size(), [&](std::size_t i) {
            values[i] = spectra::trace_power(ensemble::induce_cyclic_correlations(bases_[i], spec, seeds_[i]), spec.k);
        });
        double acc = 0.0;
        for (double v : values) acc += v;  // seed order, independent of scheduling
        return acc / static_cast<double>(values.size());
    }

private:
    ensemble::DenseCyclicSpec spec_;
    std::vector<std::uint64_t> seeds_;
    std::vector<DenseMatrix> bases_;
};

bool within(double value, double target, double tolerance) {
    return std::abs(value - target) <= tolerance * std::abs(target);
}

}  // namespace

CalibrationResult calibrate_flip_prob(const ensemble::DenseCyclicSpec& base, double target_rho,
                                      const std::vector<std::uint64_t>& seeds, double tolerance) {
    if (seeds.empty()) throw ConfigError("calibration: seed list is empty");
    if (!(tolerance > 0.0)) throw ConfigError("calibration: tolerance must be positive");
    if (!std::isfinite(target_rho)) throw ConfigError("calibration: target must be finite");
    ensemble::DenseCyclicSpec spec = base;
    spec.flip_prob = 0.0;
    ensemble::validate(spec);

    CalibrationResult result;
    if (target_rho == 0.0) return result;

    const RhoProbe probe(spec, seeds);
    for (double p : grid) result.sweep.push_back({p, probe.mean_rho(p)});

    const double s = static_cast<double>(spec.sign);
    for (std::size_t i = 1; i < result.sweep.size(); ++i) {
        if (s * result.sweep[i].mean_rho < s * result.sweep[i - 1].mean_rho) {
            std::ostringstream msg;
            msg << "calibration: measured rho_" << spec.k << " is not monotone in p (p = " << result.sweep[i - 1].flip_prob
                << " gives " << result.sweep[i - 1].mean_rho << ", p = " << result.sweep[i].flip_prob << " gives "
                << result.sweep[i].mean_rho << ")";
            throw CalibrationError(msg.str(), result.sweep.front().mean_rho, result.sweep.back().mean_rho);
        }
    }
    const double lo = std::min(result.sweep.front().mean_rho, result.sweep.back().mean_rho);
    const double hi = std::max(result.sweep.front().mean_rho, result.sweep.back().mean_rho);
    for (const auto& point : result.sweep) {
        if (within(point.mean_rho, target_rho, tolerance)) {
            result.flip_prob = point.flip_prob;
            result.mean_rho = point.mean_rho;
            return result;
        }
    }
    if (target_rho < lo || target_rho > hi) {
        std::ostringstream msg;
        msg << "calibration: target rho_" << spec.k << " = " << target_rho << " is outside the achievable interval ["
            << lo << ", " << hi << "] for n = " << spec.n;
        throw CalibrationError(msg.str(), lo, hi);
    }

    std::size_t upper = 1;
    while (s * result.sweep[upper].mean_rho < s * target_rho) ++upper;
    double p_lo = result.sweep[upper - 1].flip_prob;
    double p_hi = result.sweep[upper].flip_prob;
    for (int step = 1; step <= max_bisection_steps; ++step) {
        const double mid = 0.5 * (p_lo + p_hi);
        const double rho = probe.mean_rho(mid);
        result.flip_prob = mid;
        result.mean_rho = rho;
        result.bisection_steps = step;
        if (within(rho, target_rho, tolerance)) return result;
        (s * rho < s * target_rho ? p_lo : p_hi) = mid;
    }
    std::ostringstream msg;
    msg << "calibration: bisection did not reach rho_" << spec.k << " = " << target_rho << " within "
        << tolerance * 100.0 << "% (last p = " << result.flip_prob << ", rho = " << result.mean_rho << ")";
    throw CalibrationError(msg.str(), lo, hi);
}

nlohmann::json to_json(const CalibrationResult& r) {
    nlohmann::json sweep = nlohmann::json::array();
    for (const auto& point : r.sweep) sweep.push_back({{"flip_prob", point.flip_prob}, {"mean_rho", point.mean_rho}});
    return {{"flip_prob", r.flip_prob}, {"mean_rho", r.mean_rho}, {"bisection_steps", r.bisection_steps}, {"sweep", sweep}};
}

}  // namespace trochoid::app
