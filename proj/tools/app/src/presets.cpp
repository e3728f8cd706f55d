#include "trochoid_app/presets.hpp"

#include <cmath>

namespace trochoid::app {

namespace {

const std::vector<std::uint64_t> figure_seeds{1, 2, 3, 4, 5};
const std::vector<std::uint64_t> calibration_seeds{101, 102};

// Largest n <= limit on which layered placement of length-k cycles works.
int nodes_for(int k, int limit = 1000) { return limit - limit % k; }

ExperimentConfig base(const std::string& name, ensemble::EnsembleSpec spec, double inflation) {
    ExperimentConfig c;
    c.name = name;
    c.ensemble = spec;
    c.seeds = figure_seeds;
    c.inflation = inflation;
    return c;
}

ExperimentConfig dense_panel(const std::string& name, int k, double target) {
    ExperimentConfig c = base(name, ensemble::DenseCyclicSpec{1000, k, 0.0, +1, ensemble::BaseDistribution::gaussian}, 0.03);
    c.calibration = CalibrationRequest{target, calibration_seeds, 0.03};
    return c;
}

std::vector<FigurePreset> build() {
    std::vector<FigurePreset> out;
    out.push_back({"fig1-left", "dense n=1000 matrix with Tr M^5 / n = 0.075", {dense_panel("fig1-left", 5, 0.075)}});
    out.push_back({"fig1-right",
                   "regular digraph, every node in exactly two directed 3-cycles",
                   {base("fig1-right", ensemble::RegularCyclicSpec{999, 2, 3, 1.0}, 0.03)}});
    // Dense counterparts of the Poisson <d> = 8 graphs: rho_k = 8^{1 - k/2}.
    out.push_back({"fig2",
                   "dense matrices with cyclic correlations of order 3 and 4",
                   {dense_panel("fig2-k3", 3, std::pow(8.0, -0.5)), dense_panel("fig2-k4", 4, 1.0 / 8.0)}});
    out.push_back({"fig3-top",
                   "regular cycle digraphs with d = 2",
                   {base("fig3-top-k3", ensemble::RegularCyclicSpec{nodes_for(3), 2, 3, 1.0}, 0.03),
                    base("fig3-top-k4", ensemble::RegularCyclicSpec{nodes_for(4), 2, 4, 1.0}, 0.03)}});
    out.push_back({"fig3-bottom",
                   "Poisson cycle digraphs with <d> = 8",
                   {base("fig3-bottom-k3", ensemble::PoissonCyclicSpec{1000, 8.0, 3, 1.0}, 0.05),
                    base("fig3-bottom-k4", ensemble::PoissonCyclicSpec{1000, 8.0, 4, 1.0}, 0.05)}});
    out.push_back({"fig4",
                   "regular digraph with four 3-cycles and four 4-cycles per node",
                   {base("fig4", ensemble::MixedCyclicSpec{996, {ensemble::CycleSpecies{4, 3, 1.0}, ensemble::CycleSpecies{4, 4, 1.0}}}, 0.05)}});
    return out;
}

}  // namespace

const std::vector<FigurePreset>& figure_presets() {
    static const std::vector<FigurePreset> presets = build();
    return presets;
}

const FigurePreset& find_preset(const std::string& name) {
    for (const auto& p : figure_presets()) {
        if (p.name == name) return p;
    }
    std::string known;
    for (const auto& p : figure_presets()) known += (known.empty() ? "" : ", ") + p.name;
    throw ConfigError("unknown preset '" + name + "' (known: " + known + ")");
}

}  // namespace trochoid::app
