#pragma once

#include <string>
#include <vector>

#include "trochoid_app/config.hpp"

namespace trochoid::app {

/// A figure reproduction: one experiment per panel.
struct FigurePreset {
    std::string name;
    std::string summary;
    std::vector<ExperimentConfig> panels;
};

const std::vector<FigurePreset>& figure_presets();

/// Throws ConfigError for an unknown name.
const FigurePreset& find_preset(const std::string& name);

}  // namespace trochoid::app
