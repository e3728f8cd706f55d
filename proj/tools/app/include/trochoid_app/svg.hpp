#pragma once

#include <filesystem>
#include <string>

#include "trochoid/boundary.hpp"
#include "trochoid/spectra.hpp"

namespace trochoid::app {

/// Standalone SVG: eigenvalues as dots, the boundary as a closed path, equal
/// scale on both axes. Coordinates are printed with fixed precision so equal
/// inputs give identical bytes.
std::string render_svg(const spectra::Spectrum& s, const boundary::BoundaryCurve& curve);

/// Reads `re,im` and `phi,re,im` CSV files and writes the SVG.
void render_svg_files(const std::filesystem::path& spectrum_csv, const std::filesystem::path& boundary_csv,
                      const std::filesystem::path& out);

}  // namespace trochoid::app
