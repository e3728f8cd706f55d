#pragma once

#include <filesystem>
#include <iosfwd>

#include <nlohmann/json.hpp>

#include "trochoid/ensemble.hpp"

namespace trochoid::io {

// Dense matrices use the array form (column-major, as the format prescribes);
// digraphs use the 1-based coordinate form. Values are printed with 17
// significant digits so a read-back is bit-exact.
void write_matrix_market(std::ostream& out, const DenseMatrix& m);
void write_matrix_market(std::ostream& out, const SparseDigraph& g);

// Reads either form into a dense matrix. Coordinate entries with repeated
// (row, col) pairs accumulate.
DenseMatrix read_matrix_market(std::istream& in);

// Cycle sidecar: {"n": ..., "cycles": [[ids...], ...], "weights": [...]}.
nlohmann::json cycle_sidecar(const SparseDigraph& g);
SparseDigraph digraph_from_sidecar(const nlohmann::json& sidecar);

void write_file(const std::filesystem::path& path, const DenseMatrix& m);
void write_file(const std::filesystem::path& path, const SparseDigraph& g);
DenseMatrix read_matrix_file(const std::filesystem::path& path);

}  // namespace trochoid::io
