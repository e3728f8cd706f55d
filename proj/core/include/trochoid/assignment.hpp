#pragma once

#include <vector>

#include <Eigen/Dense>

namespace trochoid {

/// Minimum-cost perfect matching on a square cost matrix (Hungarian method
/// with row/column potentials, O(n^3)). Returns the total cost; `row_to_col`
/// receives the matched column of every row when non-null.
double min_cost_assignment(const Eigen::MatrixXd& cost, std::vector<int>* row_to_col = nullptr);

}  // namespace trochoid
