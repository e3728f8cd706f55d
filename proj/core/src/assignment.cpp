#include "trochoid/assignment.hpp"

#include <limits>

#include "trochoid/errors.hpp"

namespace trochoid {

double min_cost_assignment(const Eigen::MatrixXd& cost, std::vector<int>* row_to_col) {
    if (cost.rows() != cost.cols()) throw InvalidInput("assignment: cost matrix must be square");
    const int n = static_cast<int>(cost.rows());
    constexpr double inf = std::numeric_limits<double>::infinity();

    // 1-based potentials; column 0 is a virtual start.
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), min_slack(n + 1);
    std::vector<int> col_owner(n + 1, 0), way(n + 1, 0);
    std::vector<char> used(n + 1);

    for (int row = 1; row <= n; ++row) {
        col_owner[0] = row;
        int col0 = 0;
        std::fill(min_slack.begin(), min_slack.end(), inf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[col0] = 1;
            const int i0 = col_owner[col0];
            double delta = inf;
            int col1 = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double reduced = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (reduced < min_slack[j]) {
                    min_slack[j] = reduced;
                    way[j] = col0;
                }
                if (min_slack[j] < delta) {
                    delta = min_slack[j];
                    col1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[col_owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    min_slack[j] -= delta;
                }
            }
            col0 = col1;
        } while (col_owner[col0] != 0);
        do {
            const int col1 = way[col0];
            col_owner[col0] = col_owner[col1];
            col0 = col1;
        } while (col0 != 0);
    }

    double total = 0.0;
    if (row_to_col) row_to_col->assign(static_cast<std::size_t>(n), -1);
    for (int j = 1; j <= n; ++j) {
        const int i = col_owner[j];
        total += cost(i - 1, j - 1);
        if (row_to_col) (*row_to_col)[static_cast<std::size_t>(i - 1)] = j - 1;
    }
    return total;
}

}  // namespace trochoid
