#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "trochoid/assignment.hpp"
#include "trochoid/errors.hpp"
#include "trochoid/spectra.hpp"

namespace trochoid::spectra {

Spectrum compute_eigenvalues(const DenseMatrix& m, std::string source, int cap) {
    if (m.rows() != m.cols()) throw InvalidInput("eigensolve: matrix is not square");
    if (m.rows() > cap) {
        throw InvalidInput("eigensolve: n = " + std::to_string(m.rows()) + " exceeds cap " + std::to_string(cap));
    }
    if (!m.allFinite()) throw InvalidInput("eigensolve: matrix has non-finite entries");
    Spectrum s;
    s.source = std::move(source);
    if (m.rows() == 0) return s;
    const int n = static_cast<int>(m.rows());

    const int max_iterations = 40 * n;
    Eigen::EigenSolver<DenseMatrix> solver;
    solver.setMaxIterations(max_iterations);
    solver.compute(m, false);
    if (solver.info() != Eigen::Success) {
        throw EigensolverFailure("eigensolve: shifted QR did not converge within " + std::to_string(max_iterations) +
                                     " iterations",
                                 max_iterations);
    }
    const auto values = solver.eigenvalues();
    s.eigenvalues.assign(values.data(), values.data() + values.size());

    Complex sum{0.0, 0.0};
    for (const Complex& z : s.eigenvalues) sum += z;
    if (std::abs(sum - Complex(m.trace(), 0.0)) > 1e-6 * static_cast<double>(n)) {
        throw EigensolverFailure("eigensolve: eigenvalue sum deviates from the trace", max_iterations);
    }
    return s;
}

int cycle_length_gcd(const SparseDigraph& g) {
    int acc = 0;
    for (const auto& c : g.cycles) acc = std::gcd(acc, static_cast<int>(c.size()));
    return acc;
}

std::vector<Complex> detect_deterministic_outliers(const Spectrum& s, const SparseDigraph& g, double scale) {
    if (g.n == 0) return {};
    std::vector<double> row_sum(static_cast<std::size_t>(g.n), 0.0);
    for (const Edge& e : g.edges) row_sum[static_cast<std::size_t>(e.source)] += scale * e.weight;
    const auto [lo, hi] = std::minmax_element(row_sum.begin(), row_sum.end());
    const double r = *hi;
    if (*hi - *lo > 1e-12 * std::max(1.0, std::abs(r)) || r == 0.0) return {};

    const int period = std::max(1, cycle_length_gcd(g));
    std::vector<Complex> found;
    std::vector<char> taken(s.eigenvalues.size(), 0);
    for (int j = 0; j < period; ++j) {
        const Complex target = std::polar(r, 2.0 * std::numbers::pi * j / period);
        for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
            if (!taken[i] && std::abs(s.eigenvalues[i] - target) <= 1e-6) {
                taken[i] = 1;
                found.push_back(s.eigenvalues[i]);
            }
        }
    }
    return found;
}

double rotation_symmetry_residual(const Spectrum& s, int k) {
    if (k < 1) throw InvalidInput("rotation residual: k must be positive");
    const int n = static_cast<int>(s.eigenvalues.size());
    if (n == 0) return 0.0;
    if (n > 2000) throw InvalidInput("rotation residual: assignment limited to n <= 2000");
    const Complex omega = std::polar(1.0, 2.0 * std::numbers::pi / k);
    Eigen::MatrixXd cost(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) cost(i, j) = std::abs(s.eigenvalues[i] - omega * s.eigenvalues[j]);
    }
    return min_cost_assignment(cost) / n;
}

double conjugation_residual(const Spectrum& s) {
    double worst = 0.0;
    for (const Complex& a : s.eigenvalues) {
        double best = std::numeric_limits<double>::infinity();
        for (const Complex& b : s.eigenvalues) best = std::min(best, std::abs(std::conj(a) - b));
        worst = std::max(worst, best);
    }
    return worst;
}

void write_spectrum_csv(std::ostream& out, const Spectrum& s) {
    const auto old = out.precision(17);
    out << "re,im\n";
    for (const Complex& z : s.eigenvalues) out << z.real() << ',' << z.imag() << '\n';
    out.precision(old);
}

Spectrum read_spectrum_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line)) throw ParseError("empty spectrum file", line_no);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "re,im") throw ParseError("expected header 're,im'", line_no);
    Spectrum s;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        std::istringstream row(line);
        double re, im;
        char comma = 0;
        if (!(row >> re >> comma >> im) || comma != ',') throw ParseError("malformed spectrum row", line_no);
        s.eigenvalues.emplace_back(re, im);
    }
    return s;
}

}  // namespace trochoid::spectra
