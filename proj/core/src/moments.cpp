#include <cmath>
#include <functional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "trochoid/errors.hpp"
#include "trochoid/spectra.hpp"

namespace trochoid::spectra {

namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

cpp_int binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    cpp_int acc = 1;
    for (int i = 1; i <= k; ++i) acc = acc * (n - k + i) / i;  // exact at every step
    return acc;
}

double to_double(const cpp_rational& q) { return q.convert_to<double>(); }

DenseMatrix matrix_power(const DenseMatrix& m, int p) {
    DenseMatrix out = DenseMatrix::Identity(m.rows(), m.cols());
    for (int i = 0; i < p; ++i) out = out * m;
    return out;
}

}  // namespace

double empirical_pure_moment(const Spectrum& s, int k) {
    if (k < 1) throw InvalidInput("pure moment: order must be positive");
    if (s.eigenvalues.empty()) throw InvalidInput("pure moment: empty spectrum");
    Complex sum{0.0, 0.0};
    double scale = 0.0;
    for (const Complex& z : s.eigenvalues) {
        Complex p{1.0, 0.0};
        for (int i = 0; i < k; ++i) p *= z;
        sum += p;
        scale += std::abs(p);
    }
    const double n = static_cast<double>(s.eigenvalues.size());
    if (std::abs(sum.imag()) / n > 1e-8 * std::max(1.0, scale / n)) {
        throw InvalidInput("pure moment: imaginary part " + std::to_string(sum.imag() / n) + " is not negligible");
    }
    return sum.real() / n;
}

double empirical_mixed_moment(const DenseMatrix& m, int l) {
    if (l < 1) throw InvalidInput("mixed moment: order must be positive");
    if (m.rows() == 0) throw InvalidInput("mixed moment: empty matrix");
    const double n = static_cast<double>(m.rows());
    if (l == 1) return m.squaredNorm() / n;
    const DenseMatrix b = m * m.transpose();
    const DenseMatrix half = matrix_power(b, l / 2);
    if (l % 2 == 0) return half.squaredNorm() / n;
    return half.cwiseProduct(b * half).sum() / n;
}

double trace_power(const DenseMatrix& m, int k) {
    if (k < 1) throw InvalidInput("trace power: order must be positive");
    if (m.rows() != m.cols() || m.rows() == 0) throw InvalidInput("trace power: matrix must be square and non-empty");
    const DenseMatrix low = matrix_power(m, k / 2);
    const DenseMatrix high = (k % 2 == 0) ? low : DenseMatrix(low * m);
    // Tr(AB) = sum_ij A_ij B_ji
    return low.cwiseProduct(high.transpose()).sum() / static_cast<double>(m.rows());
}

double fuss_catalan_prediction(int l, double rho3) {
    if (l < 1) throw InvalidInput("Fuss-Catalan: order must be positive");
    const cpp_rational coeff(binomial(3 * l, l), cpp_int(2 * l + 1));
    return to_double(coeff) * std::pow(rho3, l);
}

double mixed_moment_prediction(int l, MixedPrefactor prefactor) {
    if (l < 1) throw InvalidInput("mixed prediction: order must be positive");
    const cpp_int central = binomial(2 * l, l);
    const int divisor = prefactor == MixedPrefactor::catalan ? l + 1 : l;
    return to_double(cpp_rational(central, cpp_int(divisor)));
}

double tree_walk_prediction(int m_kind, int l, double d, double d_hat) {
    if (m_kind < 2) throw InvalidInput("tree walks: m must be at least 2");
    if (l < 1) throw InvalidInput("tree walks: l must be positive");
    long double acc = 0.0L;
    long double power = 1.0L;
    for (int j = 0; j < l; ++j) {
        acc += binomial(m_kind * l, j).convert_to<long double>() * (l - j) * power;
        power *= static_cast<long double>(d_hat) - 1.0L;
    }
    return static_cast<double>(acc * d / l);
}

std::uint64_t brute_force_tree_walks(int m_kind, int l, int d, int branching) {
    if (m_kind != 2 && m_kind != 3) throw InvalidInput("tree walks: brute force supports m = 2 and m = 3 only");
    if (l < 1 || l > 4) throw InvalidInput("tree walks: brute force limited to 1 <= l <= 4");
    if (d < 0 || branching < 0) throw InvalidInput("tree walks: degrees must be non-negative");

    // A node is the path of (child slot, position) frames from the root.
    struct Frame {
        int slot;
        int position;
    };
    std::vector<Frame> path;
    const int length = m_kind * l;
    std::uint64_t count = 0;

    std::function<void(int)> walk = [&](int remaining) {
        if (remaining == 0) {
            if (path.empty()) ++count;
            return;
        }
        // Prune: the root is at least path.size() steps away (m = 2) or
        // requires finishing every open triangle (m = 3).
        const int need = m_kind == 2 ? static_cast<int>(path.size()) : 0;
        if (need > remaining) return;
        const int children = path.empty() ? d : branching;

        if (m_kind == 2) {
            if (!path.empty()) {
                const Frame top = path.back();
                path.pop_back();
                walk(remaining - 1);
                path.push_back(top);
            }
        } else if (!path.empty()) {
            Frame& top = path.back();
            if (top.position == 1) {
                top.position = 2;
                walk(remaining - 1);
                path.back().position = 1;
            } else {
                const Frame saved = top;
                path.pop_back();
                walk(remaining - 1);
                path.push_back(saved);
            }
        }
        for (int c = 0; c < children; ++c) {
            path.push_back({c, 1});
            walk(remaining - 1);
            path.pop_back();
        }
    };
    walk(length);
    return count;
}

nlohmann::json to_json(const MomentReport& r) {
    return nlohmann::json{{"kind", r.kind == MomentReport::Kind::pure ? "pure" : "mixed"},
                          {"order", r.order},
                          {"empirical", r.empirical},
                          {"predicted", r.predicted},
                          {"stderr", r.stderr_}};
}

}  // namespace trochoid::spectra
