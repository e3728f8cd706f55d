#include <algorithm>
#include <cmath>
#include <limits>

#include "trochoid/errors.hpp"
#include "trochoid/spectra.hpp"

namespace trochoid::spectra {

namespace {

// Sign of (b - a) x (p - a).
double orient(Complex a, Complex b, Complex p) {
    return (b.real() - a.real()) * (p.imag() - a.imag()) - (p.real() - a.real()) * (b.imag() - a.imag());
}

nlohmann::json complex_list(const std::vector<Complex>& zs) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Complex& z : zs) arr.push_back({z.real(), z.imag()});
    return arr;
}

}  // namespace

double ContainmentReport::inside_fraction() const {
    const int eligible = total - static_cast<int>(excluded_outliers.size());
    return eligible > 0 ? static_cast<double>(inside) / eligible : 0.0;
}

int winding_number(Complex p, std::span<const Complex> polygon) {
    int wn = 0;
    const std::size_t n = polygon.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Complex a = polygon[i];
        const Complex b = polygon[(i + 1) % n];
        if (a.imag() <= p.imag()) {
            if (b.imag() > p.imag() && orient(a, b, p) > 0.0) ++wn;
        } else if (b.imag() <= p.imag() && orient(a, b, p) < 0.0) {
            --wn;
        }
    }
    return wn;
}

double distance_to_polygon(Complex p, std::span<const Complex> polygon) {
    double best = std::numeric_limits<double>::infinity();
    const std::size_t n = polygon.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Complex a = polygon[i];
        const Complex ab = polygon[(i + 1) % n] - a;
        const double len2 = std::norm(ab);
        double s = len2 > 0.0 ? ((p - a) * std::conj(ab)).real() / len2 : 0.0;
        s = std::clamp(s, 0.0, 1.0);
        best = std::min(best, std::abs(p - (a + s * ab)));
    }
    return best;
}

ContainmentReport containment(const Spectrum& s, const boundary::BoundaryCurve& curve, double inflation,
                              std::span<const Complex> exclusions) {
    if (s.eigenvalues.empty()) throw InvalidInput("containment: empty spectrum");
    if (curve.samples.size() < 3) throw InvalidInput("containment: boundary has fewer than 3 samples");
    if (!(inflation >= 0.0)) throw InvalidInput("containment: inflation must be non-negative");

    const Complex centre = curve.centroid();
    const double radius = curve.mean_radius();
    std::vector<Complex> polygon;
    polygon.reserve(curve.samples.size());
    for (const auto& sample : curve.samples) polygon.push_back(centre + (1.0 + inflation) * (sample.z - centre));

    ContainmentReport report;
    report.total = static_cast<int>(s.eigenvalues.size());
    std::vector<char> skip(s.eigenvalues.size(), 0);
    for (const Complex& e : exclusions) {
        for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
            if (!skip[i] && std::abs(s.eigenvalues[i] - e) <= 1e-12 * (1.0 + std::abs(e))) {
                skip[i] = 1;
                report.excluded_outliers.push_back(s.eigenvalues[i]);
                break;
            }
        }
    }
    for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
        if (skip[i]) continue;
        const Complex z = s.eigenvalues[i];
        if (winding_number(z, polygon) != 0) {
            ++report.inside;
        } else {
            const double gap = distance_to_polygon(z, polygon) / (radius > 0.0 ? radius : 1.0);
            report.worst_violation = std::max(report.worst_violation, gap);
        }
    }
    return report;
}

nlohmann::json to_json(const ContainmentReport& r) {
    return nlohmann::json{{"total", r.total},
                          {"inside", r.inside},
                          {"excluded_outliers", complex_list(r.excluded_outliers)},
                          {"worst_violation", r.worst_violation}};
}

}  // namespace trochoid::spectra
