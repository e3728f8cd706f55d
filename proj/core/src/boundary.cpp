#include "trochoid/boundary.hpp"

#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "trochoid/errors.hpp"

namespace trochoid::boundary {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double two_pi = 2.0 * std::numbers::pi;

void check_samples(int n_samples) {
    if (n_samples < min_samples) {
        throw InvalidSpec("boundary curves need at least " + std::to_string(min_samples) + " samples");
    }
}

double sample_phi(int i, int n) { return two_pi * static_cast<double>(i) / static_cast<double>(n); }

// sum_{j=1}^{k-1} u^j
double geometric_tail(double u, int k) {
    double acc = 0.0;
    for (int j = k - 1; j >= 1; --j) acc = (acc + 1.0) * u;
    return acc;
}

// d/dt of sum_{j=1}^{k-1} t^{2j}
double geometric_tail_derivative(double t, int k) {
    double acc = 0.0;
    double power = t;  // t^{2j-1}
    for (int j = 1; j <= k - 1; ++j) {
        acc += 2.0 * j * power;
        power *= t * t;
    }
    return acc;
}

}  // namespace

std::vector<Complex> BoundaryCurve::points() const {
    std::vector<Complex> out;
    out.reserve(samples.size());
    for (const auto& s : samples) out.push_back(s.z);
    return out;
}

Complex BoundaryCurve::centroid() const {
    Complex acc{0.0, 0.0};
    for (const auto& s : samples) acc += s.z;
    return samples.empty() ? acc : acc / static_cast<double>(samples.size());
}

double BoundaryCurve::mean_radius() const {
    const Complex c = centroid();
    double acc = 0.0;
    for (const auto& s : samples) acc += std::abs(s.z - c);
    return samples.empty() ? 0.0 : acc / static_cast<double>(samples.size());
}

std::string law_name(const LawParams& law) {
    return std::visit(overloaded{
                          [](const HypotrochoidParams&) { return std::string("dense-hypotrochoid"); },
                          [](const PolytrochoidParams&) { return std::string("dense-polytrochoid"); },
                          [](const SparseCyclicParams&) { return std::string("sparse-hypotrochoid"); },
                          [](const MixedCycleParams&) { return std::string("mixed-cycle"); },
                          [](const MixedAsymptoticParams&) { return std::string("mixed-cycle-asymptotic"); },
                      },
                      law);
}

nlohmann::json law_to_json(const LawParams& law) {
    auto species_json = [](const MixedCycleParams& p) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& s : p.species) arr.push_back({{"d", s.d}, {"k", s.k}, {"weight", s.weight}});
        return arr;
    };
    nlohmann::json j = std::visit(
        overloaded{
            [](const HypotrochoidParams& p) { return nlohmann::json{{"k", p.k}, {"rho", p.rho}}; },
            [](const PolytrochoidParams& p) {
                nlohmann::json terms = nlohmann::json::object();
                for (const auto& [k, rho] : p.terms) terms[std::to_string(k)] = rho;
                return nlohmann::json{{"terms", terms}};
            },
            [](const SparseCyclicParams& p) {
                return nlohmann::json{{"d_hat", p.d_hat}, {"k", p.k}, {"weight", p.weight}, {"t", p.t}};
            },
            [&](const MixedCycleParams& p) { return nlohmann::json{{"species", species_json(p)}}; },
            [&](const MixedAsymptoticParams& p) { return nlohmann::json{{"species", species_json(p.mixed)}}; },
        },
        law);
    j["law"] = law_name(law);
    return j;
}

// --- dense laws -------------------------------------------------------------

Complex polytrochoid_point(const PolytrochoidParams& params, double phi) {
    Complex z = std::polar(1.0, -phi);
    for (const auto& [k, rho] : params.terms) z += rho * std::polar(1.0, (k - 1) * phi);
    return z;
}

Complex polytrochoid_velocity(const PolytrochoidParams& params, double phi) {
    const Complex i{0.0, 1.0};
    Complex v = -i * std::polar(1.0, -phi);
    for (const auto& [k, rho] : params.terms) v += i * static_cast<double>(k - 1) * rho * std::polar(1.0, (k - 1) * phi);
    return v;
}

PolytrochoidParams as_polytrochoid(const HypotrochoidParams& params) {
    PolytrochoidParams poly;
    poly.terms[params.k] = params.rho;
    return poly;
}

BoundaryCurve dense_polytrochoid(const PolytrochoidParams& params, int n_samples) {
    check_samples(n_samples);
    for (const auto& [k, rho] : params.terms) {
        if (k < 2) throw InvalidSpec("polytrochoid: every order must be at least 2");
    }
    BoundaryCurve curve;
    curve.law = params;
    curve.samples.reserve(static_cast<std::size_t>(n_samples));
    for (int i = 0; i < n_samples; ++i) {
        const double phi = sample_phi(i, n_samples);
        curve.samples.push_back({phi, polytrochoid_point(params, phi)});
    }
    return curve;
}

BoundaryCurve dense_hypotrochoid(const HypotrochoidParams& params, int n_samples) {
    if (params.k < 2) throw InvalidSpec("hypotrochoid: k must be at least 2");
    BoundaryCurve curve = dense_polytrochoid(as_polytrochoid(params), n_samples);
    curve.law = params;
    return curve;
}

int tangent_turning_number(const BoundaryCurve& curve) {
    const auto pts = curve.points();
    const std::size_t n = pts.size();
    std::vector<Complex> edges;
    edges.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Complex e = pts[(i + 1) % n] - pts[i];
        if (std::abs(e) > 0.0) edges.push_back(e);
    }
    double total = 0.0;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        total += std::arg(edges[(i + 1) % edges.size()] / edges[i]);
    }
    return static_cast<int>(std::lround(total / two_pi));
}

double min_speed(const HypotrochoidParams& params, int n_samples) {
    const auto poly = as_polytrochoid(params);
    double best = std::abs(polytrochoid_velocity(poly, 0.0));
    for (int i = 1; i < n_samples; ++i) best = std::min(best, std::abs(polytrochoid_velocity(poly, sample_phi(i, n_samples))));
    return best;
}

bool cusp_or_loop(const HypotrochoidParams& params, int n_samples) {
    if (min_speed(params, n_samples) < 1e-9) return true;
    return tangent_turning_number(dense_hypotrochoid(params, n_samples)) != -1;
}

// --- sparse cyclic digraphs -------------------------------------------------

double segment_depth_residual(double t, double d_hat, int k) {
    return d_hat * geometric_tail(t * t, k) - 1.0;
}

double printed_polynomial(double t, double d_hat, int k) {
    return d_hat * std::pow(t, 2 * k) - (d_hat + 1.0) * t * t + 1.0;
}

// The reduced condition is strictly increasing in t > 0 and runs from -1 to
// +inf, so a bracket always exists. The root lies in (0, 1) whenever
// d_hat (k-1) > 1.
double solve_segment_depth(double d_hat, int k) {
    if (!(d_hat > 0.0) || !std::isfinite(d_hat)) throw InvalidSpec("segment depth: d_hat must be positive");
    if (k < 2) throw InvalidSpec("segment depth: k must be at least 2");
    double lo = 0.0;
    double hi = 1.0;
    while (segment_depth_residual(hi, d_hat, k) < 0.0) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-9 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (segment_depth_residual(mid, d_hat, k) < 0.0 ? lo : hi) = mid;
    }
    double t = 0.5 * (lo + hi);
    for (int it = 0; it < 20; ++it) {
        const double f = segment_depth_residual(t, d_hat, k);
        const double step = f / (d_hat * geometric_tail_derivative(t, k));
        t -= step;
        if (std::abs(step) <= 1e-16 * t) break;
    }
    return t;
}

SparseCyclicParams make_sparse_params(double d_hat, int k, double weight) {
    if (weight == 0.0 || !std::isfinite(weight)) throw InvalidSpec("sparse law: weight must be finite and non-zero");
    return SparseCyclicParams{d_hat, k, weight, solve_segment_depth(d_hat, k)};
}

Complex sparse_point(const SparseCyclicParams& p, double phi) {
    return p.weight * (std::polar(1.0 / p.t, -phi) + std::polar(p.d_hat * std::pow(p.t, p.k - 1), (p.k - 1) * phi));
}

BoundaryCurve sparse_hypotrochoid(const SparseCyclicParams& params, int n_samples) {
    check_samples(n_samples);
    if (!(params.t > 0.0)) throw InvalidSpec("sparse law: segment depth t is not solved");
    BoundaryCurve curve;
    curve.law = params;
    curve.samples.reserve(static_cast<std::size_t>(n_samples));
    for (int i = 0; i < n_samples; ++i) {
        const double phi = sample_phi(i, n_samples);
        curve.samples.push_back({phi, sparse_point(params, phi)});
    }
    return curve;
}

// --- CSV --------------------------------------------------------------------

void write_curve_csv(std::ostream& out, const BoundaryCurve& curve) {
    const auto old = out.precision(17);
    out << "phi,re,im\n";
    for (const auto& s : curve.samples) out << s.phi << ',' << s.z.real() << ',' << s.z.imag() << '\n';
    out.precision(old);
}

BoundaryCurve read_curve_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line)) throw ParseError("empty boundary file", line_no);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "phi,re,im") throw ParseError("expected header 'phi,re,im'", line_no);
    BoundaryCurve curve;
    curve.law = PolytrochoidParams{};
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        std::istringstream row(line);
        double phi, re, im;
        char c1 = 0, c2 = 0;
        if (!(row >> phi >> c1 >> re >> c2 >> im) || c1 != ',' || c2 != ',') {
            throw ParseError("malformed boundary row", line_no);
        }
        curve.samples.push_back({phi, {re, im}});
    }
    if (curve.samples.size() < 3) throw ParseError("boundary needs at least 3 samples", line_no);
    return curve;
}

void write_density_csv(std::ostream& out, const DensityField& field) {
    const auto old = out.precision(17);
    out << "re,im,mu\n";
    for (const auto& p : field.points) out << p.z.real() << ',' << p.z.imag() << ',' << p.mu << '\n';
    out.precision(old);
}

}  // namespace trochoid::boundary
