#include "trochoid_app/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "trochoid/errors.hpp"

namespace trochoid::app {

namespace {

constexpr double canvas = 640.0;
constexpr double margin = 24.0;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

}  // namespace

std::string render_svg(const spectra::Spectrum& s, const boundary::BoundaryCurve& curve) {
    if (s.eigenvalues.empty()) throw InvalidInput("render: spectrum is empty");
    if (curve.samples.size() < 3) throw InvalidInput("render: boundary has fewer than 3 samples");

    double re_lo = curve.samples.front().z.real(), re_hi = re_lo;
    double im_lo = curve.samples.front().z.imag(), im_hi = im_lo;
    auto grow = [&](spectra::Complex z) {
        re_lo = std::min(re_lo, z.real());
        re_hi = std::max(re_hi, z.real());
        im_lo = std::min(im_lo, z.imag());
        im_hi = std::max(im_hi, z.imag());
    };
    for (const auto& p : curve.samples) grow(p.z);
    for (const auto& z : s.eigenvalues) grow(z);

    const double span = std::max({re_hi - re_lo, im_hi - im_lo, 1e-12});
    const double scale = (canvas - 2.0 * margin) / span;
    const double cx = 0.5 * (re_lo + re_hi);
    const double cy = 0.5 * (im_lo + im_hi);
    auto x = [&](double re) { return canvas / 2.0 + (re - cx) * scale; };
    auto y = [&](double im) { return canvas / 2.0 - (im - cy) * scale; };

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"640\" viewBox=\"0 0 640 640\">\n";
    out += "<rect width=\"640\" height=\"640\" fill=\"white\"/>\n";
    if (re_lo <= 0.0 && re_hi >= 0.0) {
        out += "<line x1=\"" + fmt(x(0.0)) + "\" y1=\"0\" x2=\"" + fmt(x(0.0)) +
               "\" y2=\"640\" stroke=\"#bbbbbb\" stroke-width=\"0.8\"/>\n";
    }
    if (im_lo <= 0.0 && im_hi >= 0.0) {
        out += "<line x1=\"0\" y1=\"" + fmt(y(0.0)) + "\" x2=\"640\" y2=\"" + fmt(y(0.0)) +
               "\" stroke=\"#bbbbbb\" stroke-width=\"0.8\"/>\n";
    }
    out += "<g fill=\"#1f6fb4\">\n";
    for (const auto& z : s.eigenvalues) {
        out += "<circle cx=\"" + fmt(x(z.real())) + "\" cy=\"" + fmt(y(z.imag())) + "\" r=\"1.6\"/>\n";
    }
    out += "</g>\n<path d=\"";
    for (std::size_t i = 0; i < curve.samples.size(); ++i) {
        const auto z = curve.samples[i].z;
        out += (i == 0 ? "M" : " L") + fmt(x(z.real())) + " " + fmt(y(z.imag()));
    }
    out += " Z\" fill=\"none\" stroke=\"black\" stroke-width=\"1.4\"/>\n</svg>\n";
    return out;
}

void render_svg_files(const std::filesystem::path& spectrum_csv, const std::filesystem::path& boundary_csv,
                      const std::filesystem::path& out) {
    std::ifstream spec_in(spectrum_csv);
    if (!spec_in) throw IoError("cannot open " + spectrum_csv.string());
    std::ifstream curve_in(boundary_csv);
    if (!curve_in) throw IoError("cannot open " + boundary_csv.string());
    const auto s = spectra::read_spectrum_csv(spec_in);
    const auto curve = boundary::read_curve_csv(curve_in);
    const std::string svg = render_svg(s, curve);
    std::ofstream file(out, std::ios::binary);
    if (!file) throw IoError("cannot write " + out.string());
    file << svg;
}

}  // namespace trochoid::app
