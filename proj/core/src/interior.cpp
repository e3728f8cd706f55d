#include <algorithm>
#include <cmath>
#include <numbers>

#include "trochoid/boundary.hpp"
#include "trochoid/errors.hpp"

namespace trochoid::boundary {

namespace {

constexpr int continuation_steps = 32;
constexpr int max_newton = 50;
constexpr double trust_radius = 0.5;
constexpr double support_tol = 1e-12;

struct Branch {
    Complex h;
    Complex slope;  // P'(h) = sum (k-1) rho_k h^{k-2}
    double residual;
};

Complex ipow(Complex base, int exponent) {
    Complex result{1.0, 0.0};
    for (; exponent > 0; exponent >>= 1) {
        if (exponent & 1) result *= base;
        base *= base;
    }
    return result;
}

// P(h) and P'(h) for the scaled law s * params.
void evaluate(const PolytrochoidParams& params, double s, Complex h, Complex& value, Complex& slope) {
    value = 0.0;
    slope = 0.0;
    for (const auto& [k, rho] : params.terms) {
        const double r = s * rho;
        value += r * ipow(h, k - 1);
        slope += r * static_cast<double>(k - 1) * ipow(h, k - 2);
    }
}

// Newton on F(h) = conj(h) + P(h) - z. With a = P'(h) the real-linear system
// a d + conj(d) = -F solves to d = (conj(a) F - conj(F)) / (1 - |a|^2).
bool newton(const PolytrochoidParams& params, double s, Complex z, Complex& h, double& residual) {
    for (int it = 0; it < max_newton; ++it) {
        Complex value, a;
        evaluate(params, s, h, value, a);
        const Complex f = std::conj(h) + value - z;
        residual = std::abs(f);
        if (residual < 1e-14 * (1.0 + std::abs(z))) return true;
        const double det = 1.0 - std::norm(a);
        if (std::abs(det) < 1e-14) return false;
        const Complex d = (std::conj(a) * f - std::conj(f)) / det;
        if (!(std::abs(d) < trust_radius)) return false;
        h += d;
    }
    return residual < 1e-10;
}

// Branch continued from h = conj(z) at rho = 0, scaling every rho_k together.
Branch track(const PolytrochoidParams& params, Complex z) {
    Complex h = std::conj(z);
    double residual = 0.0;
    bool trivial = true;
    for (const auto& [k, rho] : params.terms) trivial = trivial && rho == 0.0;
    if (!trivial) {
        for (int step = 1; step <= continuation_steps; ++step) {
            const double s = static_cast<double>(step) / continuation_steps;
            if (!newton(params, s, z, h, residual)) {
                throw OutsideSupport("interior branch lost at z = (" + std::to_string(z.real()) + ", " +
                                     std::to_string(z.imag()) + ")");
            }
        }
    }
    Complex value, slope;
    evaluate(params, 1.0, h, value, slope);
    return Branch{h, slope, std::abs(std::conj(h) + value - z)};
}

}  // namespace

GreensFixedPoint interior_fixed_point(Complex z, const PolytrochoidParams& params) {
    const Branch b = track(params, z);
    GreensFixedPoint out;
    out.z = z;
    out.h = b.h;
    out.residual = b.residual;
    out.inside = std::abs(b.h) <= 1.0 + support_tol;
    // d h / d conj(z) = 1 / (1 - |P'(h)|^2), real on this branch.
    out.mu = out.inside ? 1.0 / (std::numbers::pi * (1.0 - std::norm(b.slope))) : 0.0;
    return out;
}

Complex GridSpec::cell_center(int ix, int iy) const {
    return {re_min + (ix + 0.5) * dx(), im_min + (iy + 0.5) * dy()};
}

GridSpec grid_around(const BoundaryCurve& curve, int nx, int ny, double margin) {
    if (curve.samples.empty()) throw InvalidInput("grid: empty curve");
    if (nx < 1 || ny < 1) throw InvalidSpec("grid: resolution must be positive");
    double re_lo = curve.samples.front().z.real(), re_hi = re_lo;
    double im_lo = curve.samples.front().z.imag(), im_hi = im_lo;
    for (const auto& s : curve.samples) {
        re_lo = std::min(re_lo, s.z.real());
        re_hi = std::max(re_hi, s.z.real());
        im_lo = std::min(im_lo, s.z.imag());
        im_hi = std::max(im_hi, s.z.imag());
    }
    const double pad_re = margin * (re_hi - re_lo);
    const double pad_im = margin * (im_hi - im_lo);
    return GridSpec{re_lo - pad_re, re_hi + pad_re, im_lo - pad_im, im_hi + pad_im, nx, ny};
}

double DensityField::integral() const {
    double acc = 0.0;
    for (const auto& p : points) acc += p.mu;
    return acc * grid.dx() * grid.dy();
}

DensityField interior_density(const PolytrochoidParams& params, const GridSpec& grid) {
    if (grid.nx < 1 || grid.ny < 1 || !(grid.re_max > grid.re_min) || !(grid.im_max > grid.im_min)) {
        throw InvalidSpec("density grid: empty box");
    }
    const double diagonal = std::hypot(grid.re_max - grid.re_min, grid.im_max - grid.im_min);
    const double delta = diagonal / 256.0;
    const Complex i{0.0, 1.0};

    DensityField field;
    field.grid = grid;
    field.points.reserve(static_cast<std::size_t>(grid.nx) * grid.ny);
    for (int iy = 0; iy < grid.ny; ++iy) {
        for (int ix = 0; ix < grid.nx; ++ix) {
            const Complex z = grid.cell_center(ix, iy);
            double mu = 0.0;
            try {
                const Branch centre = track(params, z);
                if (std::abs(centre.h) <= 1.0 + support_tol) {
                    const Complex dh_dx = (track(params, z + delta).h - track(params, z - delta).h) / (2.0 * delta);
                    const Complex dh_dy = (track(params, z + i * delta).h - track(params, z - i * delta).h) / (2.0 * delta);
                    mu = (0.5 * (dh_dx + i * dh_dy)).real() / std::numbers::pi;
                }
            } catch (const OutsideSupport&) {
                mu = 0.0;
            }
            field.points.push_back({z, mu});
        }
    }
    return field;
}

}  // namespace trochoid::boundary
