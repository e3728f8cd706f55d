#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "trochoid/boundary.hpp"
#include "trochoid/errors.hpp"

namespace trochoid::boundary {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr double accept_tol = 1e-10;
constexpr int max_newton = 100;
constexpr int max_halvings = 8;

struct Tail {
    double value;       // sum_{l=1}^{k-1} t^{2l}
    double derivative;  // d/dt
};

Tail tail(double t, int k) {
    Tail out{0.0, 0.0};
    double odd = t;  // t^{2l-1}
    for (int l = 1; l <= k - 1; ++l) {
        out.value += odd * t;
        out.derivative += 2.0 * l * odd;
        odd *= t * t;
    }
    return out;
}

// Inverse of t -> sum_{l=1}^{k-1} t^{2l} on t > 0.
double invert_tail(double target, int k) {
    double lo = 0.0, hi = 1.0;
    while (tail(hi, k).value < target) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (tail(mid, k).value < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

void validate(const MixedCycleParams& p) {
    for (const auto& s : p.species) {
        if (!(s.d >= 0.0) || !std::isfinite(s.d)) throw InvalidSpec("mixed law: d must be non-negative");
        if (s.k < 2) throw InvalidSpec("mixed law: cycle length must be at least 2");
        if (!(s.weight > 0.0) || !std::isfinite(s.weight)) throw InvalidSpec("mixed law: weights must be positive");
    }
    if (p.species[0].d + p.species[1].d <= 0.0) throw InvalidSpec("mixed law: no cycles");
    for (int r = 0; r < 2; ++r) {
        if (p.species[r].d == 0.0 && !(p.species[1 - r].d > 1.0)) {
            throw InvalidSpec("mixed law: a single species needs d > 1");
        }
    }
}

using Vec3 = Eigen::Vector3d;

Vec3 residual_vec(const MixedCycleParams& p, double phi1, const Vec3& x) {
    const auto& [s1, s2] = p.species;
    const double t1 = x[0], t2 = x[1], phi2 = x[2];
    const double sig1 = tail(t1, s1.k).value;
    const double sig2 = tail(t2, s2.k).value;
    const double condt = (1.0 - s1.d - s2.d) * sig1 * sig2 - (s1.d - 1.0) * sig1 - (s2.d - 1.0) * sig2 + 1.0;
    const Complex extra = std::polar(s1.weight / t1, -phi1) - std::polar(s2.weight / t2, -phi2) -
                          std::polar(s1.weight * std::pow(t1, s1.k - 1), (s1.k - 1) * phi1) +
                          std::polar(s2.weight * std::pow(t2, s2.k - 1), (s2.k - 1) * phi2);
    return {condt, extra.real(), extra.imag()};
}

Eigen::Matrix3d jacobian(const MixedCycleParams& p, double phi1, const Vec3& x) {
    const auto& [s1, s2] = p.species;
    const double t1 = x[0], t2 = x[1], phi2 = x[2];
    const Tail a = tail(t1, s1.k);
    const Tail b = tail(t2, s2.k);
    const Complex i{0.0, 1.0};
    const Complex alpha2 = std::polar(s2.weight / t2, -phi2);
    const Complex loop2 = std::polar(s2.weight * std::pow(t2, s2.k - 1), (s2.k - 1) * phi2);

    const Complex d_t1 = -std::polar(s1.weight / (t1 * t1), -phi1) -
                         static_cast<double>(s1.k - 1) * std::polar(s1.weight * std::pow(t1, s1.k - 2), (s1.k - 1) * phi1);
    const Complex d_t2 = std::polar(s2.weight / (t2 * t2), -phi2) +
                         static_cast<double>(s2.k - 1) * std::polar(s2.weight * std::pow(t2, s2.k - 2), (s2.k - 1) * phi2);
    const Complex d_phi2 = i * alpha2 + i * static_cast<double>(s2.k - 1) * loop2;

    Eigen::Matrix3d j;
    j(0, 0) = a.derivative * ((1.0 - s1.d - s2.d) * b.value - (s1.d - 1.0));
    j(0, 1) = b.derivative * ((1.0 - s1.d - s2.d) * a.value - (s2.d - 1.0));
    j(0, 2) = 0.0;
    j(1, 0) = d_t1.real();
    j(1, 1) = d_t2.real();
    j(1, 2) = d_phi2.real();
    j(2, 0) = d_t1.imag();
    j(2, 1) = d_t2.imag();
    j(2, 2) = d_phi2.imag();
    return j;
}

// Newton from `x`. Returns false on a singular step, a non-positive t, or no
// convergence within max_newton iterations.
bool newton(const MixedCycleParams& p, double phi1, Vec3& x, double& residual) {
    for (int it = 0; it < max_newton; ++it) {
        const Vec3 f = residual_vec(p, phi1, x);
        residual = f.norm();
        if (!std::isfinite(residual)) return false;
        if (residual < 1e-14) return true;
        const Eigen::Matrix3d j = jacobian(p, phi1, x);
        const Eigen::PartialPivLU<Eigen::Matrix3d> lu(j);
        if (!(std::abs(lu.determinant()) > 0.0)) return false;
        const Vec3 step = lu.solve(f);
        const Vec3 next = x - step;
        if (!(next[0] > 0.0) || !(next[1] > 0.0)) return false;
        x = next;
        if (step.norm() <= 1e-15 * (1.0 + x.norm())) {
            residual = residual_vec(p, phi1, x).norm();
            return residual < accept_tol;
        }
    }
    residual = residual_vec(p, phi1, x).norm();
    return residual < accept_tol;
}

MixedCycleState to_state(double phi1, const Vec3& x, double residual) {
    return MixedCycleState{phi1, x[0], x[1], x[2], residual};
}

Vec3 to_vec(const MixedCycleState& s) { return {s.t1, s.t2, s.phi2}; }

// Advances `state` to `target` in steps no larger than `max_step`, halving on
// failure.
MixedCycleState continue_to(const MixedCycleParams& p, MixedCycleState state, double target, double max_step,
                            int& halvings) {
    Vec3 velocity = Vec3::Zero();
    while (state.phi1 < target) {
        double step = std::min(max_step, target - state.phi1);
        bool accepted = false;
        for (int h = 0; h <= max_halvings; ++h) {
            const double phi1 = (h == 0 && step == target - state.phi1) ? target : state.phi1 + step;
            Vec3 x = to_vec(state) + velocity * (phi1 - state.phi1);
            double residual = 0.0;
            if (newton(p, phi1, x, residual)) {
                velocity = (x - to_vec(state)) / (phi1 - state.phi1);
                state = to_state(phi1, x, residual);
                accepted = true;
                break;
            }
            step *= 0.5;
            ++halvings;
            velocity.setZero();
        }
        if (!accepted) {
            throw ContinuationFailure("mixed-cycle continuation failed beyond phi1 = " + std::to_string(state.phi1),
                                      state.phi1);
        }
    }
    return state;
}

}  // namespace

std::array<double, 3> mixed_residual(const MixedCycleParams& params, const MixedCycleState& state) {
    const Vec3 f = residual_vec(params, state.phi1, to_vec(state));
    return {f[0], f[1], f[2]};
}

// At phi_1 = phi_2 = 0 the extra condition is real. For both species present,
// condt gives t_2 as a function of t_1 and the remaining real equation
// changes sign on the admissible t_1 interval, so bisection brackets the seed.
// A missing species decouples: t of the present species solves its own
// reduced condition and the other t follows from the monotone extra condition.
MixedCycleState mixed_cycle_seed(const MixedCycleParams& p) {
    validate(p);
    const auto& [s1, s2] = p.species;
    auto extra_real = [&](double t1, double t2) {
        return s1.weight / t1 - s1.weight * std::pow(t1, s1.k - 1) - s2.weight / t2 + s2.weight * std::pow(t2, s2.k - 1);
    };
    auto bisect = [](auto&& f, double lo, double hi) {
        // f(lo) > 0 > f(hi)
        for (int it = 0; it < 300 && hi - lo > 1e-15 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            (f(mid) > 0.0 ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    };
    // Root of w/t - w t^{k-1} = target; the left side decreases from +inf to -inf.
    auto free_species_t = [&](double target, double w, int k) {
        auto g = [&](double t) { return w / t - w * std::pow(t, k - 1) - target; };
        double hi = 1.0;
        while (g(hi) > 0.0) hi *= 2.0;
        double lo = hi;
        while (g(lo) < 0.0) lo *= 0.5;
        return bisect(g, lo, hi);
    };

    Vec3 x;
    if (s2.d == 0.0) {
        const double t1 = solve_segment_depth(s1.d - 1.0, s1.k);
        const double c = s1.weight / t1 - s1.weight * std::pow(t1, s1.k - 1);
        x = {t1, free_species_t(c, s2.weight, s2.k), 0.0};
    } else if (s1.d == 0.0) {
        const double t2 = solve_segment_depth(s2.d - 1.0, s2.k);
        const double c = s2.weight / t2 - s2.weight * std::pow(t2, s2.k - 1);
        x = {free_species_t(c, s1.weight, s1.k), t2, 0.0};
    } else {
        auto t2_of = [&](double t1) {
            const double sig1 = tail(t1, s1.k).value;
            const double sig2 = (1.0 - (s1.d - 1.0) * sig1) / ((s1.d + s2.d - 1.0) * sig1 + s2.d - 1.0);
            return invert_tail(sig2, s2.k);
        };
        auto g = [&](double t1) { return extra_real(t1, t2_of(t1)); };
        double hi;
        if (s1.d > 1.0) {
            hi = invert_tail(1.0 / (s1.d - 1.0), s1.k) * (1.0 - 1e-12);
        } else {
            hi = 1.0;
            while (g(hi) > 0.0) hi *= 2.0;
        }
        double lo = hi * 0.5;
        while (g(lo) < 0.0) lo *= 0.5;
        const double t1 = bisect(g, lo, hi);
        x = {t1, t2_of(t1), 0.0};
    }

    double residual = 0.0;
    if (!newton(p, 0.0, x, residual)) {
        throw ContinuationFailure("mixed-cycle seed did not converge at phi1 = 0", 0.0);
    }
    return to_state(0.0, x, residual);
}

MixedCycleState mixed_cycle_solve(const MixedCycleParams& params, double phi1) {
    if (!(phi1 >= 0.0) || !std::isfinite(phi1)) throw InvalidInput("mixed-cycle solve: phi1 must be non-negative");
    MixedCycleState state = mixed_cycle_seed(params);
    int halvings = 0;
    return continue_to(params, state, phi1, two_pi / min_samples, halvings);
}

Complex mixed_boundary_point(const MixedCycleParams& params, const MixedCycleState& s) {
    const auto& [a, b] = params.species;
    return std::polar(a.weight / (2.0 * s.t1), -s.phi1) + std::polar(b.weight / (2.0 * s.t2), -s.phi2) +
           std::polar((a.d - 0.5) * a.weight * std::pow(s.t1, a.k - 1), (a.k - 1) * s.phi1) +
           std::polar((b.d - 0.5) * b.weight * std::pow(s.t2, b.k - 1), (b.k - 1) * s.phi2);
}

BoundaryCurve mixed_cycle_boundary(const MixedCycleParams& params, int n_samples) {
    if (n_samples < min_samples) throw InvalidSpec("boundary curves need at least 512 samples");
    BoundaryCurve curve;
    curve.law = params;
    MixedCycleState state = mixed_cycle_seed(params);
    curve.continuation.push_back(state);
    curve.samples.push_back({0.0, mixed_boundary_point(params, state)});
    const double step = two_pi / n_samples;
    for (int i = 1; i <= n_samples; ++i) {
        const double target = (i == n_samples) ? two_pi : step * i;
        state = continue_to(params, state, target, step, curve.step_halvings);
        curve.continuation.push_back(state);
        if (i < n_samples) curve.samples.push_back({target, mixed_boundary_point(params, state)});
    }
    // The sweep must return to its starting point (phi_2 advances by 2 pi).
    curve.closure_error = std::abs(mixed_boundary_point(params, state) - curve.samples.front().z);
    if (curve.closure_error > 1e-6 * (1.0 + std::abs(curve.samples.front().z))) {
        throw ContinuationFailure("mixed-cycle continuation did not close (error " +
                                      std::to_string(curve.closure_error) + ")",
                                  two_pi);
    }
    return curve;
}

double mixed_mean_degree(const MixedCycleParams& p) {
    return std::sqrt(p.species[0].d * p.species[0].weight * p.species[0].weight +
                     p.species[1].d * p.species[1].weight * p.species[1].weight);
}

BoundaryCurve mixed_cycle_asymptotic(const MixedCycleParams& params, int n_samples) {
    if (n_samples < min_samples) throw InvalidSpec("boundary curves need at least 512 samples");
    const double dbar = mixed_mean_degree(params);
    if (!(dbar > 0.0)) throw InvalidSpec("mixed asymptotic law: sqrt(d1 w1^2 + d2 w2^2) must be positive");
    BoundaryCurve curve;
    curve.law = MixedAsymptoticParams{params};
    curve.samples.reserve(static_cast<std::size_t>(n_samples));
    for (int i = 0; i < n_samples; ++i) {
        const double phi = two_pi * i / n_samples;
        Complex z = std::polar(1.0, -phi);
        for (const auto& s : params.species) {
            z += std::polar(s.d * std::pow(s.weight / dbar, s.k), (s.k - 1) * phi);
        }
        curve.samples.push_back({phi, dbar * z});
    }
    return curve;
}

}  // namespace trochoid::boundary
