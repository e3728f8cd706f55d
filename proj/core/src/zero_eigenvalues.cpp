#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "trochoid/spectra.hpp"

namespace trochoid::spectra {

namespace {

using u64 = std::uint64_t;

// Mersenne prime 2^31 - 1: reduction by shifts instead of division.
constexpr u64 p = (1ULL << 31) - 1;

u64 reduce(u64 x) {
    x = (x & p) + (x >> 31);
    x = (x & p) + (x >> 31);
    return x >= p ? x - p : x;
}

u64 pow_mod(u64 base, u64 exp) {
    u64 result = 1;
    for (base = reduce(base); exp > 0; exp >>= 1) {
        if (exp & 1) result = reduce(result * base);
        base = reduce(base * base);
    }
    return result;
}

// Row-major n x n matrix over GF(p); destroyed.
int rank_mod(std::vector<u64> a, int n) {
    int rank = 0;
    for (int col = 0; col < n && rank < n; ++col) {
        int pivot = -1;
        for (int r = rank; r < n; ++r) {
            if (a[static_cast<std::size_t>(r) * n + col] != 0) {
                pivot = r;
                break;
            }
        }
        if (pivot < 0) continue;
        if (pivot != rank) {
            std::swap_ranges(a.begin() + static_cast<long>(pivot) * n, a.begin() + static_cast<long>(pivot + 1) * n,
                             a.begin() + static_cast<long>(rank) * n);
        }
        u64* top = &a[static_cast<std::size_t>(rank) * n];
        const u64 inv = pow_mod(top[col], p - 2);
        for (int c = col; c < n; ++c) top[c] = reduce(top[c] * inv);
        for (int r = rank + 1; r < n; ++r) {
            u64* row = &a[static_cast<std::size_t>(r) * n];
            const u64 f = row[col];
            if (f == 0) continue;
            for (int c = col; c < n; ++c) row[c] = reduce(row[c] + (p - f) * top[c]);
        }
        ++rank;
    }
    return rank;
}

struct IntEdge {
    int source;
    int target;
    long long weight;
};

u64 from_signed(long long w) {
    const long long m = static_cast<long long>(p);
    return static_cast<u64>((w % m + m) % m);
}

int multiplicity_mod(const std::vector<IntEdge>& edges, int n) {
    std::vector<u64> power(static_cast<std::size_t>(n) * n, 0);
    for (const auto& e : edges) {
        auto& cell = power[static_cast<std::size_t>(e.source) * n + e.target];
        cell = reduce(cell + from_signed(e.weight));
    }
    int previous = n;
    for (int j = 1; j <= n; ++j) {
        const int rank = rank_mod(power, n);
        if (rank == previous || rank == 0) return n - rank;
        previous = rank;
        // power <- A * power, one sparse row combination per edge.
        std::vector<u64> next(power.size(), 0);
        for (const auto& e : edges) {
            const u64 w = from_signed(e.weight);
            u64* dst = &next[static_cast<std::size_t>(e.source) * n];
            const u64* src = &power[static_cast<std::size_t>(e.target) * n];
            for (int c = 0; c < n; ++c) dst[c] = reduce(dst[c] + w * src[c]);
        }
        power.swap(next);
    }
    return n - previous;
}

}  // namespace

std::optional<int> zero_eigenvalue_multiplicity(const SparseDigraph& g) {
    if (g.n == 0) return 0;
    double unit = 0.0;
    for (const auto& e : g.edges) {
        if (e.weight != 0.0) unit = unit == 0.0 ? std::abs(e.weight) : std::min(unit, std::abs(e.weight));
    }
    if (unit == 0.0) return g.n;
    std::vector<IntEdge> edges;
    edges.reserve(g.edges.size());
    for (const auto& e : g.edges) {
        const double q = e.weight / unit;
        const double rounded = std::round(q);
        if (std::abs(q - rounded) > 1e-9 * std::max(1.0, std::abs(q)) || std::abs(rounded) > 1e9) return std::nullopt;
        if (rounded != 0.0) edges.push_back({e.source, e.target, static_cast<long long>(rounded)});
    }
    // Rank over GF(p) can only undercount the rank over Q, and does so with
    // probability of order n / p; snap_zero_eigenvalues' separation test guards
    // against that case.
    return multiplicity_mod(edges, g.n);
}

int snap_zero_eigenvalues(Spectrum& s, int multiplicity) {
    const int n = static_cast<int>(s.eigenvalues.size());
    if (multiplicity <= 0 || multiplicity > n) return 0;
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return std::abs(s.eigenvalues[a]) < std::abs(s.eigenvalues[b]); });
    const double radius = std::abs(s.eigenvalues[order.back()]);
    const double largest_zero = std::abs(s.eigenvalues[order[multiplicity - 1]]);
    if (largest_zero > 1e-2 * radius) return 0;
    if (multiplicity < n && largest_zero > 0.5 * std::abs(s.eigenvalues[order[multiplicity]])) return 0;
    for (int i = 0; i < multiplicity; ++i) s.eigenvalues[order[i]] = Complex{0.0, 0.0};
    return multiplicity;
}

}  // namespace trochoid::spectra
