#pragma once

#include <cstdint>

namespace trochoid {

// splitmix64 finalizer; used both to expand seeds and to derive stream keys.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// xoshiro256** (Blackman & Vigna). State is filled from a splitmix64 sequence,
/// so any 64-bit key gives a valid non-zero state.
///
/// Generators never share a stream: every consumer asks for
/// `Rng::stream(seed, tag, index)`, with `tag` naming the purpose (base entries,
/// flips, cycle placement, ...) and `index` the row/cycle/node. Output for a
/// fixed (seed, tag, index) is independent of thread scheduling.
class Rng {
public:
    explicit Rng(std::uint64_t key) noexcept;

    static Rng stream(std::uint64_t seed, std::uint64_t tag, std::uint64_t index) noexcept;

    std::uint64_t next() noexcept;

    // Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept;

    // Uniform integer on [0, bound), unbiased (rejection on the top of the range).
    std::uint64_t below(std::uint64_t bound) noexcept;

    // Standard normal via the Marsaglia polar method.
    double normal() noexcept;

private:
    std::uint64_t s_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

namespace stream_tag {
inline constexpr std::uint64_t base_entries = 0x62617365;  // "base"
inline constexpr std::uint64_t sign_flips = 0x666c6970;    // "flip"
inline constexpr std::uint64_t elliptic = 0x656c6c69;      // "elli"
inline constexpr std::uint64_t slot_shuffle = 0x73686666;  // "shff"
inline constexpr std::uint64_t slot_repair = 0x72657061;   // "repa"
inline constexpr std::uint64_t poisson_cycle = 0x706f6973; // "pois"
}  // namespace stream_tag

}  // namespace trochoid
