#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "trochoid/ensemble.hpp"
#include "trochoid/errors.hpp"
#include "trochoid/rng.hpp"

namespace trochoid::ensemble {

namespace {

bool contains_other(const std::vector<int>& slots, int begin, int k, int skip, int node) {
    for (int i = begin; i < begin + k; ++i) {
        if (i != skip && slots[i] == node) return true;
    }
    return false;
}

// Index of the first slot in tuple `t` whose node already occurred earlier in
// the same tuple, or -1.
int first_repeat(const std::vector<int>& slots, int t, int k) {
    const int begin = t * k;
    for (int i = begin + 1; i < begin + k; ++i) {
        for (int j = begin; j < i; ++j) {
            if (slots[i] == slots[j]) return i;
        }
    }
    return -1;
}

// Layered placement: position j of every cycle is filled from the nodes with
// id = j (mod k). Each class lists its nodes d times; the lists are shuffled
// independently and cycle t takes entry t of every list. Nodes within a cycle
// are distinct by construction, so no repair is needed.
std::vector<std::vector<int>> place_layered(int n, int d, int k, std::uint64_t seed, std::uint64_t species) {
    const int cycle_count = d * (n / k);
    Rng shuffle = Rng::stream(seed, stream_tag::slot_shuffle, species);
    std::vector<std::vector<int>> cycles(static_cast<std::size_t>(cycle_count), std::vector<int>(static_cast<std::size_t>(k)));
    std::vector<int> column;
    column.reserve(static_cast<std::size_t>(cycle_count));
    for (int j = 0; j < k; ++j) {
        column.clear();
        for (int node = j; node < n; node += k) {
            for (int c = 0; c < d; ++c) column.push_back(node);
        }
        for (std::size_t i = column.size(); i > 1; --i) std::swap(column[i - 1], column[shuffle.below(i)]);
        for (int t = 0; t < cycle_count; ++t) cycles[t][j] = column[t];
    }
    return cycles;
}

// Configuration-model placement of d*n/k cycles of length k: d copies of each
// node id are shuffled and chopped into consecutive k-tuples. Tuples that
// repeat a node are repaired by swapping the offending slot with a random slot
// of another tuple, provided neither tuple gains a repeat. After 100*n swap
// attempts the slots are reshuffled, up to max_placement_restarts times.
constexpr int max_placement_restarts = 200;
std::vector<std::vector<int>> place_cycles(int n, int d, int k, std::uint64_t seed,
                                           std::uint64_t species) {
    const long long total = static_cast<long long>(d) * n;
    const int cycle_count = static_cast<int>(total / k);
    std::vector<int> slots;
    slots.reserve(static_cast<std::size_t>(total));
    for (int node = 0; node < n; ++node) {
        for (int c = 0; c < d; ++c) slots.push_back(node);
    }

    Rng shuffle = Rng::stream(seed, stream_tag::slot_shuffle, species);
    for (std::size_t i = slots.size(); i > 1; --i) {
        const std::size_t j = shuffle.below(i);
        std::swap(slots[i - 1], slots[j]);
    }

    Rng repair = Rng::stream(seed, stream_tag::slot_repair, species);
    const long long budget = 100LL * n;
    long long attempts = 0;
    for (int restart = 0;; ++restart) {
        bool stuck = false;
        for (int t = 0; t < cycle_count && !stuck; ++t) {
            for (int bad = first_repeat(slots, t, k); bad >= 0; bad = first_repeat(slots, t, k)) {
                if (cycle_count == 1 || attempts >= budget) {
                    stuck = true;
                    break;
                }
                ++attempts;
                const int other = static_cast<int>(repair.below(static_cast<std::uint64_t>(total)));
                const int other_tuple = other / k;
                if (other_tuple == t) continue;
                const int a = slots[bad];
                const int b = slots[other];
                if (contains_other(slots, t * k, k, bad, b)) continue;
                if (contains_other(slots, other_tuple * k, k, other, a)) continue;
                std::swap(slots[bad], slots[other]);
            }
        }
        if (!stuck) break;
        // Single swaps can deadlock on tight instances; reshuffle and retry.
        if (cycle_count == 1 || restart + 1 >= max_placement_restarts) {
            throw GenerationFailure("cycle placement: could not remove repeated nodes after " +
                                    std::to_string(restart + 1) + " shuffles (n=" + std::to_string(n) +
                                    ", d=" + std::to_string(d) + ", k=" + std::to_string(k) + ")");
        }
        attempts = 0;
        for (std::size_t i = slots.size(); i > 1; --i) std::swap(slots[i - 1], slots[repair.below(i)]);
    }

    std::vector<std::vector<int>> cycles(static_cast<std::size_t>(cycle_count));
    for (int t = 0; t < cycle_count; ++t) {
        cycles[t].assign(slots.begin() + static_cast<long>(t) * k, slots.begin() + static_cast<long>(t + 1) * k);
    }
    return cycles;
}

}  // namespace

SparseDigraph generate_regular_cyclic(const RegularCyclicSpec& spec, std::uint64_t seed) {
    validate(spec);
    auto cycles = uses_layers(spec.placement, spec.n, spec.k) ? place_layered(spec.n, spec.d, spec.k, seed, 0)
                                                              : place_cycles(spec.n, spec.d, spec.k, seed, 0);
    std::vector<double> weights(cycles.size(), spec.weight);
    return digraph_from_cycles(spec.n, std::move(cycles), std::move(weights));
}

SparseDigraph generate_poisson_cyclic(const PoissonCyclicSpec& spec, std::uint64_t seed) {
    validate(spec);
    const long long count = std::llround(spec.mean_degree * spec.n / spec.k);
    const bool layered = uses_layers(spec.placement, spec.n, spec.k);
    const auto class_size = static_cast<std::uint64_t>(spec.n / spec.k);
    std::vector<std::vector<int>> cycles(static_cast<std::size_t>(count));
    for (long long c = 0; c < count; ++c) {
        Rng rng = Rng::stream(seed, stream_tag::poisson_cycle, static_cast<std::uint64_t>(c));
        auto& cycle = cycles[static_cast<std::size_t>(c)];
        if (layered) {
            for (int j = 0; j < spec.k; ++j) cycle.push_back(j + spec.k * static_cast<int>(rng.below(class_size)));
            continue;
        }
        cycle.reserve(static_cast<std::size_t>(spec.k));
        while (static_cast<int>(cycle.size()) < spec.k) {
            const int node = static_cast<int>(rng.below(static_cast<std::uint64_t>(spec.n)));
            if (std::find(cycle.begin(), cycle.end(), node) == cycle.end()) cycle.push_back(node);
        }
    }
    std::vector<double> weights(cycles.size(), spec.weight);
    return digraph_from_cycles(spec.n, std::move(cycles), std::move(weights));
}

// Species r draws from placement stream r, so a mixed spec whose second
// species is absent reproduces generate_regular_cyclic for the same seed.
SparseDigraph generate_mixed_cyclic(const MixedCyclicSpec& spec, std::uint64_t seed) {
    validate(spec);
    std::vector<std::vector<int>> cycles;
    std::vector<double> weights;
    for (std::size_t r = 0; r < spec.species.size(); ++r) {
        const CycleSpecies& s = spec.species[r];
        if (s.d == 0) continue;
        auto placed = uses_layers(spec.placement, spec.n, s.k) ? place_layered(spec.n, s.d, s.k, seed, r)
                                                                : place_cycles(spec.n, s.d, s.k, seed, r);
        weights.insert(weights.end(), placed.size(), s.weight);
        std::move(placed.begin(), placed.end(), std::back_inserter(cycles));
    }
    return digraph_from_cycles(spec.n, std::move(cycles), std::move(weights));
}

}  // namespace trochoid::ensemble
