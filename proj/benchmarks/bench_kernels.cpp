#include <benchmark/benchmark.h>

#include "trochoid/boundary.hpp"
#include "trochoid/ensemble.hpp"
#include "trochoid/spectra.hpp"

using namespace trochoid;

namespace {

ensemble::DenseCyclicSpec sweep_spec(int n) { return {n, 3, 0.5, +1, ensemble::BaseDistribution::gaussian}; }

void BM_SweepIncremental(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto base = ensemble::generate_base_iid(n, 1);
    for (auto _ : state) benchmark::DoNotOptimize(ensemble::induce_cyclic_correlations(base, sweep_spec(n), 1));
    state.SetComplexityN(n);
}
BENCHMARK(BM_SweepIncremental)->RangeMultiplier(2)->Range(32, 256)->Complexity();

void BM_SweepReference(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto base = ensemble::generate_base_iid(n, 1);
    for (auto _ : state) benchmark::DoNotOptimize(ensemble::induce_cyclic_correlations_reference(base, sweep_spec(n), 1));
    state.SetComplexityN(n);
}
BENCHMARK(BM_SweepReference)->RangeMultiplier(2)->Range(32, 128)->Complexity();

void BM_Eigensolve(benchmark::State& state) {
    const auto m = ensemble::generate_base_iid(static_cast<int>(state.range(0)), 2);
    for (auto _ : state) benchmark::DoNotOptimize(spectra::compute_eigenvalues(m));
}
BENCHMARK(BM_Eigensolve)->Arg(250)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_MixedBoundary(benchmark::State& state) {
    boundary::MixedCycleParams p;
    p.species = {boundary::MixedSpecies{4, 3, 1.0}, boundary::MixedSpecies{4, 4, 1.0}};
    for (auto _ : state) benchmark::DoNotOptimize(boundary::mixed_cycle_boundary(p));
}
BENCHMARK(BM_MixedBoundary)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
