// Serial versus OpenMP replica loops on a signed-kernel simulation workload.

#include "hawkes/renewal.hpp"
#include "hawkes/replicas.hpp"
#include "hawkes/rng.hpp"
#include "hawkes/simulation.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace hawkes;

const SignedKernel kernel({{0.0, 1.0, -0.3}, {1.0, 2.0, 0.4}});

std::size_t replica(std::size_t i) {
    SimulationOptions o;
    o.keep_embedding_log = false;
    const auto p = simulate_hawkes(kernel, 1.0, PointConfiguration::empty(-2.0, 0.0), 2000.0, derive_seed(1, i), o);
    return detect_renewals(p, 2.0).returns.size();
}

void bm_serial(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(serial_map(static_cast<std::size_t>(state.range(0)), replica));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void bm_parallel(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(parallel_map(static_cast<std::size_t>(state.range(0)), replica));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

} // namespace

BENCHMARK(bm_serial)->Arg(16)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_parallel)->Arg(16)->Arg(128)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
