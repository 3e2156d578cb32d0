// Parallel replicate farm against the serial reference on two kernels.

#include <benchmark/benchmark.h>

#include "gpfv/farm.hpp"
#include "gpfv/forward.hpp"
#include "gpfv/lookdown.hpp"
#include "gpfv/popsize.hpp"

namespace {

const gpfv::Characteristic& characteristic() {
    static const gpfv::Characteristic c = gpfv::wright_fisher_scaling(1.0 / 3.0);
    return c;
}

double forward_replicate(std::size_t r) {
    static const gpfv::TypeMeasure initial = gpfv::TypeMeasure::equal_types(1.0, 2);
    static const std::vector<double> grid{20.0};
    gpfv::ForwardOptions options;
    options.tracked = {0.0};
    options.record_jumps = false;
    options.record_snapshots = false;
    return gpfv::simulate_forward(characteristic(), initial, 20.0, gpfv::derive_seed(7, r, "bench"), grid, options)
        .frequency.back()
        .w;
}

std::size_t lookdown_replicate(std::size_t r) {
    static const std::vector<double> types(64, 0.0);
    gpfv::LookdownOptions options;
    options.record_events = false;
    const auto path = gpfv::simulate_lookdown(characteristic(), 1.0, types, 20.0, gpfv::derive_seed(7, r, "bench"), options);
    return gpfv::distinct_ancestors(path.final_state, 64);
}

void BM_ForwardSerial(benchmark::State& state) {
    for (auto _ : state) {
        auto out = gpfv::farm_serial(static_cast<std::size_t>(state.range(0)), forward_replicate);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_ForwardParallel(benchmark::State& state) {
    for (auto _ : state) {
        auto out = gpfv::farm(static_cast<std::size_t>(state.range(0)), forward_replicate);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
    state.counters["threads"] = gpfv::farm_threads();
}

void BM_LookdownSerial(benchmark::State& state) {
    for (auto _ : state) {
        auto out = gpfv::farm_serial(static_cast<std::size_t>(state.range(0)), lookdown_replicate);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_LookdownParallel(benchmark::State& state) {
    for (auto _ : state) {
        auto out = gpfv::farm(static_cast<std::size_t>(state.range(0)), lookdown_replicate);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
    state.counters["threads"] = gpfv::farm_threads();
}

}  // namespace

BENCHMARK(BM_ForwardSerial)->Arg(256)->Arg(2048);
BENCHMARK(BM_ForwardParallel)->Arg(256)->Arg(2048);
BENCHMARK(BM_LookdownSerial)->Arg(256)->Arg(2048);
BENCHMARK(BM_LookdownParallel)->Arg(256)->Arg(2048);

BENCHMARK_MAIN();
