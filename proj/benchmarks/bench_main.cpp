#include <benchmark/benchmark.h>

#include "reflectsim/capacity.hpp"
#include "reflectsim/optimizer.hpp"

using namespace reflectsim;

namespace {

Scenario bench_scenario(int pairs, int elements) {
    Scenario s;
    s.room = Room(10.0, 10);
    if (elements > 0)
        s.layouts.push_back(midwall_layout(s.room, 0, elements, 0.0625));
    for (int l = 0; l < pairs; ++l) {
        s.deployment.tx_positions.push_back({1.0 + l, 2.0});
        s.deployment.rx_positions.push_back({1.0 + l, 8.0});
    }
    s.params = LinkParams{};
    return s;
}

void channel_matrix_build(benchmark::State& state) {
    const Scenario s = bench_scenario(int(state.range(0)), int(state.range(1)));
    for (auto _ : state)
        benchmark::DoNotOptimize(channel_matrix(s));
}
BENCHMARK(channel_matrix_build)->Args({2, 48})->Args({5, 48})->Args({5, 144});

void effective_gain_eval(benchmark::State& state) {
    const Scenario s = bench_scenario(1, int(state.range(0)));
    const auto h = channel_matrix(s);
    PhaseVector v;
    v.phases.assign(s.pooled_element_count(), 0.25);
    for (auto _ : state)
        benchmark::DoNotOptimize(effective_gain(h[0][0], v));
}
BENCHMARK(effective_gain_eval)->Arg(48)->Arg(144);

void ascent_sweep(benchmark::State& state) {
    const Scenario s = bench_scenario(2, int(state.range(0)));
    PhaseSearchConfig cfg;
    cfg.max_sweeps = 1;
    for (auto _ : state)
        benchmark::DoNotOptimize(optimize_phases(s, Objective::transport(), cfg));
}
BENCHMARK(ascent_sweep)->Arg(16)->Arg(48);

void placement_enumeration(benchmark::State& state) {
    const Room room(10.0, int(state.range(0)));
    for (auto _ : state) {
        PlacementEnumerator en(room, 1);
        std::uint64_t n = 0;
        while (en.next()) ++n;
        benchmark::DoNotOptimize(n);
    }
}
BENCHMARK(placement_enumeration)->Arg(2)->Arg(3);

} // namespace

BENCHMARK_MAIN();
