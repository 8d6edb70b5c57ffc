#include <benchmark/benchmark.h>

#include "sstp/config.hpp"
#include "sstp/engine.hpp"
#include "sstp/random.hpp"

namespace {

sstp::RunConfig fig2_with_modes(int n_modes)
{
    auto config = *sstp::preset("fig2");
    config.n_modes = n_modes;
    return config;
}

void BM_SegmentStep(benchmark::State& state)
{
    auto const config = fig2_with_modes(static_cast<int>(state.range(0)));
    sstp::TrajectoryRunner const runner(config);
    sstp::SegmentPropagator const propagator(config.model, runner.bath(), config.tau);
    sstp::SurfacePair const pair = state.range(1) == 0 ? sstp::kAllPairs[0] : sstp::kAllPairs[1];
    sstp::SegmentState segment{runner.initial_point(0), pair, 0.0};
    double gamma = sstp::system_bath_coordinate(segment.point.positions, runner.bath());
    for (auto _ : state)
    {
        gamma = propagator.advance(segment, gamma);
        benchmark::DoNotOptimize(gamma);
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SegmentStep)->ArgsProduct({{50, 200, 800}, {0, 1}})->ArgNames({"modes", "coherence"});

void BM_EngineStep(benchmark::State& state)
{
    auto config = fig2_with_modes(200);
    config.scheme.variant = state.range(0) == 0 ? sstp::SchemeVariant::primitive : sstp::SchemeVariant::energy_conserving;
    sstp::TrajectoryRunner const runner(config);
    auto trajectory = runner.start({runner.initial_point(0), sstp::kAllPairs[0], 0.0});
    sstp::RandomStream rng(1, 0, 1);
    sstp::HopStatistics stats;
    long step = 0;
    for (auto _ : state)
    {
        runner.step(trajectory, rng, ++step, stats);
        // Keep the weight finite for long benchmark runs.
        trajectory.amplitude = 1.0;
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_EngineStep)->Arg(0)->Arg(1)->ArgName("energy_conserving");

void BM_Trajectory(benchmark::State& state)
{
    auto config = fig2_with_modes(200);
    config.t_max = 10.0;
    sstp::TrajectoryRunner const runner(config);
    long index = 0;
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(runner.run_trajectory(index++));
    }
    state.SetItemsProcessed(state.iterations() * 4 * config.n_steps());
}
BENCHMARK(BM_Trajectory)->Unit(benchmark::kMillisecond);

void BM_Philox(benchmark::State& state)
{
    sstp::RandomStream rng(7, 0);
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(rng.uniform());
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Philox);

}  // namespace

BENCHMARK_MAIN();
