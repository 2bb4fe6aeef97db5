#include <benchmark/benchmark.h>

#include "macvlc/regions.hpp"
#include "macvlc/simharness.hpp"

using namespace macvlc;

namespace {

ExperimentConfig sim_config(int workers) {
    ExperimentConfig cfg;
    cfg.channel = builtin_channel(Builtin::noisy_adder, 0.1);
    cfg.scheme.type = SchemeSpec::Type::random;
    cfg.scheme.m1 = 64;
    cfg.scheme.m2 = 64;
    cfg.scheme.seed = 7;
    cfg.decoder.rule = DecodeRule::joint;
    cfg.decoder.epsilon = 0.2;
    cfg.trials = 200;
    cfg.master_seed = 7;
    cfg.workers = workers;
    return cfg;
}

void BM_experiment_serial(benchmark::State& state) {
    ExperimentConfig cfg = sim_config(1);
    for (auto _ : state) benchmark::DoNotOptimize(run_experiment(cfg));
}

void BM_experiment_parallel(benchmark::State& state) {
    ExperimentConfig cfg = sim_config((int)state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(run_experiment(cfg));
}

void BM_region_sweep_serial(benchmark::State& state) {
    McChannel ch = builtin_channel(Builtin::noisy_adder, 0.1);
    for (auto _ : state)
        benchmark::DoNotOptimize(block_capacity_region(ch, (int)state.range(0), 1));
}

void BM_region_sweep_parallel(benchmark::State& state) {
    McChannel ch = builtin_channel(Builtin::noisy_adder, 0.1);
    for (auto _ : state)
        benchmark::DoNotOptimize(block_capacity_region(ch, (int)state.range(0), 0));
}

} // namespace

BENCHMARK(BM_experiment_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_experiment_parallel)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_region_sweep_serial)->Arg(101)->Arg(301)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_region_sweep_parallel)->Arg(101)->Arg(301)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
