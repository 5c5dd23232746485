#include <benchmark/benchmark.h>

#include "memforage/environment.hpp"
#include "memforage/oracle.hpp"
#include "memforage/strategy.hpp"

namespace {

using namespace memforage;

void BM_RunStrategy(benchmark::State& state, const char* env_name, StrategyKind kind, SequentialMode mode) {
  const Environment env = preset(env_name);
  const auto params = env.params();
  const StrategySchedule schedule = make_schedule(kind, params, mode);
  RunOptions options = default_run_options(env);
  options.keep_records = state.range(0) != 0;
  for (auto _ : state) {
    SimulationTrace trace = run_strategy(env, schedule, options);
    benchmark::DoNotOptimize(trace.depletion_time);
  }
}

BENCHMARK_CAPTURE(BM_RunStrategy, rich_all_sites, "rich", StrategyKind::AllSites, SequentialMode::ParallelResidual)
    ->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_RunStrategy, poor_all_sites, "poor", StrategyKind::AllSites, SequentialMode::ParallelResidual)
    ->Arg(0)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_RunStrategy, rich_leafcutter, "rich", StrategyKind::Leafcutter, SequentialMode::ParallelResidual)
    ->Arg(0)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_RunStrategy, rich_sequential, "rich", StrategyKind::Sequential, SequentialMode::SharedSeries)
    ->Arg(0)->Unit(benchmark::kMillisecond);

void BM_Step(benchmark::State& state) {
  const Environment env = preset("rich");
  const auto params = env.params();
  const StrategySchedule schedule = make_schedule(StrategyKind::AllSites, params);
  const SimulationState initial = make_initial_state(env.states(), env.supply_v, schedule);
  for (auto _ : state) {
    StepOutcome outcome = step(initial, env.dt, &schedule);
    benchmark::DoNotOptimize(outcome.record.influx);
  }
}
BENCHMARK(BM_Step);

void BM_OraclePlan(benchmark::State& state) {
  const Environment env = preset("rich");
  const auto params = env.params();
  for (auto _ : state) {
    StrategyOracle oracle = strategy_oracle_time(params, env.supply_v, StrategyKind::Leafcutter);
    benchmark::DoNotOptimize(oracle.total_time);
  }
}
BENCHMARK(BM_OraclePlan);

}  // namespace

BENCHMARK_MAIN();
