// Deep Riccati solve versus the centralized joint-system solve as n grows.

#include <benchmark/benchmark.h>

#include "deeplq/centralized_oracle.hpp"
#include "deeplq/deep_riccati.hpp"
#include "deeplq/scenarios.hpp"

namespace {

void BM_DeepRiccati(benchmark::State& state) {
  const auto m = deeplq::builtin_poi_coupled(static_cast<int>(state.range(0)), 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(deeplq::solve_deep_riccati(m));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DeepRiccati)->RangeMultiplier(2)->Range(2, 1024)->Unit(benchmark::kMillisecond)->Complexity();

void BM_Centralized(benchmark::State& state) {
  const auto m = deeplq::builtin_poi_coupled(static_cast<int>(state.range(0)), 0.5);
  deeplq::CentralizedOracleOptions o;
  o.max_joint_dim = 1024;
  for (auto _ : state) benchmark::DoNotOptimize(deeplq::centralized_oracle_gains(m, o));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Centralized)->RangeMultiplier(2)->Range(2, 32)->Unit(benchmark::kMillisecond)->Complexity();

void BM_GainSchedule(benchmark::State& state) {
  const auto m = deeplq::builtin_supply_chain('a', static_cast<int>(state.range(0)), 0);
  for (auto _ : state) benchmark::DoNotOptimize(deeplq::make_gain_schedule(m));
}
BENCHMARK(BM_GainSchedule)->Arg(20)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace
