// Closed-loop simulation throughput per strategy and population size.

#include <benchmark/benchmark.h>

#include "deeplq/scenarios.hpp"
#include "deeplq/simulator.hpp"
#include "deeplq/strategies.hpp"

namespace {

void simulate_with(benchmark::State& state, deeplq::StrategyKind kind) {
  const auto m = deeplq::builtin_poi_coupled(static_cast<int>(state.range(0)), 0.5);
  auto strategy = deeplq::make_strategy(kind, m);
  deeplq::SimulationOptions o;
  o.record = false;
  std::uint64_t replicate = 0;
  for (auto _ : state) benchmark::DoNotOptimize(deeplq::simulate(m, *strategy, o, 1, replicate++));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SimulateDss(benchmark::State& state) { simulate_with(state, deeplq::StrategyKind::Dss); }
void BM_SimulatePdss(benchmark::State& state) { simulate_with(state, deeplq::StrategyKind::PdssFinite); }
BENCHMARK(BM_SimulateDss)->RangeMultiplier(4)->Range(4, 256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SimulatePdss)->RangeMultiplier(4)->Range(4, 256)->Unit(benchmark::kMillisecond);

void BM_MonteCarlo(benchmark::State& state) {
  const auto m = deeplq::builtin_por_scalar(16, 0.5);
  const auto strategy = deeplq::make_strategy(deeplq::StrategyKind::Dss, m);
  for (auto _ : state) {
    benchmark::DoNotOptimize(deeplq::estimate_risk_sensitive_cost(m, *strategy, static_cast<int>(state.range(0)), {}, 2));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MonteCarlo)->Arg(1000)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace
