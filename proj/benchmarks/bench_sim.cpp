#include <benchmark/benchmark.h>

#include "platoon/scenario.hpp"
#include "platoon/sim.hpp"

using namespace platoon;

namespace {

Scenario bench_scenario(int hubs, int trucks) {
  ScenarioConfig c;
  c.hub_count = hubs;
  c.truck_count = trucks;
  c.seed = 1;
  return make_scenario(c);
}

void BM_GenerateScenario(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(bench_scenario(105, static_cast<int>(state.range(0))).trucks.size());
  }
}
BENCHMARK(BM_GenerateScenario)->Arg(500)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_Simulate(benchmark::State& state) {
  const Scenario s = bench_scenario(20, static_cast<int>(state.range(1)));
  const auto scheme = kAllSchemes[state.range(0)];
  for (auto _ : state) benchmark::DoNotOptimize(run_simulation(s, scheme).metrics.total_reward);
  state.SetLabel(std::string(to_string(scheme)));
}
BENCHMARK(BM_Simulate)
    ->ArgsProduct({{0, 1, 2}, {100, 300}})
    ->Unit(benchmark::kMillisecond);

}  // namespace
