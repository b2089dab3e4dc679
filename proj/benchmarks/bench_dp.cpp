#include <benchmark/benchmark.h>

#include <vector>

#include "platoon/dp_solver.hpp"

using namespace platoon;

namespace {

// `stages` one-hour edges, one partner every `spacing` seconds across the
// reachable window of each stage, fleets cycling over four carriers.
DpInstance dense_instance(int stages, Seconds budget, Seconds spacing) {
  DpInstance inst;
  inst.arrival = 30000;
  inst.deadline = inst.arrival + stages * 3600 + budget;
  Seconds earliest = inst.arrival;
  TruckId id = 1;
  for (int m = 0; m < stages; ++m) {
    DpStage stage;
    stage.travel_time = 3600;
    for (Seconds d = earliest; d <= earliest + budget; d += spacing) {
      stage.partners.push_back({id, static_cast<FleetId>(id % 4), d});
      ++id;
    }
    inst.stages.push_back(std::move(stage));
    earliest += 3600;
  }
  return inst;
}

void BM_SolveByWindow(benchmark::State& state) {
  const auto budget = static_cast<Seconds>(state.range(0));
  const DpInstance inst = dense_instance(6, budget, 1);
  std::size_t n_tilde = 0;
  for (auto _ : state) {
    const SolveResult r = solve(inst);
    n_tilde = solve_stats(r).n_tilde;
    benchmark::DoNotOptimize(r.value);
  }
  state.counters["n_tilde"] = static_cast<double>(n_tilde);
}
BENCHMARK(BM_SolveByWindow)->Arg(100)->Arg(300)->Arg(700)->Arg(1318)->Unit(benchmark::kMillisecond);

void BM_SolveByStages(benchmark::State& state) {
  const DpInstance inst = dense_instance(static_cast<int>(state.range(0)), 600, 5);
  for (auto _ : state) benchmark::DoNotOptimize(solve(inst).value);
}
BENCHMARK(BM_SolveByStages)->DenseRange(1, 8)->Unit(benchmark::kMicrosecond);

void BM_SolveScanVsCache(benchmark::State& state) {
  const DpInstance inst = dense_instance(4, 900, 3);
  SolveOptions opts;
  opts.departure_cache = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(solve(inst, opts).value);
}
BENCHMARK(BM_SolveScanVsCache)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_BruteForce(benchmark::State& state) {
  const DpInstance inst = dense_instance(static_cast<int>(state.range(0)), 600, 60);
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_solve(inst).value);
  state.counters["schedules"] = static_cast<double>(enumeration_bound(inst));
}
BENCHMARK(BM_BruteForce)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);

}  // namespace
