#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <string>

#include "platoon/dp_solver.hpp"
#include "platoon/errors.hpp"

namespace platoon::cli {

ScenarioConfig resolve_config(const GenerateOptions& options) {
  ScenarioConfig config;
  if (options.preset) {
    if (*options.preset != "paper") {
      throw InvalidArgument("unknown preset '" + *options.preset + "' (expected paper)");
    }
    config = ScenarioConfig::full_scale();
  }
  if (options.config) {
    auto from_file = config_from_json(read_text_file(*options.config));
    if (!from_file) throw DataError(options.config->string() + " has no config block");
    config = *from_file;
  }
  if (options.seed) config.seed = *options.seed;
  if (options.trucks) config.truck_count = *options.trucks;
  if (options.hubs) config.hub_count = *options.hubs;
  if (options.fleets) {
    config.fleet_preset = *options.fleets;
    config.fleets = {};
  }
  // Explicit buckets from a file only fit the truck count they were made for.
  if (!config.fleets.buckets.empty() && config.fleets.truck_total() != config.truck_count) {
    config.fleets = {};
  }
  validate(config);
  return config;
}

GenerateSummary summarize(const Scenario& scenario) {
  GenerateSummary s;
  s.hubs = scenario.network.hub_count();
  s.segments = scenario.network.segments().size();
  s.trucks = scenario.trucks.size();
  s.fleets = scenario.fleet_count();
  if (!scenario.trucks.empty()) {
    double hubs = 0.0;
    double hours = 0.0;
    for (const auto& t : scenario.trucks) {
      hubs += static_cast<double>(t.route.hub_count());
      hours += to_hours(t.route.total_travel_time());
    }
    s.mean_route_hubs = hubs / static_cast<double>(s.trucks);
    s.mean_route_hours = hours / static_cast<double>(s.trucks);
  }
  return s;
}

GenerateSummary cmd_generate(const GenerateOptions& options) {
  const ScenarioConfig config = resolve_config(options);
  const Scenario scenario = make_scenario(config);
  write_text_file(options.output, scenario_to_json(scenario, &config));
  return summarize(scenario);
}

Scenario load_scenario(const std::filesystem::path& path) {
  return scenario_from_json(read_text_file(path));
}

SimulationResult cmd_run(const RunOptions& options) {
  const Scenario scenario = load_scenario(options.scenario);
  SimulationResult result = run_simulation(scenario, options.scheme);
  write_text_file(options.metrics_path.value_or(options.out_dir / "metrics.json"),
                  metrics_to_json(result.metrics));
  write_text_file(options.platoons_path.value_or(options.out_dir / "platoons.csv"),
                  platoons_to_csv(result.platoons));
  write_text_file(options.decisions_path.value_or(options.out_dir / "decisions.jsonl"),
                  decisions_to_jsonl(result.decisions));
  return result;
}

SchemeComparison cmd_compare(const CompareOptions& options) {
  const Scenario scenario = load_scenario(options.scenario);
  SchemeComparison comparison = compare_schemes(scenario, options.threads);
  write_text_file(options.csv_path.value_or(options.out_dir / "compare.csv"),
                  comparison_to_csv(comparison));
  write_text_file(options.out_dir / "summary.json", comparison_summary_json(comparison));
  return comparison;
}

std::vector<BenchRow> cmd_bench(const BenchOptions& options) {
  const Scenario scenario = load_scenario(options.scenario);
  std::vector<BenchRow> rows;

  if (options.samples > 0) {
    std::size_t total = 0;
    for (const auto& t : scenario.trucks) total += t.route.edge_count();
    // Evenly spaced decisions over the whole run.
    std::vector<std::size_t> picks;
    for (std::size_t i = 0; i < options.samples && total > 0; ++i) {
      const std::size_t at = i * total / options.samples;
      if (picks.empty() || picks.back() != at) picks.push_back(at);
    }
    std::vector<DpInstance> sampled;
    std::size_t seen = 0;
    std::size_t next = 0;
    SimOptions sim;
    sim.on_decision = [&](const DpInstance& instance, const SolveResult&, const DecisionEvent&) {
      if (next < picks.size() && seen == picks[next]) {
        sampled.push_back(instance);
        ++next;
      }
      ++seen;
    };
    run_simulation(scenario, SchemeKind::PredictiveMultiFleet, sim);

    for (std::size_t i = 0; i < sampled.size(); ++i) {
      const DpInstance& instance = sampled[i];
      BenchRow row;
      row.case_id = i + 1;
      const auto started = std::chrono::steady_clock::now();
      const SolveResult dp = solve(instance);
      row.dp_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
      const ComplexitySummary summary = solve_stats(dp);
      row.n_tilde = summary.n_tilde;
      row.hub_count = summary.hub_count;
      try {
        const auto enum_started = std::chrono::steady_clock::now();
        const SolveResult brute = brute_force_solve(instance, {options.guard});
        row.enum_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - enum_started).count();
        row.values_equal = std::abs(brute.value - dp.value) <= 1e-9 && brute.waits == dp.waits;
      } catch (const ResourceLimitError&) {
        // Recorded as skipped.
      }
      rows.push_back(row);
    }
  }

  const std::string csv = bench_to_csv(rows);
  if (options.output) {
    write_text_file(*options.output, csv);
  } else {
    std::cout << csv;
  }
  return rows;
}

unsigned threads_from_env() {
  const char* raw = std::getenv("PLATOON_THREADS");
  if (raw == nullptr) return 0;
  char* end = nullptr;
  const long v = std::strtol(raw, &end, 10);
  if (end == raw || *end != '\0' || v <= 0) return 0;
  return static_cast<unsigned>(v);
}

}  // namespace platoon::cli
