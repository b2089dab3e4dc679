#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "platoon/coordination.hpp"
#include "platoon/scenario.hpp"
#include "platoon/serialization.hpp"
#include "platoon/sim.hpp"

namespace platoon::cli {

struct GenerateOptions {
  std::optional<std::string> preset;
  std::optional<std::filesystem::path> config;
  std::optional<std::uint64_t> seed;
  std::optional<int> trucks;
  std::optional<int> hubs;
  std::optional<std::string> fleets;
  std::filesystem::path output;
};

struct GenerateSummary {
  std::size_t hubs = 0;
  std::size_t segments = 0;
  std::size_t trucks = 0;
  std::size_t fleets = 0;
  double mean_route_hubs = 0.0;
  double mean_route_hours = 0.0;
};

// Preset, then config file, then explicit flags.
ScenarioConfig resolve_config(const GenerateOptions& options);
GenerateSummary summarize(const Scenario& scenario);
GenerateSummary cmd_generate(const GenerateOptions& options);

Scenario load_scenario(const std::filesystem::path& path);

struct RunOptions {
  std::filesystem::path scenario;
  SchemeKind scheme = SchemeKind::PredictiveMultiFleet;
  std::filesystem::path out_dir;
  std::optional<std::filesystem::path> metrics_path;
  std::optional<std::filesystem::path> platoons_path;
  std::optional<std::filesystem::path> decisions_path;
};

SimulationResult cmd_run(const RunOptions& options);

struct CompareOptions {
  std::filesystem::path scenario;
  std::filesystem::path out_dir;
  std::optional<std::filesystem::path> csv_path;
  // 0 = one thread per scheme.
  unsigned threads = 0;
};

SchemeComparison cmd_compare(const CompareOptions& options);

struct BenchOptions {
  std::filesystem::path scenario;
  std::size_t samples = 10;
  std::uint64_t guard = BruteForceOptions{}.guard;
  // Written to stdout when empty.
  std::optional<std::filesystem::path> output;
};

std::vector<BenchRow> cmd_bench(const BenchOptions& options);

// PLATOON_THREADS, or 0 when unset/invalid.
unsigned threads_from_env();

}  // namespace platoon::cli
