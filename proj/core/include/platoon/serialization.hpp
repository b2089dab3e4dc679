#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "platoon/coordination.hpp"
#include "platoon/dp_solver.hpp"
#include "platoon/scenario.hpp"
#include "platoon/sim.hpp"

namespace platoon {

// All readers throw DataError on malformed or inconsistent input.

// Scenario document. When `config` is given it is embedded under "config"
// so the file can be fed back to `generate`.
std::string scenario_to_json(const Scenario& scenario, const ScenarioConfig* config = nullptr);
Scenario scenario_from_json(std::string_view text);
// True when the document carries a network (hubs/segments/trucks).
bool json_has_scenario(std::string_view text);
// The "config" block, or nullopt when absent.
std::optional<ScenarioConfig> config_from_json(std::string_view text);
std::string config_to_json(const ScenarioConfig& config);

std::string instance_to_json(const DpInstance& instance);
DpInstance instance_from_json(std::string_view text);

std::string board_to_json(const HubBoard& board);

// One JSON object per line: {t, truck, hub, wait_s, partners_matched}.
std::string decisions_to_jsonl(std::span<const DecisionEvent> decisions);

// edge_from,edge_to,depart_s,size,members (members separated by ';').
std::string platoons_to_csv(std::span<const PlatoonRecord> platoons);

std::string metrics_to_json(const MetricsReport& metrics);

// scheme,total_reward,fuel_saving,system_platooning_rate,n_platoons,mean_wait_s
std::string comparison_to_csv(const SchemeComparison& comparison);
// Reward ratios between the schemes.
std::string comparison_summary_json(const SchemeComparison& comparison);

struct BenchRow {
  std::size_t case_id = 0;
  std::size_t n_tilde = 0;
  std::size_t hub_count = 0;
  // nullopt when the enumeration guard tripped.
  std::optional<double> enum_seconds;
  double dp_seconds = 0.0;
  std::optional<bool> values_equal;
};

std::string bench_to_csv(std::span<const BenchRow> rows);

// Shortest decimal form that round-trips; used by every text writer.
std::string format_double(double value);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace platoon
