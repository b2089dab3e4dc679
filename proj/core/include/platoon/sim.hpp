#pragma once

#include <compare>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <vector>

#include "platoon/coordination.hpp"
#include "platoon/dp_solver.hpp"
#include "platoon/scenario.hpp"
#include "platoon/types.hpp"

namespace platoon {

struct SimEvent {
  enum class Kind { ArriveHub = 0, DepartHub = 1 };

  Seconds time = 0;
  TruckId truck = 0;
  Kind kind = Kind::ArriveHub;
  std::size_t hub_index = 0;

  friend auto operator<=>(const SimEvent&, const SimEvent&) = default;
};

// Min-queue popping by (time, truck id, kind).
class EventQueue {
 public:
  void push(const SimEvent& e) { heap_.push(e); }
  SimEvent pop();
  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }

 private:
  std::priority_queue<SimEvent, std::vector<SimEvent>, std::greater<>> heap_;
};

// Trucks leaving the same hub at the same second onto the same edge.
struct PlatoonRecord {
  EdgeKey edge;
  Seconds departure_time = 0;
  std::vector<TruckId> members;  // ascending

  std::size_t size() const { return members.size(); }
  friend bool operator==(const PlatoonRecord&, const PlatoonRecord&) = default;
};

// One realised edge traversal.
struct Traversal {
  TruckId truck = 0;
  FleetId fleet = 0;
  std::size_t edge_index = 0;
  EdgeKey edge;
  Seconds departure_time = 0;
  Seconds travel_time = 0;
};

struct MetricsReport {
  std::size_t truck_count = 0;
  // Platooning profit minus waiting loss per fleet; every fleet present.
  std::map<FleetId, double> fleet_reward;
  double total_reward = 0.0;
  double total_platooning_profit = 0.0;
  double total_waiting_loss = 0.0;
  // Follower fuel reduction applied to the share of follower travel time;
  // CO2 reduction equals this fraction under the linear emission model.
  double fuel_saving = 0.0;
  double system_platooning_rate = 0.0;
  // Only edges that were used at least once.
  std::map<EdgeKey, double> edge_platooning_rate;
  std::map<HubId, double> hub_formation_rate;
  std::map<HubId, double> hub_mean_wait_s;
  std::map<std::size_t, std::size_t> platoon_size_histogram;
  std::size_t platoon_count = 0;
  double mean_wait_s = 0.0;
  std::size_t deadlines_met = 0;

  // Wall-clock solve time per decision. Excluded from equality because it
  // is the only non-deterministic field.
  std::vector<double> solver_wall_seconds;

  friend bool operator==(const MetricsReport& a, const MetricsReport& b);
};

struct SimulationResult {
  SchemeKind scheme = SchemeKind::PredictiveMultiFleet;
  MetricsReport metrics;
  // Single-fleet runs never group trucks of different fleets.
  std::vector<PlatoonRecord> platoons;
  std::vector<DecisionEvent> decisions;
  // Destination arrival per truck.
  std::map<TruckId, Seconds> final_arrivals;
};

struct SimOptions {
  // Called after every decision with the instance that was solved.
  std::function<void(const DpInstance&, const SolveResult&, const DecisionEvent&)> on_decision;
};

SimulationResult run_simulation(const Scenario& scenario, SchemeKind scheme,
                                const SimOptions& options = {});

// Traversals implied by the committed waits; ordered by (truck, edge index).
std::vector<Traversal> realized_traversals(std::span<const DecisionEvent> decisions,
                                           const Scenario& scenario);

// Groups traversals by (edge, departure second), and additionally by fleet
// when fleets may not platoon together. Only groups of two or more become
// platoons. Ordered by (departure, edge, first member).
std::vector<PlatoonRecord> group_platoons(std::span<const Traversal> traversals,
                                          bool split_by_fleet = false);

std::map<FleetId, double> realized_fleet_reward(std::span<const PlatoonRecord> platoons,
                                                std::span<const DecisionEvent> decisions,
                                                const Scenario& scenario);

double fuel_saving_fraction(std::span<const PlatoonRecord> platoons, const Scenario& scenario);

// Follower traversals over all traversals of the edge; nullopt when no
// truck uses it.
std::optional<double> platooning_rate(std::span<const PlatoonRecord> platoons,
                                      const Scenario& scenario, const EdgeKey& edge);

// Share of all trucks that leave `hub` with at least one partner they did
// not arrive with.
double formation_rate(std::span<const DecisionEvent> decisions,
                      std::span<const PlatoonRecord> platoons, const Scenario& scenario, HubId hub);

MetricsReport compute_metrics(const Scenario& scenario, std::span<const PlatoonRecord> platoons,
                              std::span<const DecisionEvent> decisions);

struct SchemeComparison {
  std::vector<SimulationResult> runs;  // one per scheme, in kAllSchemes order

  const SimulationResult& run(SchemeKind scheme) const;
};

// Runs all three schemes on the same scenario, at most `max_threads` at a
// time (0 = one thread per scheme).
SchemeComparison compare_schemes(const Scenario& scenario, unsigned max_threads = 0);

}  // namespace platoon
