#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "platoon/network.hpp"
#include "platoon/reward.hpp"
#include "platoon/types.hpp"

namespace platoon {

// Origin-destination truck flows between hubs; diagonal is zero.
class FlowMatrix {
 public:
  explicit FlowMatrix(std::size_t hub_count) : n_(hub_count), flow_(hub_count * hub_count, 0.0) {}

  std::size_t hub_count() const { return n_; }
  double at(HubId from, HubId to) const { return flow_[index(from, to)]; }
  void set(HubId from, HubId to, double value);
  double total() const;
  // P(i, j) = F(i, j) / sum F.
  double probability(HubId from, HubId to) const { return at(from, to) / total(); }

 private:
  std::size_t index(HubId from, HubId to) const;

  std::size_t n_;
  std::vector<double> flow_;
};

// Gravity-style flows F(i,j) ~ m_i m_j / (1 + d_ij / mean_d) with seeded
// hub masses.
FlowMatrix gravity_flow(const RoadNetwork& network, std::uint64_t seed);

struct FleetBucket {
  int trucks_per_fleet = 1;
  int fleet_count = 1;

  friend bool operator==(const FleetBucket&, const FleetBucket&) = default;
};

struct FleetDistribution {
  std::vector<FleetBucket> buckets;

  long long truck_total() const;
  long long fleet_total() const;

  // The 5000-truck, 855-fleet assignment from Swedish carrier data.
  static FleetDistribution carrier_table();

  // The carrier table rescaled to `truck_count`: each bucket keeps its share of
  // trucks (rounded to whole fleets); the residual becomes single-truck
  // fleets, or is removed from the smallest fleets when negative.
  static FleetDistribution carrier_proportioned(int truck_count);

  // Every truck its own fleet.
  static FleetDistribution singletons(int truck_count);

  friend bool operator==(const FleetDistribution&, const FleetDistribution&) = default;
};

// (origin, destination) pairs drawn independently with probability P(i,j).
std::vector<std::pair<HubId, HubId>> sample_missions(const RoadNetwork& network,
                                                     const FlowMatrix& flow, int count,
                                                     std::uint64_t seed);

// Fleet id per truck. Fleets are numbered in bucket order; the truck-to-slot
// assignment is a seeded permutation.
std::vector<FleetId> assign_fleets(int truck_count, const FleetDistribution& dist,
                                   std::uint64_t seed);

struct ScenarioConfig {
  int hub_count = 105;
  int truck_count = 5000;
  // Empty means the carrier table scaled to truck_count.
  FleetDistribution fleets;
  std::string fleet_preset = "paper";
  Seconds window_start = 8 * 3600;
  Seconds window_end = 9 * 3600;
  double waiting_budget_fraction = 0.10;
  double speed_kmh = 80.0;
  EconomicParams economics;
  std::uint64_t seed = 1;

  // The full-scale simulation setup.
  static ScenarioConfig full_scale();

  // Resolves fleet_preset/fleets into explicit buckets for truck_count.
  FleetDistribution resolved_fleets() const;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

// Throws InvalidArgument on non-positive counts/speeds or an empty window.
void validate(const ScenarioConfig& config);

struct Scenario {
  RoadNetwork network;
  std::vector<Truck> trucks;
  EconomicParams economics;
  std::uint64_t rng_seed = 0;

  std::size_t fleet_count() const;
  const Truck& truck(TruckId id) const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

// Unique ids, routes that exist in the network, feasible deadlines.
void validate(const Scenario& scenario);

// Deadline = start + travel + round(travel * waiting_budget_fraction).
Seconds deadline_for(Seconds start_time, Seconds total_travel, double waiting_budget_fraction);

Scenario make_scenario(const ScenarioConfig& config);

}  // namespace platoon
