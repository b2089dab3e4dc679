#pragma once

#include <span>
#include <vector>

#include "platoon/network.hpp"
#include "platoon/types.hpp"

namespace platoon {

struct EconomicParams {
  // Monetary platooning benefit per following truck per hour (xi).
  double platoon_benefit_rate = 5.6;
  // Fuel reduction of a following truck.
  double fuel_saving_fraction = 0.10;
  // Default waiting loss per truck per hour (epsilon).
  double default_waiting_loss_rate = 25.0;

  friend bool operator==(const EconomicParams&, const EconomicParams&) = default;
};

void validate(const EconomicParams& econ);

struct Truck {
  TruckId id = 0;
  FleetId fleet = 0;
  Route route;
  Seconds start_time = 0;
  Seconds deadline = 0;
  double waiting_loss_rate = 25.0;

  Seconds waiting_budget() const { return deadline - start_time - route.total_travel_time(); }

  friend bool operator==(const Truck&, const Truck&) = default;
};

// Throws InfeasibleError if the no-wait trip misses the deadline and
// InvalidArgument for a negative loss rate.
void validate(const Truck& truck);

// Another truck's predicted departure from the hub where a shared edge starts.
struct PartnerPrediction {
  TruckId truck = 0;
  FleetId fleet = 0;
  Seconds predicted_departure = 0;

  friend bool operator==(const PartnerPrediction&, const PartnerPrediction&) = default;
};

// Matched partners split by fleet membership.
struct PartnerCounts {
  int same_fleet = 0;
  int other_fleet = 0;

  int total() const { return same_fleet + other_fleet; }
  friend bool operator==(const PartnerCounts&, const PartnerCounts&) = default;
};

// Trucks other than `truck` whose route contains its k-th edge (0-based).
std::vector<TruckId> potential_partners(const Truck& truck, std::size_t k,
                                        std::span<const Truck> all_trucks);

// Candidates whose predicted departure equals arrival + wait exactly.
std::vector<TruckId> predicted_partners(Seconds arrival, Seconds wait,
                                        std::span<const PartnerPrediction> candidates);

PartnerCounts count_partners(Seconds departure, FleetId own_fleet,
                             std::span<const PartnerPrediction> candidates);

// Normalised gain in fleet platooning profit when joining the matched
// partners: 1 - p_other / ((n + 1) n) with n = p_same + p_other, or 0 when
// no partner is matched.
double delta_f(PartnerCounts counts, bool partner_set_empty);

// Currency gained by the fleet on one edge from the joining decision.
double stage_reward(Seconds edge_travel_time, PartnerCounts counts, bool partner_set_empty,
                    const EconomicParams& econ);

// Non-positive waiting loss accrued over the remaining trip.
double terminal_reward(Seconds arrival_at_destination, Seconds arrival_at_current,
                       Seconds remaining_travel, double waiting_loss_rate);

// Per-member share of the profit of an n-truck platoon on one edge.
double average_platoon_profit(int platoon_size, Seconds edge_travel_time,
                              const EconomicParams& econ);

}  // namespace platoon
