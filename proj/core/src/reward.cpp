#include "platoon/reward.hpp"

#include <string>

#include "platoon/errors.hpp"

namespace platoon {

void validate(const EconomicParams& econ) {
  if (econ.platoon_benefit_rate < 0 || econ.fuel_saving_fraction < 0 ||
      econ.default_waiting_loss_rate < 0) {
    throw InvalidArgument("economic parameters must be non-negative");
  }
}

void validate(const Truck& truck) {
  if (truck.waiting_loss_rate < 0) {
    throw InvalidArgument("truck " + std::to_string(truck.id) + ": negative waiting loss rate");
  }
  if (truck.route.edge_count() == 0) {
    throw InvalidArgument("truck " + std::to_string(truck.id) + ": empty route");
  }
  if (truck.waiting_budget() < 0) {
    throw InfeasibleError("truck " + std::to_string(truck.id) +
                          ": deadline earlier than the no-wait arrival");
  }
}

std::vector<TruckId> potential_partners(const Truck& truck, std::size_t k,
                                        std::span<const Truck> all_trucks) {
  if (k >= truck.route.edge_count()) {
    throw InvalidArgument("stage " + std::to_string(k) + " outside route of truck " +
                          std::to_string(truck.id));
  }
  const EdgeKey edge = key_of(truck.route.edge(k));
  std::vector<TruckId> out;
  for (const auto& other : all_trucks) {
    if (other.id == truck.id) continue;
    if (other.route.find_edge(edge)) out.push_back(other.id);
  }
  return out;
}

std::vector<TruckId> predicted_partners(Seconds arrival, Seconds wait,
                                        std::span<const PartnerPrediction> candidates) {
  if (wait < 0) throw InvalidArgument("wait must be non-negative");
  std::vector<TruckId> out;
  const Seconds departure = arrival + wait;
  for (const auto& c : candidates) {
    if (c.predicted_departure == departure) out.push_back(c.truck);
  }
  return out;
}

PartnerCounts count_partners(Seconds departure, FleetId own_fleet,
                             std::span<const PartnerPrediction> candidates) {
  PartnerCounts counts;
  for (const auto& c : candidates) {
    if (c.predicted_departure != departure) continue;
    if (c.fleet == own_fleet) {
      ++counts.same_fleet;
    } else {
      ++counts.other_fleet;
    }
  }
  return counts;
}

double delta_f(PartnerCounts counts, bool partner_set_empty) {
  if (counts.same_fleet < 0 || counts.other_fleet < 0) {
    throw InvalidArgument("partner counts must be non-negative");
  }
  if (partner_set_empty) {
    if (counts.total() != 0) throw InternalError("empty partner set with nonzero counts");
    return 0.0;
  }
  const int n = counts.total();
  if (n == 0) throw InternalError("nonempty partner set with zero counts");
  const double nd = static_cast<double>(n);
  return 1.0 - static_cast<double>(counts.other_fleet) / ((nd + 1.0) * nd);
}

double stage_reward(Seconds edge_travel_time, PartnerCounts counts, bool partner_set_empty,
                    const EconomicParams& econ) {
  if (edge_travel_time <= 0) throw InvalidArgument("edge travel time must be positive");
  if (partner_set_empty) return 0.0;
  return econ.platoon_benefit_rate * to_hours(edge_travel_time) *
         delta_f(counts, partner_set_empty);
}

double terminal_reward(Seconds arrival_at_destination, Seconds arrival_at_current,
                       Seconds remaining_travel, double waiting_loss_rate) {
  const Seconds waited = arrival_at_destination - arrival_at_current - remaining_travel;
  if (waited < 0) {
    throw InfeasibleError("destination arrival earlier than the no-wait arrival");
  }
  if (waited == 0) return 0.0;
  return -waiting_loss_rate * to_hours(waited);
}

double average_platoon_profit(int platoon_size, Seconds edge_travel_time,
                              const EconomicParams& econ) {
  if (platoon_size < 1) throw InvalidArgument("platoon size must be at least 1");
  const double n = static_cast<double>(platoon_size);
  return econ.platoon_benefit_rate * to_hours(edge_travel_time) * (n - 1.0) / n;
}

}  // namespace platoon
