#include "platoon/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <numeric>
#include <set>
#include <string>

#include "platoon/errors.hpp"
#include "platoon/rng.hpp"

namespace platoon {

namespace {

// Substream tags keep each generation stage independent of the others.
constexpr std::uint64_t kFlowStream = 0x666c6f77;
constexpr std::uint64_t kMissionStream = 0x6d697373;
constexpr std::uint64_t kFleetStream = 0x666c6565;
constexpr std::uint64_t kStartStream = 0x73746172;

}  // namespace

std::size_t FlowMatrix::index(HubId from, HubId to) const {
  if (from < 0 || to < 0 || static_cast<std::size_t>(from) >= n_ ||
      static_cast<std::size_t>(to) >= n_) {
    throw InvalidArgument("flow index out of range");
  }
  return static_cast<std::size_t>(from) * n_ + static_cast<std::size_t>(to);
}

void FlowMatrix::set(HubId from, HubId to, double value) {
  if (value < 0 || !std::isfinite(value)) throw InvalidArgument("flow must be finite and non-negative");
  if (from == to && value != 0) throw InvalidArgument("flow diagonal must be zero");
  flow_[index(from, to)] = value;
}

double FlowMatrix::total() const { return std::accumulate(flow_.begin(), flow_.end(), 0.0); }

FlowMatrix gravity_flow(const RoadNetwork& network, std::uint64_t seed) {
  const std::size_t n = network.hub_count();
  FlowMatrix flow(n);
  Rng rng = Rng::substream(seed, kFlowStream);
  std::vector<double> mass(n);
  for (auto& m : mass) m = 0.5 + rng.uniform01();

  double mean_d = 0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      mean_d += distance_km(network.hubs()[i].position, network.hubs()[j].position);
      ++pairs;
    }
  }
  mean_d = pairs > 0 ? mean_d / static_cast<double>(pairs) : 1.0;
  if (mean_d <= 0) mean_d = 1.0;

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double d = distance_km(network.hubs()[i].position, network.hubs()[j].position);
      flow.set(static_cast<HubId>(i), static_cast<HubId>(j), mass[i] * mass[j] / (1.0 + d / mean_d));
    }
  }
  return flow;
}

long long FleetDistribution::truck_total() const {
  long long total = 0;
  for (const auto& b : buckets) total += static_cast<long long>(b.trucks_per_fleet) * b.fleet_count;
  return total;
}

long long FleetDistribution::fleet_total() const {
  long long total = 0;
  for (const auto& b : buckets) total += b.fleet_count;
  return total;
}

FleetDistribution FleetDistribution::carrier_table() {
  return FleetDistribution{{{1, 325},
                            {3, 362},
                            {7, 80},
                            {15, 49},
                            {34, 27},
                            {74, 8},
                            {148, 3},
                            {340, 1}}};
}

FleetDistribution FleetDistribution::carrier_proportioned(int truck_count) {
  if (truck_count <= 0) throw InvalidArgument("truck_count must be positive");
  const FleetDistribution table = carrier_table();
  const double scale = static_cast<double>(truck_count) / static_cast<double>(table.truck_total());

  std::map<int, long long> count_by_size;
  long long assigned = 0;
  for (const auto& b : table.buckets) {
    const double share = static_cast<double>(b.trucks_per_fleet) * b.fleet_count * scale;
    const auto fleets = static_cast<long long>(std::floor(share / b.trucks_per_fleet + 0.5));
    if (fleets > 0) {
      count_by_size[b.trucks_per_fleet] += fleets;
      assigned += fleets * b.trucks_per_fleet;
    }
  }
  long long residual = truck_count - assigned;
  // Drop fleets starting from the smallest size until the remainder is
  // non-negative, then fill with single-truck fleets.
  for (auto it = count_by_size.begin(); residual < 0 && it != count_by_size.end(); ++it) {
    while (residual < 0 && it->second > 0) {
      --it->second;
      residual += it->first;
    }
  }
  count_by_size[1] += residual;

  FleetDistribution out;
  for (const auto& [size, count] : count_by_size) {
    if (count > 0) out.buckets.push_back({size, static_cast<int>(count)});
  }
  return out;
}

FleetDistribution FleetDistribution::singletons(int truck_count) {
  if (truck_count <= 0) throw InvalidArgument("truck_count must be positive");
  return FleetDistribution{{{1, truck_count}}};
}

std::vector<std::pair<HubId, HubId>> sample_missions(const RoadNetwork& network,
                                                     const FlowMatrix& flow, int count,
                                                     std::uint64_t seed) {
  if (flow.hub_count() != network.hub_count()) {
    throw InvalidArgument("flow matrix size does not match the network");
  }
  if (count < 0) throw InvalidArgument("mission count must be non-negative");
  const std::size_t n = flow.hub_count();
  std::vector<double> cumulative;
  std::vector<std::pair<HubId, HubId>> pairs;
  double running = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double f = flow.at(static_cast<HubId>(i), static_cast<HubId>(j));
      if (f <= 0) continue;
      running += f;
      cumulative.push_back(running);
      pairs.emplace_back(static_cast<HubId>(i), static_cast<HubId>(j));
    }
  }
  if (pairs.empty()) throw InvalidArgument("flow matrix has no positive entry");

  Rng rng = Rng::substream(seed, kMissionStream);
  std::vector<std::pair<HubId, HubId>> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int c = 0; c < count; ++c) {
    const double u = rng.uniform01() * running;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    out.push_back(pairs[static_cast<std::size_t>(it - cumulative.begin())]);
  }
  return out;
}

std::vector<FleetId> assign_fleets(int truck_count, const FleetDistribution& dist,
                                   std::uint64_t seed) {
  if (truck_count <= 0) throw InvalidArgument("truck_count must be positive");
  for (const auto& b : dist.buckets) {
    if (b.trucks_per_fleet <= 0 || b.fleet_count <= 0) {
      throw InvalidArgument("fleet buckets must have positive sizes and counts");
    }
  }
  const long long residual = truck_count - dist.truck_total();
  if (residual != 0) {
    throw InvalidArgument("fleet distribution holds " + std::to_string(dist.truck_total()) +
                          " trucks but " + std::to_string(truck_count) +
                          " were requested (residual " + std::to_string(residual) + ")");
  }
  std::vector<FleetId> slots;
  slots.reserve(static_cast<std::size_t>(truck_count));
  FleetId fleet = 0;
  for (const auto& b : dist.buckets) {
    for (int f = 0; f < b.fleet_count; ++f, ++fleet) {
      slots.insert(slots.end(), static_cast<std::size_t>(b.trucks_per_fleet), fleet);
    }
  }
  Rng rng = Rng::substream(seed, kFleetStream);
  rng.shuffle(std::span<FleetId>(slots));
  return slots;
}

ScenarioConfig ScenarioConfig::full_scale() { return ScenarioConfig{}; }

FleetDistribution ScenarioConfig::resolved_fleets() const {
  if (!fleets.buckets.empty()) return fleets;
  if (fleet_preset == "paper") {
    if (truck_count == FleetDistribution::carrier_table().truck_total()) {
      return FleetDistribution::carrier_table();
    }
    return FleetDistribution::carrier_proportioned(truck_count);
  }
  if (fleet_preset == "singletons") return FleetDistribution::singletons(truck_count);
  if (fleet_preset == "one-fleet") return FleetDistribution{{{truck_count, 1}}};
  throw InvalidArgument("unknown fleet preset '" + fleet_preset +
                        "' (expected paper, singletons or one-fleet)");
}

void validate(const ScenarioConfig& config) {
  if (config.hub_count < 2) throw InvalidArgument("hub_count must be at least 2");
  if (config.truck_count < 0) throw InvalidArgument("truck_count must be non-negative");
  if (config.window_start < 0 || config.window_end <= config.window_start) {
    throw InvalidArgument("start window must satisfy 0 <= start < end");
  }
  if (!(config.waiting_budget_fraction >= 0)) {
    throw InvalidArgument("waiting budget fraction must be non-negative");
  }
  if (!(config.speed_kmh > 0)) throw InvalidArgument("speed must be positive");
  validate(config.economics);
}

std::size_t Scenario::fleet_count() const {
  std::set<FleetId> fleets;
  for (const auto& t : trucks) fleets.insert(t.fleet);
  return fleets.size();
}

const Truck& Scenario::truck(TruckId id) const {
  auto it = std::find_if(trucks.begin(), trucks.end(), [id](const Truck& t) { return t.id == id; });
  if (it == trucks.end()) throw InvalidArgument("unknown truck " + std::to_string(id));
  return *it;
}

void validate(const Scenario& scenario) {
  validate(scenario.economics);
  std::set<TruckId> ids;
  for (const auto& t : scenario.trucks) {
    if (!ids.insert(t.id).second) throw InvalidArgument("duplicate truck id " + std::to_string(t.id));
    validate(t);
    for (const auto& e : t.route.edges()) {
      auto s = scenario.network.segment(e.from, e.to);
      if (!s || s->travel_time != e.travel_time) {
        throw InvalidArgument("truck " + std::to_string(t.id) + " uses segment " +
                              std::to_string(e.from) + "->" + std::to_string(e.to) +
                              " which is not in the network");
      }
    }
  }
}

Seconds deadline_for(Seconds start_time, Seconds total_travel, double waiting_budget_fraction) {
  if (waiting_budget_fraction < 0) throw InvalidArgument("waiting budget fraction must be non-negative");
  const auto budget = static_cast<Seconds>(
      std::floor(static_cast<double>(total_travel) * waiting_budget_fraction + 0.5));
  return start_time + total_travel + budget;
}

Scenario make_scenario(const ScenarioConfig& config) {
  validate(config);
  Scenario scenario;
  scenario.rng_seed = config.seed;
  scenario.economics = config.economics;
  scenario.network = build_synthetic_network(config.hub_count, config.seed, config.speed_kmh);
  if (config.truck_count == 0) return scenario;

  const FlowMatrix flow = gravity_flow(scenario.network, config.seed);
  const auto missions = sample_missions(scenario.network, flow, config.truck_count, config.seed);
  const auto fleets = assign_fleets(config.truck_count, config.resolved_fleets(), config.seed);

  std::map<HubId, std::unique_ptr<RoutesToDestination>> trees;
  Rng start_rng = Rng::substream(config.seed, kStartStream);
  scenario.trucks.reserve(missions.size());
  for (std::size_t i = 0; i < missions.size(); ++i) {
    const auto [origin, destination] = missions[i];
    auto& tree = trees[destination];
    if (!tree) tree = std::make_unique<RoutesToDestination>(scenario.network, destination);
    Truck truck;
    truck.id = static_cast<TruckId>(i);
    truck.fleet = fleets[i];
    truck.route = tree->route_from(origin);
    truck.start_time = start_rng.range(config.window_start, config.window_end);
    truck.deadline = deadline_for(truck.start_time, truck.route.total_travel_time(),
                                  config.waiting_budget_fraction);
    truck.waiting_loss_rate = config.economics.default_waiting_loss_rate;
    scenario.trucks.push_back(std::move(truck));
  }
  return scenario;
}

}  // namespace platoon
