#include "platoon/coordination.hpp"

#include <algorithm>
#include <string>

#include "platoon/errors.hpp"

namespace platoon {

std::string_view to_string(SchemeKind scheme) {
  switch (scheme) {
    case SchemeKind::PredictiveMultiFleet:
      return "predictive";
    case SchemeKind::SpontaneousMultiFleet:
      return "spontaneous";
    case SchemeKind::SingleFleet:
      return "single-fleet";
  }
  return "unknown";
}

SchemeKind parse_scheme(std::string_view name) {
  for (SchemeKind s : kAllSchemes) {
    if (to_string(s) == name) return s;
  }
  throw InvalidArgument("unknown scheme '" + std::string(name) +
                        "'; expected one of: predictive, spontaneous, single-fleet");
}

void HubBoard::initialize(const Truck& truck) {
  if (contains(truck.id)) {
    throw InvalidStateError("truck " + std::to_string(truck.id) + " is already registered");
  }
  validate(truck);
  BoardEntry entry;
  entry.truck = truck.id;
  entry.fleet = truck.fleet;
  entry.route = truck.route;
  const std::size_t edges = truck.route.edge_count();
  entry.arrivals.resize(edges + 1);
  entry.departures.resize(edges);
  entry.arrivals[0] = truck.start_time;
  for (std::size_t k = 0; k < edges; ++k) {
    entry.departures[k] = entry.arrivals[k];
    entry.arrivals[k + 1] = entry.departures[k] + truck.route.edge(k).travel_time;
  }
  for (std::size_t k = 0; k < edges; ++k) {
    auto& users = edge_users_[key_of(truck.route.edge(k))];
    EdgeUser user{truck.id, k};
    auto at = std::lower_bound(users.begin(), users.end(), user,
                               [](const EdgeUser& a, const EdgeUser& b) { return a.truck < b.truck; });
    users.insert(at, user);
  }
  entries_.emplace(truck.id, std::move(entry));
}

const BoardEntry& HubBoard::entry(TruckId truck) const {
  auto it = entries_.find(truck);
  if (it == entries_.end()) throw InvalidStateError("truck " + std::to_string(truck) + " is not registered");
  return it->second;
}

BoardEntry& HubBoard::mutable_entry(TruckId truck) {
  auto it = entries_.find(truck);
  if (it == entries_.end()) throw InvalidStateError("truck " + std::to_string(truck) + " is not registered");
  return it->second;
}

const std::vector<HubBoard::EdgeUser>& HubBoard::users_of(const EdgeKey& edge) const {
  static const std::vector<EdgeUser> kNone;
  auto it = edge_users_.find(edge);
  return it == edge_users_.end() ? kNone : it->second;
}

bool HubBoard::present_at(TruckId truck, std::size_t hub_index, Seconds time) const {
  const BoardEntry& e = entry(truck);
  if (e.hubs_reached <= hub_index || e.arrivals[hub_index] > time) return false;
  if (hub_index >= e.departures.size()) return true;  // parked at destination
  return e.departures[hub_index] >= time;
}

void HubBoard::record_arrival(TruckId truck, std::size_t hub_index, Seconds time) {
  BoardEntry& e = mutable_entry(truck);
  // Recording the same arrival twice is harmless.
  if (hub_index + 1 == e.hubs_reached && e.arrivals[hub_index] == time &&
      e.position.kind != TruckPosition::Kind::InTransit) {
    return;
  }
  if (hub_index != e.hubs_reached) {
    throw InvalidStateError("truck " + std::to_string(truck) + " arrives at hub index " +
                            std::to_string(hub_index) + " but has reached " +
                            std::to_string(e.hubs_reached) + " hubs");
  }
  if (hub_index > 0 && time < e.departures[hub_index - 1] + e.route.edge(hub_index - 1).travel_time) {
    throw InvalidStateError("arrival earlier than the travel time from the previous hub allows");
  }
  e.hubs_reached = hub_index + 1;
  if (e.arrivals[hub_index] != time) {
    // Keep the planned waits and shift the rest of the chain.
    std::vector<Seconds> waits;
    for (std::size_t m = hub_index; m < e.departures.size(); ++m) {
      waits.push_back(e.departures[m] - e.arrivals[m]);
    }
    e.arrivals[hub_index] = time;
    for (std::size_t m = hub_index; m < e.departures.size(); ++m) {
      e.departures[m] = e.arrivals[m] + waits[m - hub_index];
      e.arrivals[m + 1] = e.departures[m] + e.route.edge(m).travel_time;
    }
  }
  e.position = hub_index + 1 == e.route.hub_count()
                   ? TruckPosition{TruckPosition::Kind::Finished, hub_index}
                   : TruckPosition{TruckPosition::Kind::AtHub, hub_index};
}

void HubBoard::commit_schedule(TruckId truck, std::size_t hub_index, std::span<const Seconds> waits) {
  BoardEntry& e = mutable_entry(truck);
  if (hub_index >= e.departures.size() || waits.size() != e.departures.size() - hub_index) {
    throw InvalidArgument("schedule does not cover the remaining route of truck " +
                          std::to_string(truck));
  }
  for (std::size_t m = hub_index; m < e.departures.size(); ++m) {
    const Seconds w = waits[m - hub_index];
    if (w < 0) throw InvalidArgument("negative wait in committed schedule");
    e.departures[m] = e.arrivals[m] + w;
    e.arrivals[m + 1] = e.departures[m] + e.route.edge(m).travel_time;
  }
}

void HubBoard::record_departure(TruckId truck, std::size_t hub_index) {
  BoardEntry& e = mutable_entry(truck);
  if (e.position != TruckPosition{TruckPosition::Kind::AtHub, hub_index}) {
    throw InvalidStateError("truck " + std::to_string(truck) + " departs a hub it is not at");
  }
  e.position = {TruckPosition::Kind::InTransit, hub_index};
}

void board_initialize(HubBoard& board, const Truck& truck) { board.initialize(truck); }

DpInstance build_instance(const HubBoard& board, const Truck& truck, std::size_t hub_index,
                          Seconds arrival, SchemeKind scheme, const EconomicParams& econ) {
  const BoardEntry& self = board.entry(truck.id);
  if (self.position != TruckPosition{TruckPosition::Kind::AtHub, hub_index}) {
    throw InvalidStateError("truck " + std::to_string(truck.id) + " is not at its hub index " +
                            std::to_string(hub_index));
  }
  DpInstance instance;
  instance.arrival = arrival;
  instance.deadline = truck.deadline;
  instance.own_fleet = truck.fleet;
  instance.econ = econ;
  instance.waiting_loss_rate = truck.waiting_loss_rate;

  for (std::size_t m = hub_index; m < truck.route.edge_count(); ++m) {
    const RoadSegment& edge = truck.route.edge(m);
    DpStage stage;
    stage.travel_time = edge.travel_time;
    // Spontaneous coordination only sees what is announced for this hub.
    const bool visible = scheme != SchemeKind::SpontaneousMultiFleet || m == hub_index;
    if (visible) {
      for (const auto& user : board.users_of(key_of(edge))) {
        if (user.truck == truck.id) continue;
        const BoardEntry& other = board.entry(user.truck);
        if (scheme == SchemeKind::SingleFleet && other.fleet != truck.fleet) continue;
        stage.partners.push_back({user.truck, other.fleet, other.departures[user.edge_index]});
      }
    }
    instance.stages.push_back(std::move(stage));
  }
  return instance;
}

DecisionEvent on_arrival(HubBoard& board, const Truck& truck, std::size_t hub_index,
                         Seconds arrival, SchemeKind scheme, const EconomicParams& econ,
                         SolveResult* solved, DpInstance* instance_out) {
  if (hub_index >= truck.route.edge_count()) {
    throw InvalidArgument("hub index " + std::to_string(hub_index) +
                          " has no outgoing edge on the route of truck " + std::to_string(truck.id));
  }
  board.record_arrival(truck.id, hub_index, arrival);
  DpInstance instance = build_instance(board, truck, hub_index, arrival, scheme, econ);
  SolveResult result = solve(instance);
  board.commit_schedule(truck.id, hub_index, result.waits);

  DecisionEvent event;
  event.truck = truck.id;
  event.hub_index = hub_index;
  event.hub = truck.route.edge(hub_index).from;
  event.time = arrival;
  event.committed_wait = result.waits.front();
  event.predicted_remaining_waits.assign(result.waits.begin() + 1, result.waits.end());
  event.partners_matched =
      predicted_partners(arrival, event.committed_wait, instance.stages.front().partners);
  std::sort(event.partners_matched.begin(), event.partners_matched.end());
  event.solve_seconds = result.stats.wall_seconds;
  event.n_tilde = solve_stats(result).n_tilde;
  if (solved != nullptr) *solved = std::move(result);
  if (instance_out != nullptr) *instance_out = std::move(instance);
  return event;
}

}  // namespace platoon
