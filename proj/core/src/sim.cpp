#include "platoon/sim.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <thread>
#include <tuple>

#include "platoon/errors.hpp"

namespace platoon {

SimEvent EventQueue::pop() {
  if (heap_.empty()) throw InvalidStateError("pop from empty event queue");
  SimEvent e = heap_.top();
  heap_.pop();
  return e;
}

bool operator==(const MetricsReport& a, const MetricsReport& b) {
  return a.truck_count == b.truck_count && a.fleet_reward == b.fleet_reward &&
         a.total_reward == b.total_reward && a.total_platooning_profit == b.total_platooning_profit &&
         a.total_waiting_loss == b.total_waiting_loss && a.fuel_saving == b.fuel_saving &&
         a.system_platooning_rate == b.system_platooning_rate &&
         a.edge_platooning_rate == b.edge_platooning_rate &&
         a.hub_formation_rate == b.hub_formation_rate && a.hub_mean_wait_s == b.hub_mean_wait_s &&
         a.platoon_size_histogram == b.platoon_size_histogram &&
         a.platoon_count == b.platoon_count && a.mean_wait_s == b.mean_wait_s &&
         a.deadlines_met == b.deadlines_met;
}

namespace {

std::map<TruckId, const Truck*> index_trucks(const Scenario& scenario) {
  std::map<TruckId, const Truck*> out;
  for (const auto& t : scenario.trucks) out.emplace(t.id, &t);
  return out;
}

using TraversalKey = std::pair<TruckId, std::size_t>;

// Platoon membership per (truck, edge index).
std::map<TraversalKey, const PlatoonRecord*> membership(std::span<const PlatoonRecord> platoons,
                                                        const std::map<TruckId, const Truck*>& trucks) {
  std::map<TraversalKey, const PlatoonRecord*> out;
  for (const auto& p : platoons) {
    for (TruckId id : p.members) {
      auto it = trucks.find(id);
      if (it == trucks.end()) throw InvalidArgument("platoon member " + std::to_string(id) + " unknown");
      auto k = it->second->route.find_edge(p.edge);
      if (!k) throw InvalidArgument("platoon edge not on route of truck " + std::to_string(id));
      out[{id, *k}] = &p;
    }
  }
  return out;
}

}  // namespace

std::vector<Traversal> realized_traversals(std::span<const DecisionEvent> decisions,
                                           const Scenario& scenario) {
  const auto trucks = index_trucks(scenario);
  std::vector<Traversal> out;
  out.reserve(decisions.size());
  for (const auto& d : decisions) {
    auto it = trucks.find(d.truck);
    if (it == trucks.end()) throw InvalidArgument("decision for unknown truck " + std::to_string(d.truck));
    const RoadSegment& edge = it->second->route.edge(d.hub_index);
    out.push_back({d.truck, it->second->fleet, d.hub_index, key_of(edge), d.time + d.committed_wait,
                   edge.travel_time});
  }
  std::sort(out.begin(), out.end(), [](const Traversal& a, const Traversal& b) {
    return std::tie(a.truck, a.edge_index) < std::tie(b.truck, b.edge_index);
  });
  return out;
}

std::vector<PlatoonRecord> group_platoons(std::span<const Traversal> traversals,
                                          bool split_by_fleet) {
  std::map<std::tuple<Seconds, EdgeKey, FleetId>, std::vector<TruckId>> groups;
  for (const auto& t : traversals) {
    groups[{t.departure_time, t.edge, split_by_fleet ? t.fleet : 0}].push_back(t.truck);
  }
  std::vector<PlatoonRecord> out;
  for (auto& [key, members] : groups) {
    if (members.size() < 2) continue;
    std::sort(members.begin(), members.end());
    out.push_back({std::get<1>(key), std::get<0>(key), std::move(members)});
  }
  std::sort(out.begin(), out.end(), [](const PlatoonRecord& a, const PlatoonRecord& b) {
    return std::tie(a.departure_time, a.edge, a.members.front()) <
           std::tie(b.departure_time, b.edge, b.members.front());
  });
  return out;
}

std::map<FleetId, double> realized_fleet_reward(std::span<const PlatoonRecord> platoons,
                                                std::span<const DecisionEvent> decisions,
                                                const Scenario& scenario) {
  const auto trucks = index_trucks(scenario);
  std::map<FleetId, double> reward;
  for (const auto& t : scenario.trucks) reward.emplace(t.fleet, 0.0);
  for (const auto& p : platoons) {
    auto seg = scenario.network.segment(p.edge.first, p.edge.second);
    if (!seg) throw InvalidArgument("platoon on unknown edge");
    const double share =
        average_platoon_profit(static_cast<int>(p.size()), seg->travel_time, scenario.economics);
    for (TruckId id : p.members) reward[trucks.at(id)->fleet] += share;
  }
  for (const auto& d : decisions) {
    if (d.committed_wait == 0) continue;
    const Truck& t = *trucks.at(d.truck);
    reward[t.fleet] -= t.waiting_loss_rate * to_hours(d.committed_wait);
  }
  return reward;
}

namespace {

Seconds total_travel(const Scenario& scenario) {
  Seconds total = 0;
  for (const auto& t : scenario.trucks) total += t.route.total_travel_time();
  return total;
}

Seconds follower_travel(std::span<const PlatoonRecord> platoons, const Scenario& scenario) {
  Seconds total = 0;
  for (const auto& p : platoons) {
    auto seg = scenario.network.segment(p.edge.first, p.edge.second);
    if (!seg) throw InvalidArgument("platoon on unknown edge");
    total += static_cast<Seconds>(p.size() - 1) * seg->travel_time;
  }
  return total;
}

}  // namespace

double fuel_saving_fraction(std::span<const PlatoonRecord> platoons, const Scenario& scenario) {
  const Seconds all = total_travel(scenario);
  if (all == 0) return 0.0;
  return scenario.economics.fuel_saving_fraction *
         (static_cast<double>(follower_travel(platoons, scenario)) / static_cast<double>(all));
}

std::optional<double> platooning_rate(std::span<const PlatoonRecord> platoons,
                                      const Scenario& scenario, const EdgeKey& edge) {
  std::size_t traversals = 0;
  for (const auto& t : scenario.trucks) {
    if (t.route.find_edge(edge)) ++traversals;
  }
  if (traversals == 0) return std::nullopt;
  std::size_t followers = 0;
  for (const auto& p : platoons) {
    if (p.edge == edge) followers += p.size() - 1;
  }
  return static_cast<double>(followers) / static_cast<double>(traversals);
}

double formation_rate(std::span<const DecisionEvent> decisions,
                      std::span<const PlatoonRecord> platoons, const Scenario& scenario, HubId hub) {
  if (!scenario.network.has_hub(hub)) throw InvalidArgument("unknown hub " + std::to_string(hub));
  if (scenario.trucks.empty()) return 0.0;
  const auto trucks = index_trucks(scenario);
  const auto member_of = membership(platoons, trucks);
  std::size_t found_new = 0;
  for (const auto& d : decisions) {
    if (d.hub != hub) continue;
    auto here = member_of.find({d.truck, d.hub_index});
    if (here == member_of.end()) continue;
    std::set<TruckId> before{d.truck};
    if (d.hub_index > 0) {
      auto prev = member_of.find({d.truck, d.hub_index - 1});
      if (prev != member_of.end()) before.insert(prev->second->members.begin(), prev->second->members.end());
    }
    const auto& now = here->second->members;
    if (std::any_of(now.begin(), now.end(), [&](TruckId id) { return !before.count(id); })) ++found_new;
  }
  return static_cast<double>(found_new) / static_cast<double>(scenario.trucks.size());
}

MetricsReport compute_metrics(const Scenario& scenario, std::span<const PlatoonRecord> platoons,
                              std::span<const DecisionEvent> decisions) {
  MetricsReport m;
  m.truck_count = scenario.trucks.size();
  m.fleet_reward = realized_fleet_reward(platoons, decisions, scenario);
  for (const auto& [fleet, r] : m.fleet_reward) m.total_reward += r;

  const auto trucks = index_trucks(scenario);
  for (const auto& p : platoons) {
    auto seg = scenario.network.segment(p.edge.first, p.edge.second);
    m.total_platooning_profit +=
        average_platoon_profit(static_cast<int>(p.size()), seg->travel_time, scenario.economics) *
        static_cast<double>(p.size());
    ++m.platoon_size_histogram[p.size()];
  }
  m.platoon_count = platoons.size();

  Seconds total_wait = 0;
  std::map<HubId, std::pair<Seconds, std::size_t>> hub_waits;
  std::set<HubId> decision_hubs;
  for (const auto& d : decisions) {
    total_wait += d.committed_wait;
    m.total_waiting_loss += trucks.at(d.truck)->waiting_loss_rate * to_hours(d.committed_wait);
    auto& [sum, count] = hub_waits[d.hub];
    sum += d.committed_wait;
    ++count;
  }
  for (const auto& [hub, sc] : hub_waits) {
    m.hub_mean_wait_s[hub] = static_cast<double>(sc.first) / static_cast<double>(sc.second);
  }
  m.mean_wait_s = m.truck_count > 0 ? static_cast<double>(total_wait) / static_cast<double>(m.truck_count) : 0.0;

  m.fuel_saving = fuel_saving_fraction(platoons, scenario);
  const Seconds all = total_travel(scenario);
  m.system_platooning_rate =
      all > 0 ? static_cast<double>(follower_travel(platoons, scenario)) / static_cast<double>(all) : 0.0;

  std::map<EdgeKey, std::size_t> traversals;
  for (const auto& t : scenario.trucks) {
    for (const auto& e : t.route.edges()) ++traversals[key_of(e)];
  }
  std::map<EdgeKey, std::size_t> followers;
  for (const auto& p : platoons) followers[p.edge] += p.size() - 1;
  for (const auto& [edge, count] : traversals) {
    m.edge_platooning_rate[edge] = static_cast<double>(followers[edge]) / static_cast<double>(count);
  }

  // Formation rate for every hub in one pass.
  if (!scenario.trucks.empty()) {
    const auto member_of = membership(platoons, trucks);
    std::map<HubId, std::size_t> found_new;
    for (const auto& d : decisions) {
      auto here = member_of.find({d.truck, d.hub_index});
      if (here == member_of.end()) continue;
      std::set<TruckId> before{d.truck};
      if (d.hub_index > 0) {
        auto prev = member_of.find({d.truck, d.hub_index - 1});
        if (prev != member_of.end()) before.insert(prev->second->members.begin(), prev->second->members.end());
      }
      const auto& now = here->second->members;
      if (std::any_of(now.begin(), now.end(), [&](TruckId id) { return !before.count(id); })) {
        ++found_new[d.hub];
      }
    }
    for (const auto& h : scenario.network.hubs()) {
      m.hub_formation_rate[h.id] =
          static_cast<double>(found_new[h.id]) / static_cast<double>(scenario.trucks.size());
    }
  }

  for (const auto& d : decisions) m.solver_wall_seconds.push_back(d.solve_seconds);
  return m;
}

SimulationResult run_simulation(const Scenario& scenario, SchemeKind scheme, const SimOptions& options) {
  validate(scenario);
  SimulationResult result;
  result.scheme = scheme;
  const auto trucks = index_trucks(scenario);

  HubBoard board;
  EventQueue queue;
  for (const auto& [id, truck] : trucks) {
    board_initialize(board, *truck);
    queue.push({truck->start_time, id, SimEvent::Kind::ArriveHub, 0});
  }

  while (!queue.empty()) {
    const SimEvent e = queue.pop();
    const Truck& truck = *trucks.at(e.truck);
    if (e.kind == SimEvent::Kind::ArriveHub) {
      if (e.hub_index + 1 == truck.route.hub_count()) {
        board.record_arrival(truck.id, e.hub_index, e.time);
        result.final_arrivals[truck.id] = e.time;
        continue;
      }
      SolveResult solved;
      DpInstance instance;
      DecisionEvent decision = on_arrival(board, truck, e.hub_index, e.time, scheme,
                                          scenario.economics, &solved, &instance);
      if (options.on_decision) options.on_decision(instance, solved, decision);
      queue.push({e.time + decision.committed_wait, truck.id, SimEvent::Kind::DepartHub, e.hub_index});
      result.decisions.push_back(std::move(decision));
    } else {
      board.record_departure(truck.id, e.hub_index);
      queue.push({e.time + truck.route.edge(e.hub_index).travel_time, truck.id,
                  SimEvent::Kind::ArriveHub, e.hub_index + 1});
    }
  }

  const auto traversals = realized_traversals(result.decisions, scenario);
  result.platoons = group_platoons(traversals, scheme == SchemeKind::SingleFleet);
  result.metrics = compute_metrics(scenario, result.platoons, result.decisions);
  for (const auto& [id, arrival] : result.final_arrivals) {
    if (arrival <= trucks.at(id)->deadline) ++result.metrics.deadlines_met;
  }
  return result;
}

const SimulationResult& SchemeComparison::run(SchemeKind scheme) const {
  for (const auto& r : runs) {
    if (r.scheme == scheme) return r;
  }
  throw InvalidArgument("scheme missing from comparison");
}

SchemeComparison compare_schemes(const Scenario& scenario, unsigned max_threads) {
  constexpr std::size_t kSchemes = std::size(kAllSchemes);
  SchemeComparison out;
  out.runs.resize(kSchemes);
  const std::size_t batch = max_threads == 0 ? kSchemes : std::min<std::size_t>(max_threads, kSchemes);
  std::vector<std::exception_ptr> errors(kSchemes);
  for (std::size_t start = 0; start < kSchemes; start += batch) {
    std::vector<std::thread> workers;
    for (std::size_t i = start; i < std::min(start + batch, kSchemes); ++i) {
      workers.emplace_back([&, i] {
        try {
          out.runs[i] = run_simulation(scenario, kAllSchemes[i]);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      });
    }
    for (auto& w : workers) w.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace platoon
