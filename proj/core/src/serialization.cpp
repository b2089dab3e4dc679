#include "platoon/serialization.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "platoon/errors.hpp"

namespace platoon {

using Json = nlohmann::ordered_json;

namespace {

Json parse(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw DataError(std::string("malformed JSON: ") + e.what());
  }
}

// Wraps field access so type/missing-key errors surface as DataError.
template <typename F>
auto guarded(std::string_view what, F&& f) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw DataError(std::string(what) + ": " + e.what());
  } catch (const InvalidArgument& e) {
    throw DataError(std::string(what) + ": " + e.what());
  } catch (const InfeasibleError& e) {
    throw DataError(std::string(what) + ": " + e.what());
  }
}

Json economics_json(const EconomicParams& econ) {
  Json j;
  j["xi_per_follower_h"] = econ.platoon_benefit_rate;
  j["fuel_saving_fraction"] = econ.fuel_saving_fraction;
  j["epsilon_per_h"] = econ.default_waiting_loss_rate;
  return j;
}

EconomicParams economics_from(const Json& j) {
  EconomicParams econ;
  econ.platoon_benefit_rate = j.value("xi_per_follower_h", econ.platoon_benefit_rate);
  econ.fuel_saving_fraction = j.value("fuel_saving_fraction", econ.fuel_saving_fraction);
  econ.default_waiting_loss_rate = j.value("epsilon_per_h", econ.default_waiting_loss_rate);
  return econ;
}

Json config_json(const ScenarioConfig& c) {
  Json j;
  j["hub_count"] = c.hub_count;
  j["truck_count"] = c.truck_count;
  j["fleet_preset"] = c.fleet_preset;
  Json buckets = Json::array();
  for (const auto& b : c.fleets.buckets) {
    buckets.push_back({{"trucks_per_fleet", b.trucks_per_fleet}, {"fleet_count", b.fleet_count}});
  }
  j["fleets"] = buckets;
  j["window_start_s"] = c.window_start;
  j["window_end_s"] = c.window_end;
  j["waiting_budget_fraction"] = c.waiting_budget_fraction;
  j["speed_kmh"] = c.speed_kmh;
  j["economics"] = economics_json(c.economics);
  j["seed"] = c.seed;
  return j;
}

ScenarioConfig config_from(const Json& j) {
  ScenarioConfig c;
  c.hub_count = j.value("hub_count", c.hub_count);
  c.truck_count = j.value("truck_count", c.truck_count);
  c.fleet_preset = j.value("fleet_preset", c.fleet_preset);
  if (j.contains("fleets")) {
    for (const auto& b : j.at("fleets")) {
      c.fleets.buckets.push_back({b.at("trucks_per_fleet").get<int>(), b.at("fleet_count").get<int>()});
    }
  }
  c.window_start = j.value("window_start_s", c.window_start);
  c.window_end = j.value("window_end_s", c.window_end);
  c.waiting_budget_fraction = j.value("waiting_budget_fraction", c.waiting_budget_fraction);
  c.speed_kmh = j.value("speed_kmh", c.speed_kmh);
  if (j.contains("economics")) c.economics = economics_from(j.at("economics"));
  c.seed = j.value("seed", c.seed);
  return c;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string format_double(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) throw InternalError("double formatting failed");
  return std::string(buf, end);
}

std::string scenario_to_json(const Scenario& scenario, const ScenarioConfig* config) {
  Json j;
  Json hubs = Json::array();
  for (const auto& h : scenario.network.hubs()) {
    hubs.push_back({{"id", h.id}, {"x", h.position.x_km}, {"y", h.position.y_km}});
  }
  j["hubs"] = hubs;
  Json segments = Json::array();
  for (const auto& [key, s] : scenario.network.segments()) {
    segments.push_back({{"from", s.from}, {"to", s.to}, {"travel_time_s", s.travel_time}});
  }
  j["segments"] = segments;
  Json trucks = Json::array();
  for (const auto& t : scenario.trucks) {
    Json tj;
    tj["id"] = t.id;
    tj["fleet"] = t.fleet;
    tj["route"] = t.route.hubs();
    tj["start_time_s"] = t.start_time;
    tj["deadline_s"] = t.deadline;
    tj["waiting_loss_per_h"] = t.waiting_loss_rate;
    trucks.push_back(std::move(tj));
  }
  j["trucks"] = trucks;
  j["economics"] = economics_json(scenario.economics);
  j["seed"] = scenario.rng_seed;
  if (config != nullptr) j["config"] = config_json(*config);
  return dump(j);
}

bool json_has_scenario(std::string_view text) {
  const Json j = parse(text);
  return j.is_object() && j.contains("hubs") && j.contains("segments") && j.contains("trucks");
}

Scenario scenario_from_json(std::string_view text) {
  const Json j = parse(text);
  return guarded("invalid scenario", [&] {
    std::vector<Hub> hubs;
    for (const auto& h : j.at("hubs")) {
      hubs.push_back({h.at("id").get<HubId>(), {h.at("x").get<double>(), h.at("y").get<double>()}});
    }
    std::vector<RoadSegment> segments;
    for (const auto& s : j.at("segments")) {
      segments.push_back(
          {s.at("from").get<HubId>(), s.at("to").get<HubId>(), s.at("travel_time_s").get<Seconds>()});
    }
    Scenario scenario;
    scenario.network = RoadNetwork(std::move(hubs), std::move(segments));
    scenario.economics = j.contains("economics") ? economics_from(j.at("economics")) : EconomicParams{};
    for (const auto& tj : j.at("trucks")) {
      Truck t;
      t.id = tj.at("id").get<TruckId>();
      t.fleet = tj.at("fleet").get<FleetId>();
      const auto route = tj.at("route").get<std::vector<HubId>>();
      t.route = Route::from_hubs(scenario.network, route);
      t.start_time = tj.at("start_time_s").get<Seconds>();
      t.deadline = tj.at("deadline_s").get<Seconds>();
      t.waiting_loss_rate =
          tj.value("waiting_loss_per_h", scenario.economics.default_waiting_loss_rate);
      scenario.trucks.push_back(std::move(t));
    }
    scenario.rng_seed = j.value("seed", std::uint64_t{0});
    validate(scenario);
    return scenario;
  });
}

std::optional<ScenarioConfig> config_from_json(std::string_view text) {
  const Json j = parse(text);
  if (!j.is_object()) throw DataError("config document must be a JSON object");
  // A bare config document (no network) is accepted too.
  const bool bare = !j.contains("hubs") && !j.contains("config");
  if (!bare && !j.contains("config")) return std::nullopt;
  const Json& block = bare ? j : j.at("config");
  return guarded("invalid config", [&] {
    ScenarioConfig c = config_from(block);
    validate(c);
    return c;
  });
}

std::string config_to_json(const ScenarioConfig& config) { return dump(config_json(config)); }

std::string instance_to_json(const DpInstance& instance) {
  Json j;
  j["arrival_s"] = instance.arrival;
  j["deadline_s"] = instance.deadline;
  j["own_fleet"] = instance.own_fleet;
  j["epsilon_per_h"] = instance.waiting_loss_rate;
  j["economics"] = economics_json(instance.econ);
  Json stages = Json::array();
  for (const auto& s : instance.stages) {
    Json partners = Json::array();
    for (const auto& p : s.partners) {
      partners.push_back({{"truck", p.truck}, {"fleet", p.fleet}, {"departure_s", p.predicted_departure}});
    }
    stages.push_back({{"tau_s", s.travel_time}, {"partners", partners}});
  }
  j["stages"] = stages;
  return dump(j);
}

DpInstance instance_from_json(std::string_view text) {
  const Json j = parse(text);
  return guarded("invalid instance", [&] {
    DpInstance instance;
    instance.arrival = j.at("arrival_s").get<Seconds>();
    instance.deadline = j.at("deadline_s").get<Seconds>();
    instance.own_fleet = j.at("own_fleet").get<FleetId>();
    instance.waiting_loss_rate = j.at("epsilon_per_h").get<double>();
    if (j.contains("economics")) instance.econ = economics_from(j.at("economics"));
    for (const auto& s : j.at("stages")) {
      DpStage stage;
      stage.travel_time = s.at("tau_s").get<Seconds>();
      for (const auto& p : s.at("partners")) {
        stage.partners.push_back(
            {p.at("truck").get<TruckId>(), p.at("fleet").get<FleetId>(), p.at("departure_s").get<Seconds>()});
      }
      instance.stages.push_back(std::move(stage));
    }
    validate(instance);
    return instance;
  });
}

std::string board_to_json(const HubBoard& board) {
  auto position_name = [](TruckPosition::Kind k) {
    switch (k) {
      case TruckPosition::Kind::Scheduled:
        return "scheduled";
      case TruckPosition::Kind::AtHub:
        return "at_hub";
      case TruckPosition::Kind::InTransit:
        return "in_transit";
      case TruckPosition::Kind::Finished:
        return "finished";
    }
    return "unknown";
  };
  Json trucks = Json::array();
  for (const auto& [id, e] : board.entries()) {
    Json tj;
    tj["truck"] = e.truck;
    tj["fleet"] = e.fleet;
    tj["route"] = e.route.hubs();
    tj["arrivals_s"] = e.arrivals;
    tj["departures_s"] = e.departures;
    tj["position"] = {{"kind", position_name(e.position.kind)}, {"index", e.position.index}};
    tj["hubs_reached"] = e.hubs_reached;
    trucks.push_back(std::move(tj));
  }
  Json j;
  j["trucks"] = trucks;
  return dump(j);
}

std::string decisions_to_jsonl(std::span<const DecisionEvent> decisions) {
  std::string out;
  for (const auto& d : decisions) {
    Json j;
    j["t"] = d.time;
    j["truck"] = d.truck;
    j["hub"] = d.hub;
    j["wait_s"] = d.committed_wait;
    j["partners_matched"] = d.partners_matched;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::string platoons_to_csv(std::span<const PlatoonRecord> platoons) {
  std::ostringstream os;
  os << "edge_from,edge_to,depart_s,size,members\n";
  for (const auto& p : platoons) {
    os << p.edge.first << ',' << p.edge.second << ',' << p.departure_time << ',' << p.size() << ',';
    for (std::size_t i = 0; i < p.members.size(); ++i) {
      if (i > 0) os << ';';
      os << p.members[i];
    }
    os << '\n';
  }
  return os.str();
}

std::string metrics_to_json(const MetricsReport& m) {
  Json j;
  j["truck_count"] = m.truck_count;
  j["total_reward"] = m.total_reward;
  j["total_platooning_profit"] = m.total_platooning_profit;
  j["total_waiting_loss"] = m.total_waiting_loss;
  j["fuel_saving"] = m.fuel_saving;
  j["co2_reduction"] = m.fuel_saving;
  j["system_platooning_rate"] = m.system_platooning_rate;
  j["n_platoons"] = m.platoon_count;
  j["mean_wait_s"] = m.mean_wait_s;
  j["deadlines_met"] = m.deadlines_met;
  Json sizes = Json::object();
  for (const auto& [size, count] : m.platoon_size_histogram) sizes[std::to_string(size)] = count;
  j["platoon_size_histogram"] = sizes;
  Json fleets = Json::array();
  for (const auto& [fleet, r] : m.fleet_reward) fleets.push_back({{"fleet", fleet}, {"reward", r}});
  j["fleet_reward"] = fleets;
  Json edges = Json::array();
  for (const auto& [edge, rate] : m.edge_platooning_rate) {
    edges.push_back({{"from", edge.first}, {"to", edge.second}, {"platooning_rate", rate}});
  }
  j["edge_platooning_rate"] = edges;
  Json hubs = Json::array();
  for (const auto& [hub, rate] : m.hub_formation_rate) {
    Json hj{{"hub", hub}, {"formation_rate", rate}};
    auto w = m.hub_mean_wait_s.find(hub);
    hj["mean_wait_s"] = w == m.hub_mean_wait_s.end() ? 0.0 : w->second;
    hubs.push_back(std::move(hj));
  }
  j["hubs"] = hubs;
  return dump(j);
}

std::string comparison_to_csv(const SchemeComparison& comparison) {
  std::ostringstream os;
  os << "scheme,total_reward,fuel_saving,system_platooning_rate,n_platoons,mean_wait_s\n";
  for (const auto& r : comparison.runs) {
    const auto& m = r.metrics;
    os << to_string(r.scheme) << ',' << format_double(m.total_reward) << ','
       << format_double(m.fuel_saving) << ',' << format_double(m.system_platooning_rate) << ','
       << m.platoon_count << ',' << format_double(m.mean_wait_s) << '\n';
  }
  return os.str();
}

std::string comparison_summary_json(const SchemeComparison& comparison) {
  const double predictive = comparison.run(SchemeKind::PredictiveMultiFleet).metrics.total_reward;
  const double spontaneous = comparison.run(SchemeKind::SpontaneousMultiFleet).metrics.total_reward;
  const double single = comparison.run(SchemeKind::SingleFleet).metrics.total_reward;
  auto ratio = [](double a, double b) -> Json {
    if (b == 0.0) return nullptr;
    return a / b;
  };
  Json j;
  Json rewards;
  for (const auto& r : comparison.runs) rewards[std::string(to_string(r.scheme))] = r.metrics.total_reward;
  j["total_reward"] = rewards;
  j["predictive_over_single_fleet"] = ratio(predictive, single);
  j["predictive_over_spontaneous"] = ratio(predictive, spontaneous);
  j["spontaneous_over_single_fleet"] = ratio(spontaneous, single);
  return dump(j);
}

std::string bench_to_csv(std::span<const BenchRow> rows) {
  std::ostringstream os;
  os << "case,n_tilde,N_i,enum_seconds,dp_seconds,values_equal\n";
  for (const auto& r : rows) {
    os << r.case_id << ',' << r.n_tilde << ',' << r.hub_count << ','
       << (r.enum_seconds ? format_double(*r.enum_seconds) : "skipped") << ','
       << format_double(r.dp_seconds) << ','
       << (r.values_equal ? (*r.values_equal ? "true" : "false") : "skipped") << '\n';
  }
  return os.str();
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw DataError("write failed for " + path.string());
}

}  // namespace platoon
