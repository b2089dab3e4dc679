#include "platoon/network.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <set>
#include <string>

#include "platoon/errors.hpp"
#include "platoon/rng.hpp"

namespace platoon {

RoadNetwork::RoadNetwork(std::vector<Hub> hubs, std::vector<RoadSegment> segments)
    : hubs_(std::move(hubs)), out_(hubs_.size()), in_(hubs_.size()) {
  for (std::size_t i = 0; i < hubs_.size(); ++i) {
    if (hubs_[i].id != static_cast<HubId>(i)) {
      throw InvalidArgument("hub ids must be dense and ordered; expected " + std::to_string(i) +
                            ", got " + std::to_string(hubs_[i].id));
    }
  }
  for (const auto& s : segments) {
    if (!has_hub(s.from) || !has_hub(s.to)) {
      throw InvalidArgument("segment " + std::to_string(s.from) + "->" + std::to_string(s.to) +
                            " references an unknown hub");
    }
    if (s.from == s.to) throw InvalidArgument("self-loop segment at hub " + std::to_string(s.from));
    if (s.travel_time <= 0) {
      throw InvalidArgument("segment " + std::to_string(s.from) + "->" + std::to_string(s.to) +
                            " has non-positive travel time");
    }
    if (!segments_.emplace(key_of(s), s).second) {
      throw InvalidArgument("duplicate segment " + std::to_string(s.from) + "->" +
                            std::to_string(s.to));
    }
  }
  // Map iteration order gives neighbour-sorted adjacency lists.
  for (const auto& [key, s] : segments_) {
    out_[s.from].push_back(s);
    in_[s.to].push_back(s);
  }
  for (auto& v : in_) {
    std::sort(v.begin(), v.end(),
              [](const RoadSegment& a, const RoadSegment& b) { return a.from < b.from; });
  }
}

const Hub& RoadNetwork::hub(HubId id) const {
  if (!has_hub(id)) throw InvalidArgument("unknown hub " + std::to_string(id));
  return hubs_[id];
}

std::optional<RoadSegment> RoadNetwork::segment(HubId from, HubId to) const {
  auto it = segments_.find({from, to});
  if (it == segments_.end()) return std::nullopt;
  return it->second;
}

std::span<const RoadSegment> RoadNetwork::outgoing(HubId id) const { return out_.at(id); }
std::span<const RoadSegment> RoadNetwork::incoming(HubId id) const { return in_.at(id); }

bool RoadNetwork::strongly_connected() const {
  if (hubs_.empty()) return true;
  auto reach_all = [&](bool forward) {
    std::vector<char> seen(hubs_.size(), 0);
    std::vector<HubId> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
      HubId h = stack.back();
      stack.pop_back();
      for (const auto& s : forward ? out_[h] : in_[h]) {
        HubId n = forward ? s.to : s.from;
        if (!seen[n]) {
          seen[n] = 1;
          ++count;
          stack.push_back(n);
        }
      }
    }
    return count == hubs_.size();
  };
  return reach_all(true) && reach_all(false);
}

bool operator==(const RoadNetwork& a, const RoadNetwork& b) {
  if (a.hubs_.size() != b.hubs_.size() || a.segments_ != b.segments_) return false;
  for (std::size_t i = 0; i < a.hubs_.size(); ++i) {
    const auto& l = a.hubs_[i];
    const auto& r = b.hubs_[i];
    if (l.id != r.id || l.position.x_km != r.position.x_km || l.position.y_km != r.position.y_km)
      return false;
  }
  return true;
}

Route::Route(std::vector<RoadSegment> edges) : edges_(std::move(edges)) {
  if (edges_.empty()) throw InvalidArgument("route must contain at least one edge");
  for (std::size_t k = 0; k + 1 < edges_.size(); ++k) {
    if (edges_[k].to != edges_[k + 1].from) {
      throw InvalidArgument("route edges do not chain at position " + std::to_string(k));
    }
  }
}

Route Route::from_hubs(const RoadNetwork& network, std::span<const HubId> hubs) {
  if (hubs.size() < 2) throw InvalidArgument("route needs at least two hubs");
  std::vector<RoadSegment> edges;
  edges.reserve(hubs.size() - 1);
  for (std::size_t k = 0; k + 1 < hubs.size(); ++k) {
    auto s = network.segment(hubs[k], hubs[k + 1]);
    if (!s) {
      throw InvalidArgument("no segment " + std::to_string(hubs[k]) + "->" +
                            std::to_string(hubs[k + 1]));
    }
    edges.push_back(*s);
  }
  return Route(std::move(edges));
}

std::vector<HubId> Route::hubs() const {
  std::vector<HubId> out;
  out.reserve(hub_count());
  out.push_back(origin());
  for (const auto& e : edges_) out.push_back(e.to);
  return out;
}

Seconds Route::total_travel_time() const { return remaining_travel_time(0); }

Seconds Route::remaining_travel_time(std::size_t k) const {
  Seconds total = 0;
  for (std::size_t m = k; m < edges_.size(); ++m) total += edges_[m].travel_time;
  return total;
}

std::optional<std::size_t> Route::find_edge(const EdgeKey& edge) const {
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    if (key_of(edges_[k]) == edge) return k;
  }
  return std::nullopt;
}

Seconds travel_seconds(double distance_km, double speed_kmh) {
  if (!(speed_kmh > 0.0)) throw InvalidArgument("speed must be positive");
  const double seconds = distance_km / speed_kmh * kSecondsPerHour;
  return std::max<Seconds>(1, static_cast<Seconds>(std::floor(seconds + 0.5)));
}

double distance_km(const Position& a, const Position& b) {
  return std::hypot(a.x_km - b.x_km, a.y_km - b.y_km);
}

RoadNetwork network_from_links(std::span<const Position> positions,
                               std::span<const std::pair<HubId, HubId>> links,
                               double speed_kmh) {
  std::vector<Hub> hubs;
  hubs.reserve(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) {
    hubs.push_back(Hub{static_cast<HubId>(i), positions[i]});
  }
  std::vector<RoadSegment> segments;
  for (auto [a, b] : links) {
    if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= positions.size() ||
        static_cast<std::size_t>(b) >= positions.size()) {
      throw InvalidArgument("link references unknown hub");
    }
    const Seconds t = travel_seconds(distance_km(positions[a], positions[b]), speed_kmh);
    segments.push_back({a, b, t});
    segments.push_back({b, a, t});
  }
  return RoadNetwork(std::move(hubs), std::move(segments));
}

namespace {

struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

}  // namespace

RoadNetwork build_synthetic_network(int hub_count, std::uint64_t seed, double speed_kmh,
                                    const SyntheticNetworkOptions& options) {
  if (hub_count < 2) throw InvalidArgument("hub_count must be at least 2");
  if (!(speed_kmh > 0.0)) throw InvalidArgument("speed must be positive");
  const auto n = static_cast<std::size_t>(hub_count);
  const double side = options.side_km_per_sqrt_hub * std::sqrt(static_cast<double>(hub_count));

  Rng rng = Rng::substream(seed, 0x6e6574);
  std::vector<Position> pos(n);
  for (auto& p : pos) {
    p.x_km = rng.uniform01() * side;
    p.y_km = rng.uniform01() * side;
  }

  std::set<std::pair<HubId, HubId>> links;
  auto add_link = [&](int a, int b) { links.insert({std::min(a, b), std::max(a, b)}); };

  const int k = std::min<int>(options.nearest_neighbours, hub_count - 1);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::pair<double, int>> by_dist;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) by_dist.emplace_back(distance_km(pos[i], pos[j]), static_cast<int>(j));
    }
    std::partial_sort(by_dist.begin(), by_dist.begin() + k, by_dist.end());
    for (int r = 0; r < k; ++r) add_link(static_cast<int>(i), by_dist[r].second);
  }

  DisjointSets sets(n);
  for (auto [a, b] : links) sets.unite(a, b);
  // Bridge the component containing hub 0 to its closest outside hub until
  // everything is connected.
  while (true) {
    double best = std::numeric_limits<double>::infinity();
    int best_a = -1;
    int best_b = -1;
    for (std::size_t a = 0; a < n; ++a) {
      if (sets.find(static_cast<int>(a)) != sets.find(0)) continue;
      for (std::size_t b = 0; b < n; ++b) {
        if (sets.find(static_cast<int>(b)) == sets.find(0)) continue;
        const double d = distance_km(pos[a], pos[b]);
        if (d < best) {
          best = d;
          best_a = static_cast<int>(a);
          best_b = static_cast<int>(b);
        }
      }
    }
    if (best_a < 0) break;
    add_link(best_a, best_b);
    sets.unite(best_a, best_b);
  }

  std::vector<std::pair<HubId, HubId>> link_list(links.begin(), links.end());
  return network_from_links(pos, link_list, speed_kmh);
}

RoutesToDestination::RoutesToDestination(const RoadNetwork& network, HubId destination)
    : network_(&network), destination_(destination) {
  if (!network.has_hub(destination)) {
    throw InvalidArgument("unknown destination hub " + std::to_string(destination));
  }
  constexpr Seconds kInf = std::numeric_limits<Seconds>::max();
  dist_.assign(network.hub_count(), kInf);
  using Item = std::pair<Seconds, HubId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  dist_[destination] = 0;
  queue.push({0, destination});
  while (!queue.empty()) {
    auto [d, h] = queue.top();
    queue.pop();
    if (d != dist_[h]) continue;
    for (const auto& s : network.incoming(h)) {
      const Seconds nd = d + s.travel_time;
      if (nd < dist_[s.from]) {
        dist_[s.from] = nd;
        queue.push({nd, s.from});
      }
    }
  }
}

bool RoutesToDestination::reachable(HubId origin) const {
  return network_->has_hub(origin) && dist_[origin] != std::numeric_limits<Seconds>::max();
}

Seconds RoutesToDestination::distance(HubId origin) const {
  if (!reachable(origin)) throw NoRouteError("hub " + std::to_string(destination_) +
                                             " unreachable from " + std::to_string(origin));
  return dist_[origin];
}

Route RoutesToDestination::route_from(HubId origin) const {
  if (!network_->has_hub(origin)) throw InvalidArgument("unknown origin hub " + std::to_string(origin));
  if (origin == destination_) throw InvalidArgument("origin equals destination");
  if (!reachable(origin)) {
    throw NoRouteError("hub " + std::to_string(destination_) + " unreachable from " +
                       std::to_string(origin));
  }
  // Walking greedily along the smallest-id successor that stays on a
  // shortest path yields the lexicographically smallest hub sequence.
  std::vector<RoadSegment> edges;
  HubId at = origin;
  while (at != destination_) {
    const RoadSegment* next = nullptr;
    for (const auto& s : network_->outgoing(at)) {
      if (dist_[s.to] != std::numeric_limits<Seconds>::max() &&
          s.travel_time + dist_[s.to] == dist_[at]) {
        next = &s;
        break;
      }
    }
    if (next == nullptr) throw InternalError("shortest-path tree broken at hub " + std::to_string(at));
    edges.push_back(*next);
    at = next->to;
  }
  return Route(std::move(edges));
}

Route shortest_route(const RoadNetwork& network, HubId origin, HubId destination) {
  if (!network.has_hub(origin) || !network.has_hub(destination)) {
    throw InvalidArgument("unknown hub in route request");
  }
  if (origin == destination) throw InvalidArgument("origin equals destination");
  return RoutesToDestination(network, destination).route_from(origin);
}

}  // namespace platoon
