#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "platoon/types.hpp"

namespace platoon {

struct Position {
  double x_km = 0.0;
  double y_km = 0.0;
};

struct Hub {
  HubId id = 0;
  Position position;
};

// Directed road segment between two hubs. (from, to) and (to, from) are
// distinct edges.
struct RoadSegment {
  HubId from = 0;
  HubId to = 0;
  Seconds travel_time = 0;

  friend bool operator==(const RoadSegment&, const RoadSegment&) = default;
};

using EdgeKey = std::pair<HubId, HubId>;

inline EdgeKey key_of(const RoadSegment& s) { return {s.from, s.to}; }

// Directed hub graph. Hub ids are dense in [0, hub_count()).
class RoadNetwork {
 public:
  RoadNetwork() = default;

  // Throws InvalidArgument if ids are not dense, a segment endpoint is
  // unknown, a travel time is non-positive, or an edge is duplicated.
  RoadNetwork(std::vector<Hub> hubs, std::vector<RoadSegment> segments);

  std::size_t hub_count() const { return hubs_.size(); }
  std::span<const Hub> hubs() const { return hubs_; }
  const Hub& hub(HubId id) const;

  // Segments ordered by (from, to).
  const std::map<EdgeKey, RoadSegment>& segments() const { return segments_; }
  std::optional<RoadSegment> segment(HubId from, HubId to) const;
  bool has_hub(HubId id) const {
    return id >= 0 && static_cast<std::size_t>(id) < hubs_.size();
  }

  // Outgoing / incoming segments of a hub, ordered by neighbour id.
  std::span<const RoadSegment> outgoing(HubId id) const;
  std::span<const RoadSegment> incoming(HubId id) const;

  bool strongly_connected() const;

  friend bool operator==(const RoadNetwork& a, const RoadNetwork& b);

 private:
  std::vector<Hub> hubs_;
  std::map<EdgeKey, RoadSegment> segments_;
  std::vector<std::vector<RoadSegment>> out_;
  std::vector<std::vector<RoadSegment>> in_;
};

// A truck's fixed sequence of chained road segments.
class Route {
 public:
  Route() = default;
  // Throws InvalidArgument when empty or when consecutive edges don't chain.
  explicit Route(std::vector<RoadSegment> edges);

  // Looks up consecutive hub pairs in the network; throws InvalidArgument
  // if a pair is not a segment.
  static Route from_hubs(const RoadNetwork& network, std::span<const HubId> hubs);

  std::span<const RoadSegment> edges() const { return edges_; }
  const RoadSegment& edge(std::size_t k) const { return edges_.at(k); }
  std::size_t edge_count() const { return edges_.size(); }
  // N_i: number of hubs on the route, edge_count() + 1.
  std::size_t hub_count() const { return edges_.size() + 1; }
  std::vector<HubId> hubs() const;
  HubId origin() const { return edges_.front().from; }
  HubId destination() const { return edges_.back().to; }

  Seconds total_travel_time() const;
  // Travel time from hub index k to the destination.
  Seconds remaining_travel_time(std::size_t k) const;

  // Index of the edge in this route equal to (from, to), if any.
  std::optional<std::size_t> find_edge(const EdgeKey& edge) const;

  friend bool operator==(const Route&, const Route&) = default;

 private:
  std::vector<RoadSegment> edges_;
};

// Rounds a distance at constant speed to whole seconds (half-up).
Seconds travel_seconds(double distance_km, double speed_kmh);

double distance_km(const Position& a, const Position& b);

// Builds a network from explicit hub positions and undirected links; both
// directions of every link are added with distance-derived travel times.
RoadNetwork network_from_links(std::span<const Position> positions,
                               std::span<const std::pair<HubId, HubId>> links,
                               double speed_kmh);

struct SyntheticNetworkOptions {
  // Hubs are placed uniformly in a square of side
  // side_km_per_sqrt_hub * sqrt(hub_count).
  double side_km_per_sqrt_hub = 60.0;
  int nearest_neighbours = 3;
};

// Seeded random geometric graph: k-nearest-neighbour links, symmetrised,
// with components bridged by their closest hub pair.
RoadNetwork build_synthetic_network(int hub_count, std::uint64_t seed, double speed_kmh,
                                    const SyntheticNetworkOptions& options = {});

// Minimum-travel-time route; among equal-time routes the lexicographically
// smallest hub-id sequence wins.
Route shortest_route(const RoadNetwork& network, HubId origin, HubId destination);

// Reusable shortest-route oracle for many origins towards one destination.
class RoutesToDestination {
 public:
  RoutesToDestination(const RoadNetwork& network, HubId destination);

  bool reachable(HubId origin) const;
  Seconds distance(HubId origin) const;
  Route route_from(HubId origin) const;

 private:
  const RoadNetwork* network_;
  HubId destination_;
  std::vector<Seconds> dist_;
};

}  // namespace platoon
