#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "platoon/dp_solver.hpp"
#include "platoon/network.hpp"
#include "platoon/reward.hpp"
#include "platoon/types.hpp"

namespace platoon {

enum class SchemeKind {
  PredictiveMultiFleet,
  SpontaneousMultiFleet,
  SingleFleet,
};

inline constexpr SchemeKind kAllSchemes[] = {SchemeKind::PredictiveMultiFleet,
                                             SchemeKind::SpontaneousMultiFleet,
                                             SchemeKind::SingleFleet};

// "predictive", "spontaneous", "single-fleet".
std::string_view to_string(SchemeKind scheme);
// Throws InvalidArgument listing the valid names.
SchemeKind parse_scheme(std::string_view name);

struct TruckPosition {
  enum class Kind { Scheduled, AtHub, InTransit, Finished };
  Kind kind = Kind::Scheduled;
  // Hub index when AtHub/Finished, edge index when InTransit.
  std::size_t index = 0;

  friend bool operator==(const TruckPosition&, const TruckPosition&) = default;
};

// What the shared storage knows about one truck. Hub indices are positions
// along the truck's own route (0 = origin).
struct BoardEntry {
  TruckId truck = 0;
  FleetId fleet = 0;
  Route route;
  // Predicted arrival at every hub (route.hub_count() entries).
  std::vector<Seconds> arrivals;
  // Predicted departure from every hub except the destination.
  std::vector<Seconds> departures;
  TruckPosition position;
  // Hubs where the arrival has actually happened.
  std::size_t hubs_reached = 0;

  friend bool operator==(const BoardEntry&, const BoardEntry&) = default;
};

struct DecisionEvent {
  TruckId truck = 0;
  std::size_t hub_index = 0;
  HubId hub = 0;
  Seconds time = 0;
  Seconds committed_wait = 0;
  // Planned waits at the following hubs (predictions only).
  std::vector<Seconds> predicted_remaining_waits;
  std::vector<TruckId> partners_matched;
  double solve_seconds = 0.0;
  std::size_t n_tilde = 0;

  friend bool operator==(const DecisionEvent& a, const DecisionEvent& b) {
    return a.truck == b.truck && a.hub_index == b.hub_index && a.hub == b.hub &&
           a.time == b.time && a.committed_wait == b.committed_wait &&
           a.predicted_remaining_waits == b.predicted_remaining_waits &&
           a.partners_matched == b.partners_matched && a.n_tilde == b.n_tilde;
  }
};

// Shared store of routes, fleet tags and predicted schedules. Mutations
// are expected to be serialised by the caller (one decision at a time).
class HubBoard {
 public:
  struct EdgeUser {
    TruckId truck;
    std::size_t edge_index;
  };

  // Registers the truck with zero predicted waits. Throws InvalidStateError
  // on duplicate registration.
  void initialize(const Truck& truck);

  bool contains(TruckId truck) const { return entries_.count(truck) > 0; }
  const BoardEntry& entry(TruckId truck) const;
  const std::map<TruckId, BoardEntry>& entries() const { return entries_; }

  // Trucks whose route uses the directed edge, with the edge's position in
  // their route; ordered by truck id.
  const std::vector<EdgeUser>& users_of(const EdgeKey& edge) const;

  // True when `truck` has physically arrived at its hub `hub_index` by
  // `time` and has not left before `time`.
  bool present_at(TruckId truck, std::size_t hub_index, Seconds time) const;

  // Records a real arrival; throws InvalidStateError if it disagrees with
  // the route order. Repeating the current arrival is a no-op.
  void record_arrival(TruckId truck, std::size_t hub_index, Seconds time);

  // Commits the wait at `hub_index` and the predicted downstream waits,
  // re-chaining all later predictions.
  void commit_schedule(TruckId truck, std::size_t hub_index, std::span<const Seconds> waits);

  void record_departure(TruckId truck, std::size_t hub_index);

  friend bool operator==(const HubBoard& a, const HubBoard& b) { return a.entries_ == b.entries_; }

 private:
  BoardEntry& mutable_entry(TruckId truck);

  std::map<TruckId, BoardEntry> entries_;
  std::map<EdgeKey, std::vector<EdgeUser>> edge_users_;
};

void board_initialize(HubBoard& board, const Truck& truck);

// Decision problem of `truck` standing at its hub `hub_index` at `arrival`
// under the given information scheme.
DpInstance build_instance(const HubBoard& board, const Truck& truck, std::size_t hub_index,
                          Seconds arrival, SchemeKind scheme, const EconomicParams& econ);

// Read-solve-write transaction for one arrival: builds the instance,
// solves it, commits the wait at the current hub and uploads the updated
// predicted schedule.
DecisionEvent on_arrival(HubBoard& board, const Truck& truck, std::size_t hub_index,
                         Seconds arrival, SchemeKind scheme, const EconomicParams& econ,
                         SolveResult* solved = nullptr, DpInstance* instance_out = nullptr);

}  // namespace platoon
