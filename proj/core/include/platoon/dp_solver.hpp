#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "platoon/reward.hpp"
#include "platoon/types.hpp"

namespace platoon {

// One remaining edge of the deciding truck's route together with the
// predicted departures of every potential partner on that edge.
struct DpStage {
  Seconds travel_time = 0;
  std::vector<PartnerPrediction> partners;

  friend bool operator==(const DpStage&, const DpStage&) = default;
};

// Waiting-time decision problem of one truck standing at hub k. Stage m of
// the instance corresponds to the truck's (k + m)-th hub.
struct DpInstance {
  std::vector<DpStage> stages;
  Seconds arrival = 0;
  Seconds deadline = 0;
  FleetId own_fleet = 0;
  EconomicParams econ;
  double waiting_loss_rate = 25.0;

  std::size_t stage_count() const { return stages.size(); }
  // Travel time from stage m's hub to the destination.
  Seconds remaining_travel(std::size_t m) const;
  // Longest admissible wait at stage m when arriving at t, assuming no
  // further waiting downstream.
  Seconds max_wait(std::size_t m, Seconds t) const {
    return deadline - t - remaining_travel(m);
  }

  friend bool operator==(const DpInstance&, const DpInstance&) = default;
};

// Throws InvalidArgument for empty stages or non-positive travel times and
// InfeasibleError when the no-wait trip misses the deadline.
void validate(const DpInstance& instance);

// Admissible waits at (stage, state): zero plus every alignment with a
// partner's predicted departure that respects the deadline. Sorted, unique.
std::vector<Seconds> decision_space(const DpInstance& instance, std::size_t stage, Seconds state);

// Reachable arrival times per stage; entry m is sorted and unique, and
// there are stage_count() + 1 entries (the last is the destination).
struct StateSpace {
  std::vector<std::vector<Seconds>> states;
};

StateSpace generate_state_space(const DpInstance& instance);

struct StageValues {
  std::vector<Seconds> states;
  std::vector<double> values;
  // Argmax wait per state; unused (zero) at the destination stage.
  std::vector<Seconds> best_waits;

  std::optional<std::size_t> find(Seconds state) const;
  // Throws InternalError when the state is not tabulated.
  double value_at(Seconds state) const;
};

struct ValueTable {
  std::vector<StageValues> stages;
};

// Q(t, w) = stage reward of departing at t + w plus the optimal value of the
// resulting next-stage arrival. Recomputes the matched partner set from the
// raw predictions.
double q_value(const DpInstance& instance, std::size_t stage, Seconds state, Seconds wait,
               const StageValues& next);

// Objective of an explicit wait schedule evaluated forward from the
// instance arrival. Throws InfeasibleError if the schedule misses the
// deadline or a wait is negative.
double evaluate_schedule(const DpInstance& instance, std::span<const Seconds> waits);

struct SolveStats {
  std::uint64_t q_evaluations = 0;
  // |state space| per stage, destination included.
  std::vector<std::size_t> state_counts;
  // |union over states of the decision space| per decision stage.
  std::vector<std::size_t> decision_counts;
  double wall_seconds = 0.0;
};

struct SolveResult {
  std::vector<Seconds> waits;
  // Arrival at every remaining hub, starting with the instance arrival.
  std::vector<Seconds> arrivals;
  double value = 0.0;
  SolveStats stats;
};

struct SolveOptions {
  // Look up matched-partner counts by departure time instead of scanning the
  // prediction list for every (state, wait) pair. Both paths give identical
  // results.
  bool departure_cache = true;
};

// Backward pass over the given state space.
ValueTable compute_value_table(const DpInstance& instance, const StateSpace& space,
                               const SolveOptions& options = {}, SolveStats* stats = nullptr);

// Exact optimal schedule; among equal-value waits the smallest is chosen.
SolveResult solve(const DpInstance& instance, const SolveOptions& options = {});

// Optimal value J*_m(state) with the waiting loss measured from the
// instance arrival. `state` must be reachable without negative waits and
// must leave the no-wait remainder feasible.
double optimal_value(const DpInstance& instance, std::size_t stage, Seconds state);

struct BruteForceOptions {
  std::uint64_t guard = 100'000'000;
};

// Upper bound on the number of schedules brute_force_solve enumerates:
// product over stages of (1 + partner departures inside the stage window).
// Saturates at UINT64_MAX.
std::uint64_t enumeration_bound(const DpInstance& instance);

// Enumerates every combination of per-stage discrete waits along the
// induced trajectories and keeps the best (first found on ties, i.e. the
// lexicographically smallest wait vector). Throws ResourceLimitError when
// enumeration_bound exceeds the guard.
SolveResult brute_force_solve(const DpInstance& instance, const BruteForceOptions& options = {});

struct ComplexitySummary {
  // Largest per-stage decision union.
  std::size_t n_tilde = 0;
  // Hubs on the remaining route (stages + 1).
  std::size_t hub_count = 0;
  std::vector<std::size_t> state_counts;
  std::uint64_t q_evaluations = 0;
};

ComplexitySummary solve_stats(const SolveResult& result);

}  // namespace platoon
