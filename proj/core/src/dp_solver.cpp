#include "platoon/dp_solver.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <string>

#include "platoon/errors.hpp"

namespace platoon {

namespace {

// Distinct predicted departures of one stage with matched-partner counts.
struct DepartureIndex {
  std::vector<Seconds> departures;
  std::vector<PartnerCounts> counts;

  DepartureIndex(const DpStage& stage, FleetId own_fleet) {
    std::vector<std::pair<Seconds, bool>> raw;
    raw.reserve(stage.partners.size());
    for (const auto& p : stage.partners) raw.emplace_back(p.predicted_departure, p.fleet == own_fleet);
    std::sort(raw.begin(), raw.end());
    for (const auto& [d, same] : raw) {
      if (departures.empty() || departures.back() != d) {
        departures.push_back(d);
        counts.push_back({});
      }
      if (same) {
        ++counts.back().same_fleet;
      } else {
        ++counts.back().other_fleet;
      }
    }
  }

  PartnerCounts at(Seconds d) const {
    auto it = std::lower_bound(departures.begin(), departures.end(), d);
    if (it == departures.end() || *it != d) return {};
    return counts[static_cast<std::size_t>(it - departures.begin())];
  }

  // Half-open index range of departures in [lo, hi].
  std::pair<std::size_t, std::size_t> range(Seconds lo, Seconds hi) const {
    auto first = std::lower_bound(departures.begin(), departures.end(), lo);
    auto last = std::upper_bound(departures.begin(), departures.end(), hi);
    if (last < first) last = first;
    return {static_cast<std::size_t>(first - departures.begin()),
            static_cast<std::size_t>(last - departures.begin())};
  }
};

struct Prepared {
  std::vector<Seconds> remaining;  // stage_count() + 1 entries
  std::vector<DepartureIndex> index;

  explicit Prepared(const DpInstance& instance) {
    const std::size_t n = instance.stages.size();
    remaining.assign(n + 1, 0);
    for (std::size_t m = n; m-- > 0;) remaining[m] = remaining[m + 1] + instance.stages[m].travel_time;
    index.reserve(n);
    for (const auto& s : instance.stages) index.emplace_back(s, instance.own_fleet);
  }
};

double cached_stage_reward(const DpInstance& instance, const Prepared& prep, std::size_t m,
                           Seconds departure) {
  const PartnerCounts counts = prep.index[m].at(departure);
  return stage_reward(instance.stages[m].travel_time, counts, counts.total() == 0, instance.econ);
}

double scanned_stage_reward(const DpInstance& instance, std::size_t m, Seconds state, Seconds wait) {
  const auto& stage = instance.stages[m];
  const auto matched = predicted_partners(state, wait, stage.partners);
  const PartnerCounts counts = count_partners(state + wait, instance.own_fleet, stage.partners);
  return stage_reward(stage.travel_time, counts, matched.empty(), instance.econ);
}

double terminal_value(const DpInstance& instance, const Prepared& prep, Seconds final_arrival) {
  return terminal_reward(final_arrival, instance.arrival, prep.remaining[0],
                         instance.waiting_loss_rate);
}

void check_stage(const DpInstance& instance, std::size_t stage) {
  if (stage >= instance.stages.size()) {
    throw InvalidArgument("stage " + std::to_string(stage) + " out of range (instance has " +
                          std::to_string(instance.stages.size()) + " stages)");
  }
}

// State generation specialised to the departure index: for any state t the
// admissible departures are t itself and partner departures in
// [t, deadline - remaining], so the union over states is one index range.
StateSpace generate_from(const DpInstance& instance, const Prepared& prep, std::size_t first_stage,
                         Seconds start) {
  const std::size_t n = instance.stages.size();
  StateSpace space;
  space.states.assign(n + 1, {});
  space.states[first_stage] = {start};
  for (std::size_t m = first_stage; m < n; ++m) {
    const auto& current = space.states[m];
    const Seconds tau = instance.stages[m].travel_time;
    const Seconds latest_departure = instance.deadline - prep.remaining[m];
    auto& next = space.states[m + 1];
    next.reserve(current.size());
    for (Seconds t : current) next.push_back(t + tau);
    const auto [lo, hi] = prep.index[m].range(current.front(), latest_departure);
    for (std::size_t i = lo; i < hi; ++i) next.push_back(prep.index[m].departures[i] + tau);
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
  }
  return space;
}

// Tracks the distinct waits seen at one stage.
class WaitUnion {
 public:
  explicit WaitUnion(Seconds max_wait) {
    if (max_wait >= 0 && max_wait <= kBitmapLimit) {
      bitmap_.assign(static_cast<std::size_t>(max_wait) + 1, 0);
    }
  }
  void add(Seconds w) {
    if (!bitmap_.empty() && w < static_cast<Seconds>(bitmap_.size())) {
      if (!bitmap_[static_cast<std::size_t>(w)]) {
        bitmap_[static_cast<std::size_t>(w)] = 1;
        ++count_;
      }
    } else {
      overflow_.push_back(w);
    }
  }
  std::size_t size() {
    std::sort(overflow_.begin(), overflow_.end());
    overflow_.erase(std::unique(overflow_.begin(), overflow_.end()), overflow_.end());
    return count_ + overflow_.size();
  }

 private:
  static constexpr Seconds kBitmapLimit = Seconds{1} << 26;
  std::vector<char> bitmap_;
  std::vector<Seconds> overflow_;
  std::size_t count_ = 0;
};

ValueTable backward_pass(const DpInstance& instance, const Prepared& prep, const StateSpace& space,
                         const SolveOptions& options, SolveStats* stats) {
  const std::size_t n = instance.stages.size();
  if (space.states.size() != n + 1) throw InternalError("state space has wrong stage count");
  ValueTable table;
  table.stages.resize(n + 1);

  auto& terminal = table.stages[n];
  terminal.states = space.states[n];
  terminal.values.reserve(terminal.states.size());
  for (Seconds t : terminal.states) terminal.values.push_back(terminal_value(instance, prep, t));
  terminal.best_waits.assign(terminal.states.size(), 0);

  std::uint64_t q_evaluations = 0;
  std::vector<std::size_t> decision_counts(n, 0);

  for (std::size_t m = n; m-- > 0;) {
    const auto& states = space.states[m];
    const StageValues& next = table.stages[m + 1];
    StageValues& here = table.stages[m];
    here.states = states;
    here.values.resize(states.size());
    here.best_waits.resize(states.size());
    if (states.empty()) continue;

    const Seconds tau = instance.stages[m].travel_time;
    const auto& index = prep.index[m];
    WaitUnion waits_seen(instance.max_wait(m, states.front()));

    for (std::size_t s = 0; s < states.size(); ++s) {
      const Seconds t = states[s];
      const Seconds bound = instance.max_wait(m, t);
      if (bound < 0) throw InternalError("state " + std::to_string(t) + " violates the deadline");
      double best = -std::numeric_limits<double>::infinity();
      Seconds best_wait = 0;

      auto consider = [&](Seconds w, double q) {
        ++q_evaluations;
        waits_seen.add(w);
        if (q > best) {
          best = q;
          best_wait = w;
        }
      };

      if (options.departure_cache) {
        // Waits ascend, so next-stage lookups walk forward monotonically.
        auto cursor = next.states.begin();
        auto next_value = [&](Seconds arrival) {
          cursor = std::lower_bound(cursor, next.states.end(), arrival);
          if (cursor == next.states.end() || *cursor != arrival) {
            throw InternalError("next state " + std::to_string(arrival) + " missing at stage " +
                                std::to_string(m + 1));
          }
          return next.values[static_cast<std::size_t>(cursor - next.states.begin())];
        };
        consider(0, cached_stage_reward(instance, prep, m, t) + next_value(t + tau));
        const auto [lo, hi] = index.range(t + 1, t + bound);
        for (std::size_t i = lo; i < hi; ++i) {
          const Seconds d = index.departures[i];
          const PartnerCounts counts = index.counts[i];
          const double g = stage_reward(tau, counts, counts.total() == 0, instance.econ);
          consider(d - t, g + next_value(d + tau));
        }
      } else {
        for (Seconds w : decision_space(instance, m, t)) {
          consider(w, q_value(instance, m, t, w, next));
        }
      }
      here.values[s] = best;
      here.best_waits[s] = best_wait;
    }
    decision_counts[m] = waits_seen.size();
  }

  if (stats != nullptr) {
    stats->q_evaluations = q_evaluations;
    stats->decision_counts = std::move(decision_counts);
    stats->state_counts.clear();
    for (const auto& st : space.states) stats->state_counts.push_back(st.size());
  }
  return table;
}

SolveResult extract(const DpInstance& instance, const ValueTable& table, std::size_t first_stage,
                    Seconds start) {
  SolveResult result;
  Seconds t = start;
  result.arrivals.push_back(t);
  const auto& first = table.stages[first_stage];
  auto idx = first.find(t);
  if (!idx) throw InternalError("start state missing from value table");
  result.value = first.values[*idx];
  for (std::size_t m = first_stage; m < instance.stages.size(); ++m) {
    const auto& stage = table.stages[m];
    auto i = stage.find(t);
    if (!i) throw InternalError("forward pass left the state space at stage " + std::to_string(m));
    const Seconds w = stage.best_waits[*i];
    result.waits.push_back(w);
    t = t + w + instance.stages[m].travel_time;
    result.arrivals.push_back(t);
  }
  return result;
}

}  // namespace

Seconds DpInstance::remaining_travel(std::size_t m) const {
  Seconds total = 0;
  for (std::size_t i = m; i < stages.size(); ++i) total += stages[i].travel_time;
  return total;
}

void validate(const DpInstance& instance) {
  if (instance.stages.empty()) throw InvalidArgument("instance has no stages");
  for (const auto& s : instance.stages) {
    if (s.travel_time <= 0) throw InvalidArgument("stage travel time must be positive");
  }
  if (instance.waiting_loss_rate < 0) throw InvalidArgument("waiting loss rate must be non-negative");
  validate(instance.econ);
  if (instance.arrival + instance.remaining_travel(0) > instance.deadline) {
    throw InfeasibleError("no-wait arrival " +
                          std::to_string(instance.arrival + instance.remaining_travel(0)) +
                          " exceeds deadline " + std::to_string(instance.deadline));
  }
}

std::vector<Seconds> decision_space(const DpInstance& instance, std::size_t stage, Seconds state) {
  check_stage(instance, stage);
  const Seconds bound = instance.max_wait(stage, state);
  if (bound < 0) {
    throw InvalidArgument("state " + std::to_string(state) + " cannot meet the deadline from stage " +
                          std::to_string(stage));
  }
  std::vector<Seconds> waits{0};
  for (const auto& p : instance.stages[stage].partners) {
    const Seconds w = p.predicted_departure - state;
    if (w >= 0 && w <= bound) waits.push_back(w);
  }
  std::sort(waits.begin(), waits.end());
  waits.erase(std::unique(waits.begin(), waits.end()), waits.end());
  return waits;
}

StateSpace generate_state_space(const DpInstance& instance) {
  validate(instance);
  const Prepared prep(instance);
  return generate_from(instance, prep, 0, instance.arrival);
}

std::optional<std::size_t> StageValues::find(Seconds state) const {
  auto it = std::lower_bound(states.begin(), states.end(), state);
  if (it == states.end() || *it != state) return std::nullopt;
  return static_cast<std::size_t>(it - states.begin());
}

double StageValues::value_at(Seconds state) const {
  auto i = find(state);
  if (!i) throw InternalError("state " + std::to_string(state) + " missing from value table");
  return values[*i];
}

double q_value(const DpInstance& instance, std::size_t stage, Seconds state, Seconds wait,
               const StageValues& next) {
  check_stage(instance, stage);
  if (wait < 0) throw InvalidArgument("wait must be non-negative");
  const Seconds next_state = state + wait + instance.stages[stage].travel_time;
  return scanned_stage_reward(instance, stage, state, wait) + next.value_at(next_state);
}

double evaluate_schedule(const DpInstance& instance, std::span<const Seconds> waits) {
  if (waits.size() != instance.stages.size()) {
    throw InvalidArgument("schedule length does not match the stage count");
  }
  std::vector<double> rewards;
  rewards.reserve(waits.size());
  Seconds t = instance.arrival;
  for (std::size_t m = 0; m < waits.size(); ++m) {
    if (waits[m] < 0) throw InfeasibleError("negative wait at stage " + std::to_string(m));
    rewards.push_back(scanned_stage_reward(instance, m, t, waits[m]));
    t += waits[m] + instance.stages[m].travel_time;
  }
  if (t > instance.deadline) throw InfeasibleError("schedule arrives after the deadline");
  // Summed from the destination backwards, matching the Bellman recursion.
  double total = terminal_reward(t, instance.arrival, instance.remaining_travel(0),
                                 instance.waiting_loss_rate);
  for (std::size_t m = rewards.size(); m-- > 0;) total = rewards[m] + total;
  return total;
}

ValueTable compute_value_table(const DpInstance& instance, const StateSpace& space,
                               const SolveOptions& options, SolveStats* stats) {
  validate(instance);
  const Prepared prep(instance);
  return backward_pass(instance, prep, space, options, stats);
}

SolveResult solve(const DpInstance& instance, const SolveOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  validate(instance);
  const Prepared prep(instance);
  const StateSpace space = generate_from(instance, prep, 0, instance.arrival);
  SolveStats stats;
  const ValueTable table = backward_pass(instance, prep, space, options, &stats);
  SolveResult result = extract(instance, table, 0, instance.arrival);
  stats.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  result.stats = std::move(stats);
  return result;
}

double optimal_value(const DpInstance& instance, std::size_t stage, Seconds state) {
  validate(instance);
  check_stage(instance, stage);
  const Prepared prep(instance);
  const Seconds earliest = instance.arrival + (prep.remaining[0] - prep.remaining[stage]);
  if (state < earliest) {
    throw InvalidArgument("state " + std::to_string(state) + " precedes the earliest arrival " +
                          std::to_string(earliest) + " at stage " + std::to_string(stage));
  }
  if (instance.max_wait(stage, state) < 0) {
    throw InfeasibleError("state " + std::to_string(state) + " cannot meet the deadline");
  }
  const StateSpace space = generate_from(instance, prep, stage, state);
  const ValueTable table = backward_pass(instance, prep, space, SolveOptions{}, nullptr);
  return table.stages[stage].value_at(state);
}

std::uint64_t enumeration_bound(const DpInstance& instance) {
  validate(instance);
  const Prepared prep(instance);
  std::uint64_t product = 1;
  Seconds earliest = instance.arrival;
  for (std::size_t m = 0; m < instance.stages.size(); ++m) {
    const auto [lo, hi] = prep.index[m].range(earliest, instance.deadline - prep.remaining[m]);
    const std::uint64_t options = 1 + (hi - lo);
    if (product > std::numeric_limits<std::uint64_t>::max() / options) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    product *= options;
    earliest += instance.stages[m].travel_time;
  }
  return product;
}

SolveResult brute_force_solve(const DpInstance& instance, const BruteForceOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  validate(instance);
  const std::uint64_t bound = enumeration_bound(instance);
  if (bound > options.guard) {
    throw ResourceLimitError("enumeration of up to " + std::to_string(bound) +
                             " schedules exceeds the guard of " + std::to_string(options.guard));
  }
  const std::size_t n = instance.stages.size();
  const Seconds remaining = instance.remaining_travel(0);

  std::vector<Seconds> waits(n, 0);
  std::vector<double> rewards(n, 0.0);
  std::vector<Seconds> best_waits;
  double best_value = -std::numeric_limits<double>::infinity();
  std::uint64_t leaves = 0;

  auto recurse = [&](auto&& self, std::size_t m, Seconds t) -> void {
    if (m == n) {
      ++leaves;
      double total = terminal_reward(t, instance.arrival, remaining, instance.waiting_loss_rate);
      for (std::size_t i = n; i-- > 0;) total = rewards[i] + total;
      if (total > best_value) {
        best_value = total;
        best_waits = waits;
      }
      return;
    }
    for (Seconds w : decision_space(instance, m, t)) {
      waits[m] = w;
      rewards[m] = scanned_stage_reward(instance, m, t, w);
      self(self, m + 1, t + w + instance.stages[m].travel_time);
    }
  };
  recurse(recurse, 0, instance.arrival);

  SolveResult result;
  result.waits = best_waits;
  result.value = best_value;
  Seconds t = instance.arrival;
  result.arrivals.push_back(t);
  for (std::size_t m = 0; m < n; ++m) {
    t += best_waits[m] + instance.stages[m].travel_time;
    result.arrivals.push_back(t);
  }
  result.stats.q_evaluations = leaves;
  result.stats.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

ComplexitySummary solve_stats(const SolveResult& result) {
  ComplexitySummary summary;
  summary.hub_count = result.waits.size() + 1;
  summary.state_counts = result.stats.state_counts;
  summary.q_evaluations = result.stats.q_evaluations;
  for (std::size_t c : result.stats.decision_counts) summary.n_tilde = std::max(summary.n_tilde, c);
  return summary;
}

}  // namespace platoon
