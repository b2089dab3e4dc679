#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "oracles.hpp"
#include "platoon/coordination.hpp"
#include "platoon/errors.hpp"
#include "platoon/sim.hpp"

using namespace platoon;

namespace {

std::set<TruckId> partner_ids(const DpStage& stage) {
  std::set<TruckId> out;
  for (const auto& p : stage.partners) out.insert(p.truck);
  return out;
}

bool subset(const std::set<TruckId>& a, const std::set<TruckId>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

void expect_chain_consistent(const BoardEntry& e, Seconds deadline) {
  ASSERT_EQ(e.arrivals.size(), e.route.hub_count());
  ASSERT_EQ(e.departures.size(), e.route.edge_count());
  for (std::size_t k = 0; k < e.departures.size(); ++k) {
    EXPECT_GE(e.departures[k], e.arrivals[k]);
    EXPECT_EQ(e.departures[k] + e.route.edge(k).travel_time, e.arrivals[k + 1]);
  }
  EXPECT_LE(e.arrivals.back(), deadline);
}

class LineBoard : public ::testing::Test {
 protected:
  // Hubs 0-1-2-3 with one-hour, half-hour and one-hour links.
  RoadNetwork net = oracle::line_network({3600, 1800, 3600});
};

}  // namespace

TEST(Scheme, NamesRoundTrip) {
  for (SchemeKind s : kAllSchemes) EXPECT_EQ(parse_scheme(to_string(s)), s);
  EXPECT_EQ(to_string(SchemeKind::SingleFleet), "single-fleet");
  try {
    parse_scheme("greedy");
    FAIL();
  } catch (const InvalidArgument& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("predictive"), std::string::npos);
    EXPECT_NE(msg.find("spontaneous"), std::string::npos);
    EXPECT_NE(msg.find("single-fleet"), std::string::npos);
  }
}

TEST_F(LineBoard, InitializeChainsZeroWaits) {
  HubBoard board;
  board_initialize(board, oracle::make_truck(net, 1, 0, {0, 1, 2}, 30000, 600));
  const BoardEntry& e = board.entry(1);
  EXPECT_EQ(e.departures, (std::vector<Seconds>{30000, 33600}));
  EXPECT_EQ(e.arrivals, (std::vector<Seconds>{30000, 33600, 35400}));
  EXPECT_EQ(e.position.kind, TruckPosition::Kind::Scheduled);

  board_initialize(board, oracle::make_truck(net, 2, 0, {2, 3}, 100, 0));
  EXPECT_EQ(board.entry(2).departures.size(), 1u);
  EXPECT_THROW(board_initialize(board, oracle::make_truck(net, 2, 0, {2, 3}, 100, 0)), InvalidStateError);
  EXPECT_THROW(board.entry(99), InvalidStateError);
}

TEST_F(LineBoard, SchemesFilterPartners) {
  HubBoard board;
  const Truck me = oracle::make_truck(net, 0, 0, {0, 1, 2, 3}, 1000, 900);
  const Truck colocated = oracle::make_truck(net, 1, 1, {0, 1}, 1000, 900);
  const Truck same_fleet = oracle::make_truck(net, 2, 0, {0, 1}, 1200, 900);
  const Truck distant = oracle::make_truck(net, 3, 1, {1, 2, 3}, 4000, 900);
  for (const auto& t : {me, colocated, same_fleet, distant}) board_initialize(board, t);
  board.record_arrival(1, 0, 1000);
  board.record_arrival(0, 0, 1000);
  const EconomicParams econ;

  const DpInstance pred = build_instance(board, me, 0, 1000, SchemeKind::PredictiveMultiFleet, econ);
  ASSERT_EQ(pred.stages.size(), 3u);
  EXPECT_EQ(partner_ids(pred.stages[0]), (std::set<TruckId>{1, 2}));
  EXPECT_EQ(partner_ids(pred.stages[1]), (std::set<TruckId>{3}));
  EXPECT_EQ(partner_ids(pred.stages[2]), (std::set<TruckId>{3}));
  // Board-predicted departure of the distant truck at hub 1 of its route.
  EXPECT_EQ(pred.stages[2].partners[0].predicted_departure, 4000 + 1800);

  const DpInstance single = build_instance(board, me, 0, 1000, SchemeKind::SingleFleet, econ);
  EXPECT_EQ(partner_ids(single.stages[0]), (std::set<TruckId>{2}));
  EXPECT_TRUE(single.stages[1].partners.empty());

  const DpInstance spont = build_instance(board, me, 0, 1000, SchemeKind::SpontaneousMultiFleet, econ);
  EXPECT_EQ(partner_ids(spont.stages[0]), (std::set<TruckId>{1, 2}));
  EXPECT_TRUE(spont.stages[1].partners.empty());
  EXPECT_TRUE(spont.stages[2].partners.empty());
}

TEST_F(LineBoard, BuildRequiresTruckAtHub) {
  HubBoard board;
  const Truck me = oracle::make_truck(net, 0, 0, {0, 1, 2}, 1000, 900);
  board_initialize(board, me);
  EXPECT_THROW(build_instance(board, me, 0, 1000, SchemeKind::PredictiveMultiFleet, {}), InvalidStateError);
  board.record_arrival(0, 0, 1000);
  EXPECT_NO_THROW(build_instance(board, me, 0, 1000, SchemeKind::PredictiveMultiFleet, {}));
  EXPECT_THROW(build_instance(board, me, 1, 1000, SchemeKind::PredictiveMultiFleet, {}), InvalidStateError);
  board.record_departure(0, 0);
  EXPECT_THROW(build_instance(board, me, 0, 1000, SchemeKind::PredictiveMultiFleet, {}), InvalidStateError);
}

TEST_F(LineBoard, NoPartnersLeavesScheduleUntouched) {
  HubBoard board;
  const Truck me = oracle::make_truck(net, 0, 0, {0, 1, 2}, 1000, 900);
  board_initialize(board, me);
  const BoardEntry before = board.entry(0);
  const DecisionEvent e = on_arrival(board, me, 0, 1000, SchemeKind::PredictiveMultiFleet, {});
  EXPECT_EQ(e.committed_wait, 0);
  EXPECT_TRUE(e.partners_matched.empty());
  const BoardEntry& after = board.entry(0);
  EXPECT_EQ(after.arrivals, before.arrivals);
  EXPECT_EQ(after.departures, before.departures);
  EXPECT_EQ(after.position, (TruckPosition{TruckPosition::Kind::AtHub, 0}));
}

TEST_F(LineBoard, WaitForOtherFleetShiftsChain) {
  // Instance A on a board: partner of another fleet leaves 360 s later.
  HubBoard board;
  const Truck me = oracle::make_truck(net, 0, 0, {0, 1, 2}, 36000, 900);
  const Truck other = oracle::make_truck(net, 1, 1, {0, 1}, 36360, 900);
  board_initialize(board, me);
  board_initialize(board, other);
  const DecisionEvent e = on_arrival(board, me, 0, 36000, SchemeKind::PredictiveMultiFleet, {});
  EXPECT_EQ(e.committed_wait, 360);
  EXPECT_EQ(e.partners_matched, (std::vector<TruckId>{1}));
  EXPECT_EQ(e.predicted_remaining_waits, (std::vector<Seconds>{0}));
  EXPECT_EQ(e.hub, 0);
  const BoardEntry& entry = board.entry(0);
  EXPECT_EQ(entry.departures, (std::vector<Seconds>{36360, 39960}));
  EXPECT_EQ(entry.arrivals, (std::vector<Seconds>{36000, 39960, 41760}));
}

TEST_F(LineBoard, SecondDeciderSeesFirstCommitment) {
  HubBoard board;
  const Truck a = oracle::make_truck(net, 0, 0, {0, 1}, 1000, 900);
  const Truck b = oracle::make_truck(net, 1, 1, {0, 1}, 1100, 900);
  board_initialize(board, a);
  board_initialize(board, b);
  // a waits for b's predicted zero-wait departure at 1100.
  const DecisionEvent ea = on_arrival(board, a, 0, 1000, SchemeKind::PredictiveMultiFleet, {});
  EXPECT_EQ(ea.committed_wait, 100);
  EXPECT_EQ(board.entry(0).departures[0], 1100);
  // b arrives and matches a's updated departure without waiting.
  const DecisionEvent eb = on_arrival(board, b, 0, 1100, SchemeKind::PredictiveMultiFleet, {});
  EXPECT_EQ(eb.committed_wait, 0);
  EXPECT_EQ(eb.partners_matched, (std::vector<TruckId>{0}));
}

TEST_F(LineBoard, ArrivalOrderIsEnforced) {
  HubBoard board;
  const Truck a = oracle::make_truck(net, 0, 0, {0, 1, 2}, 1000, 900);
  board_initialize(board, a);
  EXPECT_THROW(board.record_arrival(0, 1, 5000), InvalidStateError);
  board.record_arrival(0, 0, 1000);
  EXPECT_THROW(board.record_departure(0, 1), InvalidStateError);
  board.record_departure(0, 0);
  EXPECT_THROW(board.record_arrival(0, 1, 1000), InvalidStateError);
  board.record_arrival(0, 1, 4600);
  EXPECT_TRUE(board.present_at(0, 1, 4600));
  EXPECT_FALSE(board.present_at(0, 0, 4600));
}

TEST(Coordination, BoardInvariantsDuringRandomRuns) {
  ScenarioConfig config;
  config.hub_count = 12;
  config.truck_count = 120;
  config.seed = 5;
  const Scenario scenario = make_scenario(config);
  std::map<TruckId, const Truck*> trucks;
  for (const auto& t : scenario.trucks) trucks[t.id] = &t;

  for (SchemeKind scheme : kAllSchemes) {
    HubBoard board;
    EventQueue queue;
    for (const auto& [id, t] : trucks) {
      board_initialize(board, *t);
      queue.push({t->start_time, id, SimEvent::Kind::ArriveHub, 0});
    }
    int decisions = 0;
    Seconds last_time = 0;
    while (!queue.empty()) {
      const SimEvent e = queue.pop();
      EXPECT_GE(e.time, last_time);
      last_time = e.time;
      const Truck& t = *trucks.at(e.truck);
      if (e.kind == SimEvent::Kind::DepartHub) {
        board.record_departure(t.id, e.hub_index);
        queue.push({e.time + t.route.edge(e.hub_index).travel_time, t.id, SimEvent::Kind::ArriveHub,
                    e.hub_index + 1});
        continue;
      }
      if (e.hub_index + 1 == t.route.hub_count()) {
        board.record_arrival(t.id, e.hub_index, e.time);
        EXPECT_LE(e.time, t.deadline);
        continue;
      }
      // Re-reading an unchanged board gives the same instance.
      board.record_arrival(t.id, e.hub_index, e.time);
      const auto first = build_instance(board, t, e.hub_index, e.time, scheme, scenario.economics);
      EXPECT_EQ(first, build_instance(board, t, e.hub_index, e.time, scheme, scenario.economics));
      // Scheme nesting on the identical board.
      const auto pred = build_instance(board, t, e.hub_index, e.time, SchemeKind::PredictiveMultiFleet,
                                       scenario.economics);
      const auto single =
          build_instance(board, t, e.hub_index, e.time, SchemeKind::SingleFleet, scenario.economics);
      const auto spont = build_instance(board, t, e.hub_index, e.time, SchemeKind::SpontaneousMultiFleet,
                                        scenario.economics);
      for (std::size_t m = 0; m < pred.stages.size(); ++m) {
        EXPECT_TRUE(subset(partner_ids(single.stages[m]), partner_ids(pred.stages[m])));
        EXPECT_TRUE(subset(partner_ids(spont.stages[m]), partner_ids(pred.stages[m])));
      }

      const DecisionEvent d = on_arrival(board, t, e.hub_index, e.time, scheme, scenario.economics);
      ++decisions;
      const auto options = decision_space(first, 0, e.time);
      EXPECT_TRUE(std::binary_search(options.begin(), options.end(), d.committed_wait));
      for (const auto& [id, entry] : board.entries()) expect_chain_consistent(entry, trucks.at(id)->deadline);
      queue.push({e.time + d.committed_wait, t.id, SimEvent::Kind::DepartHub, e.hub_index});
    }
    EXPECT_GT(decisions, 0);
  }
}
