#include <gtest/gtest.h>

#include "oracles.hpp"
#include "platoon/errors.hpp"
#include "platoon/reward.hpp"

using namespace platoon;

namespace {

constexpr double kTol = 1e-9;

std::vector<Truck> trucks_on_line() {
  const RoadNetwork net = oracle::line_network({100, 100, 100, 100});
  return {oracle::make_truck(net, 0, 0, {0, 1, 2, 3}, 0, 10),
          oracle::make_truck(net, 1, 1, {1, 2, 3, 4}, 0, 10),
          oracle::make_truck(net, 2, 0, {3, 4}, 0, 10),
          oracle::make_truck(net, 3, 2, {2, 1, 0}, 0, 10)};
}

}  // namespace

TEST(PotentialPartners, SharedOrderedEdgeOnly) {
  const auto trucks = trucks_on_line();
  EXPECT_EQ(potential_partners(trucks[0], 1, trucks), (std::vector<TruckId>{1}));
  EXPECT_EQ(potential_partners(trucks[0], 2, trucks), (std::vector<TruckId>{1}));
  // Truck 3 drives the reverse direction.
  EXPECT_TRUE(potential_partners(trucks[3], 0, trucks).empty());
  EXPECT_EQ(potential_partners(trucks[2], 0, trucks), (std::vector<TruckId>{1}));
}

TEST(PotentialPartners, NeverContainsSelfAndChecksRange) {
  const auto trucks = trucks_on_line();
  for (const auto& t : trucks) {
    for (std::size_t k = 0; k < t.route.edge_count(); ++k) {
      for (TruckId j : potential_partners(t, k, trucks)) EXPECT_NE(j, t.id);
    }
    EXPECT_THROW(potential_partners(t, t.route.edge_count(), trucks), InvalidArgument);
  }
}

TEST(PredictedPartners, ExactEquality) {
  const std::vector<PartnerPrediction> one{{7, 1, 120}};
  EXPECT_EQ(predicted_partners(100, 20, one), (std::vector<TruckId>{7}));
  const std::vector<PartnerPrediction> near{{1, 1, 119}, {2, 1, 121}};
  EXPECT_TRUE(predicted_partners(100, 20, near).empty());
  const std::vector<PartnerPrediction> four{{1, 0, 120}, {2, 1, 120}, {3, 2, 120}, {4, 0, 130}};
  EXPECT_EQ(predicted_partners(100, 20, four), (std::vector<TruckId>{1, 2, 3}));
  EXPECT_THROW(predicted_partners(100, -1, four), InvalidArgument);
}

TEST(CountPartners, SplitsByFleet) {
  const std::vector<PartnerPrediction> c{{1, 0, 120}, {2, 1, 120}, {3, 2, 120}, {4, 0, 130}};
  EXPECT_EQ(count_partners(120, 0, c), (PartnerCounts{1, 2}));
  EXPECT_EQ(count_partners(130, 0, c), (PartnerCounts{1, 0}));
  EXPECT_EQ(count_partners(131, 0, c), (PartnerCounts{0, 0}));
}

TEST(DeltaF, HandValues) {
  EXPECT_EQ(delta_f({0, 0}, true), 0.0);
  EXPECT_NEAR(delta_f({0, 1}, false), 0.5, kTol);
  EXPECT_NEAR(delta_f({1, 0}, false), 1.0, kTol);
  EXPECT_NEAR(delta_f({1, 1}, false), 5.0 / 6.0, kTol);
  EXPECT_THROW(delta_f({0, 0}, false), InternalError);
  EXPECT_THROW(delta_f({1, 0}, true), InternalError);
}

TEST(DeltaF, BoundedAndOneExactlyWithoutOtherFleet) {
  for (int s = 0; s <= 50; ++s) {
    for (int o = 0; o <= 50; ++o) {
      if (s + o == 0) continue;
      const double d = delta_f({s, o}, false);
      EXPECT_GE(d, 0.0);
      EXPECT_LE(d, 1.0);
      if (o == 0) {
        EXPECT_EQ(d, 1.0);
      } else {
        EXPECT_LT(d, 1.0);
      }
    }
  }
}

TEST(DeltaF, StrictlyIncreasingInSameFleetPartners) {
  for (int o = 1; o <= 50; ++o) {
    for (int s = 0; s < 50; ++s) EXPECT_LT(delta_f({s, o}, false), delta_f({s + 1, o}, false)) << s << "," << o;
  }
}

TEST(DeltaF, ClosedFormMatchesExpandedProfitDifference) {
  const EconomicParams econ;
  for (int s = 0; s <= 50; ++s) {
    for (int o = 0; o <= 50; ++o) {
      if (s + o == 0) continue;
      const double xt = econ.platoon_benefit_rate * 1.0;
      EXPECT_NEAR(delta_f({s, o}, false) * xt, oracle::delta_f_expanded(s, o) * xt, 1e-12);
    }
  }
}

TEST(StageReward, HandValues) {
  const EconomicParams econ;
  EXPECT_EQ(stage_reward(3600, {}, true, econ), 0.0);
  EXPECT_NEAR(stage_reward(3600, {0, 1}, false, econ), 2.8, kTol);
  EXPECT_NEAR(stage_reward(1800, {1, 0}, false, econ), 2.8, kTol);
  EXPECT_THROW(stage_reward(0, {}, true, econ), InvalidArgument);
}

TEST(StageReward, SingleFleetEarnsFullFollowerBenefit) {
  // With same-fleet partners only, joining adds one full follower to the
  // fleet's tally: xi * tau.
  const EconomicParams econ;
  for (int s = 1; s <= 30; ++s) {
    for (Seconds tau : {60, 1800, 5400}) {
      const double independent = econ.platoon_benefit_rate * static_cast<double>(tau) / 3600.0;
      EXPECT_NEAR(stage_reward(tau, {s, 0}, false, econ), independent, kTol);
    }
  }
}

TEST(TerminalReward, LinearNonPositiveLoss) {
  EXPECT_EQ(terminal_reward(1000, 0, 1000, 25.0), 0.0);
  EXPECT_NEAR(terminal_reward(1900, 0, 1000, 25.0), -6.25, kTol);
  EXPECT_EQ(terminal_reward(5000, 0, 1000, 0.0), 0.0);
  EXPECT_THROW(terminal_reward(999, 0, 1000, 25.0), InfeasibleError);
  for (Seconds w = 0; w < 5000; w += 137) {
    const double r = terminal_reward(1000 + w, 0, 1000, 25.0);
    EXPECT_LE(r, 0.0);
    EXPECT_NEAR(r, -25.0 * static_cast<double>(w) / 3600.0, kTol);
  }
}

TEST(AveragePlatoonProfit, SharedEvenly) {
  const EconomicParams econ;
  EXPECT_EQ(average_platoon_profit(1, 3600, econ), 0.0);
  EXPECT_NEAR(average_platoon_profit(2, 3600, econ), 2.8, kTol);
  EXPECT_NEAR(average_platoon_profit(1000, 3600, econ), 5.6, 0.01);
  EXPECT_LT(average_platoon_profit(1000, 3600, econ), 5.6);
  EXPECT_THROW(average_platoon_profit(0, 3600, econ), InvalidArgument);
}

TEST(EconomicParams, Validation) {
  EXPECT_NO_THROW(validate(EconomicParams{}));
  EXPECT_THROW(validate(EconomicParams{-1.0, 0.1, 25.0}), InvalidArgument);
  EXPECT_THROW(validate(EconomicParams{5.6, -0.1, 25.0}), InvalidArgument);
  EXPECT_THROW(validate(EconomicParams{5.6, 0.1, -25.0}), InvalidArgument);
}

TEST(Truck, Validation) {
  const RoadNetwork net = oracle::line_network({100});
  Truck t = oracle::make_truck(net, 0, 0, {0, 1}, 50, 0);
  EXPECT_NO_THROW(validate(t));
  t.deadline -= 1;
  EXPECT_THROW(validate(t), InfeasibleError);
  t.deadline += 1;
  t.waiting_loss_rate = -1;
  EXPECT_THROW(validate(t), InvalidArgument);
}
