#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include <filesystem>

#include "oracles.hpp"
#include "platoon/errors.hpp"
#include "platoon/rng.hpp"
#include "platoon/serialization.hpp"

using namespace platoon;

namespace {

Scenario small_scenario(std::uint64_t seed = 4) {
  ScenarioConfig c;
  c.hub_count = 9;
  c.truck_count = 40;
  c.seed = seed;
  return make_scenario(c);
}

}  // namespace

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(2.0), "2");
  EXPECT_EQ(format_double(-6.25), "-6.25");
  for (double v : {1.0 / 3.0, 5.6 * 0.1, 1e-17, 123456789.125}) EXPECT_EQ(std::stod(format_double(v)), v);
}

TEST(ScenarioJson, RoundTrip) {
  const Scenario s = small_scenario();
  const std::string text = scenario_to_json(s);
  const Scenario back = scenario_from_json(text);
  EXPECT_EQ(back, s);
  EXPECT_EQ(scenario_to_json(back), text);
  EXPECT_TRUE(json_has_scenario(text));
  EXPECT_FALSE(config_from_json(text).has_value());
}

TEST(ScenarioJson, EmbeddedConfigRegenerates) {
  ScenarioConfig c;
  c.hub_count = 7;
  c.truck_count = 25;
  c.seed = 12;
  c.fleet_preset = "singletons";
  const std::string text = scenario_to_json(make_scenario(c), &c);
  const auto back = config_from_json(text);
  ASSERT_TRUE(back.has_value());
  EXPECT_EQ(*back, c);
  EXPECT_EQ(make_scenario(*back), make_scenario(c));
}

TEST(ConfigJson, BareDocumentRoundTrip) {
  ScenarioConfig c = ScenarioConfig::full_scale();
  c.seed = 99;
  c.fleets = FleetDistribution{{{2, 5}, {1, 10}}};
  c.truck_count = 20;
  const auto back = config_from_json(config_to_json(c));
  ASSERT_TRUE(back.has_value());
  EXPECT_EQ(*back, c);
  EXPECT_FALSE(json_has_scenario(config_to_json(c)));
}

TEST(ScenarioJson, MalformedInputIsDataError) {
  EXPECT_THROW(scenario_from_json("{"), DataError);
  EXPECT_THROW(scenario_from_json("[]"), DataError);
  EXPECT_THROW(scenario_from_json(R"({"hubs": [], "segments": []})"), DataError);

  auto doc = nlohmann::json::parse(scenario_to_json(small_scenario()));
  auto broken = doc;
  broken["trucks"][0]["route"] = {0, 0};
  EXPECT_THROW(scenario_from_json(broken.dump()), DataError);
  broken = doc;
  broken["trucks"][0]["deadline_s"] = 0;
  EXPECT_THROW(scenario_from_json(broken.dump()), DataError);
  broken = doc;
  broken["segments"][0]["travel_time_s"] = "fast";
  EXPECT_THROW(scenario_from_json(broken.dump()), DataError);
  broken = doc;
  broken["segments"][0]["travel_time_s"] = -5;
  EXPECT_THROW(scenario_from_json(broken.dump()), DataError);
}

TEST(ConfigJson, InvalidConfigIsDataError) {
  EXPECT_THROW(config_from_json(R"({"hub_count": 1})"), DataError);
  EXPECT_THROW(config_from_json("3"), DataError);
  EXPECT_THROW(config_from_json(R"({"truck_count": "many"})"), DataError);
}

TEST(InstanceJson, RoundTripRandomInstances) {
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    const DpInstance inst = oracle::random_instance(rng, {});
    EXPECT_EQ(instance_from_json(instance_to_json(inst)), inst);
  }
  EXPECT_THROW(instance_from_json(R"({"arrival_s": 0})"), DataError);
  EXPECT_THROW(instance_from_json(R"({"arrival_s": 0, "deadline_s": 10, "own_fleet": 0,
                                       "epsilon_per_h": 25, "stages": []})"),
               DataError);
}

TEST(Writers, PlatoonsCsv) {
  const std::vector<PlatoonRecord> p{{{3, 4}, 30000, {1, 5, 9}}, {{4, 3}, 30010, {2, 7}}};
  EXPECT_EQ(platoons_to_csv(p),
            "edge_from,edge_to,depart_s,size,members\n3,4,30000,3,1;5;9\n4,3,30010,2,2;7\n");
  EXPECT_EQ(platoons_to_csv({}), "edge_from,edge_to,depart_s,size,members\n");
}

TEST(Writers, DecisionsJsonl) {
  DecisionEvent d;
  d.truck = 4;
  d.hub = 2;
  d.time = 31000;
  d.committed_wait = 60;
  d.partners_matched = {1, 8};
  const std::vector<DecisionEvent> ds{d, d};
  const std::string text = decisions_to_jsonl(ds);
  std::size_t lines = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    const std::size_t end = text.find('\n', start);
    ASSERT_NE(end, std::string::npos);
    const auto j = nlohmann::json::parse(text.substr(start, end - start));
    EXPECT_EQ(j.at("t"), 31000);
    EXPECT_EQ(j.at("truck"), 4);
    EXPECT_EQ(j.at("hub"), 2);
    EXPECT_EQ(j.at("wait_s"), 60);
    EXPECT_EQ(j.at("partners_matched"), (std::vector<int>{1, 8}));
    start = end + 1;
    ++lines;
  }
  EXPECT_EQ(lines, 2u);
}

TEST(Writers, MetricsAndComparison) {
  const auto c = compare_schemes(small_scenario(), 1);
  const auto& m = c.run(SchemeKind::PredictiveMultiFleet).metrics;
  const auto j = nlohmann::json::parse(metrics_to_json(m));
  EXPECT_EQ(j.at("co2_reduction"), j.at("fuel_saving"));
  EXPECT_EQ(j.at("n_platoons").get<std::size_t>(), m.platoon_count);
  EXPECT_DOUBLE_EQ(j.at("total_reward").get<double>(), m.total_reward);
  EXPECT_EQ(j.at("fleet_reward").size(), m.fleet_reward.size());
  EXPECT_EQ(j.at("hubs").size(), m.hub_formation_rate.size());

  const std::string csv = comparison_to_csv(c);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "scheme,total_reward,fuel_saving,system_platooning_rate,n_platoons,mean_wait_s");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  EXPECT_NE(csv.find("\npredictive,"), std::string::npos);
  EXPECT_NE(csv.find("\nspontaneous,"), std::string::npos);
  EXPECT_NE(csv.find("\nsingle-fleet,"), std::string::npos);

  const auto summary = nlohmann::json::parse(comparison_summary_json(c));
  EXPECT_TRUE(summary.contains("predictive_over_single_fleet"));
  EXPECT_EQ(summary.at("total_reward").size(), 3u);
}

TEST(Writers, ZeroRewardRatioIsNull) {
  Scenario s;
  s.network = oracle::line_network({600});
  const auto summary = nlohmann::json::parse(comparison_summary_json(compare_schemes(s, 1)));
  EXPECT_TRUE(summary.at("predictive_over_single_fleet").is_null());
}

TEST(Writers, BenchCsv) {
  const std::vector<BenchRow> rows{{0, 12, 4, 0.5, 0.25, true}, {1, 900, 7, std::nullopt, 0.125, std::nullopt}};
  EXPECT_EQ(bench_to_csv(rows),
            "case,n_tilde,N_i,enum_seconds,dp_seconds,values_equal\n"
            "0,12,4,0.5,0.25,true\n"
            "1,900,7,skipped,0.125,skipped\n");
}

TEST(Files, WriteCreatesDirectoriesAndReadsBack) {
  const auto dir = std::filesystem::temp_directory_path() / "platoon_serialization_test" / "nested";
  std::filesystem::remove_all(dir.parent_path());
  write_text_file(dir / "x.txt", "hello\n");
  EXPECT_EQ(read_text_file(dir / "x.txt"), "hello\n");
  EXPECT_THROW(read_text_file(dir / "missing.txt"), DataError);
  std::filesystem::remove_all(dir.parent_path());
}
