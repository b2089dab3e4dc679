#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "platoon/errors.hpp"

using namespace platoon;
namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("platoon_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  // Runs the real binary; returns its exit code and keeps stderr in err().
  int platoon(const std::string& args) {
    const std::string cmd = std::string(PLATOON_CLI_PATH) + " " + args + " > " +
                            (dir_ / "stdout.txt").string() + " 2> " + (dir_ / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  std::string out() const { return read_text_file(dir_ / "stdout.txt"); }
  std::string err() const { return read_text_file(dir_ / "stderr.txt"); }

  fs::path small_scenario() {
    cli::GenerateOptions g;
    g.hubs = 10;
    g.trucks = 60;
    g.seed = 3;
    g.output = dir_ / "small.json";
    cli::cmd_generate(g);
    return g.output;
  }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, FullScalePresetShape) {
  cli::GenerateOptions g;
  g.preset = "paper";
  g.output = dir_ / "full.json";
  const auto s = cli::cmd_generate(g);
  EXPECT_EQ(s.hubs, 105u);
  EXPECT_EQ(s.trucks, 5000u);
  EXPECT_EQ(s.fleets, 855u);
  const auto cfg = config_from_json(read_text_file(g.output));
  ASSERT_TRUE(cfg.has_value());
  EXPECT_EQ(*cfg, ScenarioConfig::full_scale());
}

TEST_F(CliTest, FlagsOverridePresetAndConfig) {
  cli::GenerateOptions g;
  g.preset = "paper";
  g.hubs = 10;
  g.trucks = 4;
  g.output = dir_ / "tiny.json";
  const auto s = cli::cmd_generate(g);
  EXPECT_EQ(s.hubs, 10u);
  EXPECT_EQ(s.trucks, 4u);

  cli::GenerateOptions again;
  again.config = g.output;
  again.seed = 8;
  const ScenarioConfig c = cli::resolve_config(again);
  EXPECT_EQ(c.hub_count, 10);
  EXPECT_EQ(c.truck_count, 4);
  EXPECT_EQ(c.seed, 8u);

  cli::GenerateOptions bad;
  bad.preset = "nope";
  EXPECT_THROW(cli::resolve_config(bad), InvalidArgument);
}

TEST_F(CliTest, GenerateSmokeThroughBinary) {
  ASSERT_EQ(platoon("generate --hubs 10 --trucks 4 -o " + (dir_ / "g.json").string()), 0) << err();
  EXPECT_NE(out().find("trucks: 4"), std::string::npos);
  EXPECT_EQ(cli::load_scenario(dir_ / "g.json").trucks.size(), 4u);
}

TEST_F(CliTest, MissingOutputIsUsageError) {
  EXPECT_EQ(platoon("generate --hubs 10"), 1);
  EXPECT_EQ(platoon("generate --hubs 1 -o " + (dir_ / "x.json").string()), 1);
  EXPECT_EQ(platoon(""), 1);
}

TEST_F(CliTest, UnknownSchemeListsValidNames) {
  const fs::path s = small_scenario();
  EXPECT_EQ(platoon("run " + s.string() + " --scheme greedy -o " + (dir_ / "r").string()), 1);
  const std::string e = err();
  for (const char* name : {"predictive", "spontaneous", "single-fleet"}) {
    EXPECT_NE(e.find(name), std::string::npos) << e;
  }
}

TEST_F(CliTest, RunWritesArtifacts) {
  const fs::path s = small_scenario();
  ASSERT_EQ(platoon("run " + s.string() + " --scheme spontaneous -o " + (dir_ / "r").string()), 0) << err();
  const auto metrics = nlohmann::json::parse(read_text_file(dir_ / "r" / "metrics.json"));
  EXPECT_EQ(metrics.at("truck_count"), 60);
  const std::string platoons = read_text_file(dir_ / "r" / "platoons.csv");
  EXPECT_EQ(platoons.rfind("edge_from,edge_to,depart_s,size,members\n", 0), 0u);
  const std::string decisions = read_text_file(dir_ / "r" / "decisions.jsonl");
  EXPECT_FALSE(decisions.empty());

  ASSERT_EQ(platoon("run " + s.string() + " -o " + (dir_ / "r2").string() + " --metrics " +
                    (dir_ / "elsewhere" / "m.json").string()),
            0);
  EXPECT_TRUE(fs::exists(dir_ / "elsewhere" / "m.json"));
}

TEST_F(CliTest, CompareIsByteIdenticalOnRepeat) {
  const fs::path s = small_scenario();
  ASSERT_EQ(platoon("compare " + s.string() + " -o " + (dir_ / "a").string()), 0) << err();
  ASSERT_EQ(platoon("compare " + s.string() + " -o " + (dir_ / "b").string()), 0) << err();
  const std::string a = read_text_file(dir_ / "a" / "compare.csv");
  EXPECT_EQ(a, read_text_file(dir_ / "b" / "compare.csv"));
  EXPECT_EQ(read_text_file(dir_ / "a" / "summary.json"), read_text_file(dir_ / "b" / "summary.json"));
  EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 4);
}

TEST_F(CliTest, BenchRows) {
  const fs::path s = small_scenario();
  cli::BenchOptions b;
  b.scenario = s;
  b.samples = 0;
  b.output = dir_ / "none.csv";
  EXPECT_TRUE(cli::cmd_bench(b).empty());
  EXPECT_EQ(read_text_file(dir_ / "none.csv"), "case,n_tilde,N_i,enum_seconds,dp_seconds,values_equal\n");

  b.samples = 5;
  b.output = dir_ / "five.csv";
  const auto rows = cli::cmd_bench(b);
  ASSERT_EQ(rows.size(), 5u);
  for (const auto& r : rows) {
    ASSERT_TRUE(r.values_equal.has_value());
    EXPECT_TRUE(*r.values_equal);
  }

  // A guard of 1 trips on anything with a partner.
  b.guard = 1;
  bool skipped = false;
  for (const auto& r : cli::cmd_bench(b)) skipped |= !r.enum_seconds.has_value();
  EXPECT_TRUE(skipped);
  EXPECT_NE(read_text_file(dir_ / "five.csv").find("skipped"), std::string::npos);
}

TEST_F(CliTest, DataErrorsExitTwo) {
  write_text_file(dir_ / "broken.json", "{ not json");
  EXPECT_EQ(platoon("run " + (dir_ / "broken.json").string() + " -o " + (dir_ / "r").string()), 2);
  EXPECT_EQ(platoon("compare " + (dir_ / "missing.json").string() + " -o " + (dir_ / "r").string()), 2);
  write_text_file(dir_ / "empty.json", "{}");
  EXPECT_EQ(platoon("bench " + (dir_ / "empty.json").string()), 2);
  EXPECT_THROW(cli::load_scenario(dir_ / "broken.json"), DataError);
}
