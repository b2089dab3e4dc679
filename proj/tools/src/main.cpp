#include <iomanip>
#include <iostream>
#include <stdexcept>

#include <CLI11.hpp>

#include "commands.hpp"
#include "platoon/errors.hpp"

namespace {

constexpr int kUsage = 1;
constexpr int kData = 2;
constexpr int kInternal = 3;

}  // namespace

int main(int argc, char** argv) {
  using namespace platoon;
  using namespace platoon::cli;

  CLI::App app{"Hub-based truck platoon coordination simulator"};
  app.require_subcommand(1);

  GenerateOptions gen;
  auto* generate = app.add_subcommand("generate", "Generate a seeded scenario");
  generate->add_option("--preset", gen.preset, "Named preset (paper)");
  generate->add_option("--config", gen.config, "Scenario or config JSON to start from")->check(CLI::ExistingFile);
  generate->add_option("--seed", gen.seed, "Random seed");
  generate->add_option("--trucks", gen.trucks, "Number of trucks");
  generate->add_option("--hubs", gen.hubs, "Number of hubs");
  generate->add_option("--fleets", gen.fleets, "Fleet preset: paper, singletons, one-fleet");
  generate->add_option("-o,--out", gen.output, "Output scenario JSON")->required();

  RunOptions run;
  std::string run_scheme = "predictive";
  auto* run_cmd = app.add_subcommand("run", "Simulate one coordination scheme");
  run_cmd->add_option("scenario", run.scenario, "Scenario JSON")->required();
  run_cmd->add_option("--scheme", run_scheme, "predictive | spontaneous | single-fleet");
  run_cmd->add_option("-o,--out", run.out_dir, "Output directory")->required();
  run_cmd->add_option("--metrics", run.metrics_path, "Override metrics.json path");
  run_cmd->add_option("--platoons", run.platoons_path, "Override platoons.csv path");
  run_cmd->add_option("--decisions", run.decisions_path, "Override decisions.jsonl path");

  CompareOptions cmp;
  auto* compare = app.add_subcommand("compare", "Simulate all three schemes side by side");
  compare->add_option("scenario", cmp.scenario, "Scenario JSON")->required();
  compare->add_option("-o,--out", cmp.out_dir, "Output directory")->required();
  compare->add_option("--csv", cmp.csv_path, "Override compare.csv path");

  BenchOptions bench;
  auto* bench_cmd = app.add_subcommand("bench", "Time DP against enumeration on sampled decisions");
  bench_cmd->add_option("scenario", bench.scenario, "Scenario JSON")->required();
  bench_cmd->add_option("--samples", bench.samples, "Number of sampled decisions");
  bench_cmd->add_option("--guard", bench.guard, "Enumeration limit per case");
  bench_cmd->add_option("-o,--out", bench.output, "Output CSV (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*generate) {
      GenerateSummary s;
      try {
        s = cmd_generate(gen);
      } catch (const InvalidArgument& e) {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return kUsage;
      }
      std::cout << "hubs: " << s.hubs << "\nsegments: " << s.segments << "\ntrucks: " << s.trucks
                << "\nfleets: " << s.fleets << std::fixed << std::setprecision(2)
                << "\nmean route length: " << s.mean_route_hubs << " hubs, " << s.mean_route_hours
                << " h\n";
    } else if (*run_cmd) {
      try {
        run.scheme = parse_scheme(run_scheme);
      } catch (const InvalidArgument& e) {
        std::cerr << e.what() << '\n';
        return kUsage;
      }
      const auto result = cmd_run(run);
      std::cout << "decisions: " << result.decisions.size()
                << "\nplatoons: " << result.metrics.platoon_count
                << "\ntotal reward: " << format_double(result.metrics.total_reward) << '\n';
    } else if (*compare) {
      cmp.threads = threads_from_env();
      const auto comparison = cmd_compare(cmp);
      for (const auto& r : comparison.runs) {
        std::cout << to_string(r.scheme) << ": total reward " << format_double(r.metrics.total_reward)
                  << ", platoons " << r.metrics.platoon_count << '\n';
      }
    } else if (*bench_cmd) {
      cmd_bench(bench);
    }
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kData;
  } catch (const std::logic_error& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return 0;
}
