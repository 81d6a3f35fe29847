// Scenario runner: simulates the cluster and prints JSONL records.
//
//   livekv --nodes 3 --strategy versiondiff --seed 7 --scenario walk.lkv

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>

#include "livekv/scenario.hpp"

int main(int argc, char** argv) {
  livekv::RunConfig config;
  std::string strategy = "versiondiff";
  std::string scenario_path;

  CLI::App app{"Live-query key-value store simulator"};
  app.add_option("--nodes", config.nodes, "Number of nodes")
      ->check(CLI::PositiveNumber);
  app.add_option("--vnodes", config.vnodes_per_node, "Virtual nodes per node")
      ->check(CLI::PositiveNumber);
  app.add_option("--replication", config.replication,
                 "Replication factor (clamped to --nodes)")
      ->check(CLI::PositiveNumber);
  app.add_option("--strategy", strategy, "Change detection strategy")
      ->check(CLI::IsMember({"merge", "deferred", "versiondiff"}));
  app.add_option("--seed", config.seed, "Random seed");
  app.add_option("--min-latency", config.min_latency, "Minimum message latency")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--max-latency", config.max_latency, "Maximum message latency")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--drop-rate", config.drop_rate, "Message drop probability")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--scenario", scenario_path,
                 "Scenario file (standard input if omitted or '-')");
  app.add_flag("--trace", config.trace, "Emit one event record per dispatch");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : livekv::kExitParse;
  }
  config.strategy = livekv::parse_strategy(strategy);
  try {
    config.validate();
  } catch (const std::invalid_argument& e) {
    std::cerr << "livekv: " << e.what() << '\n';
    return livekv::kExitParse;
  }

  std::string text;
  if (scenario_path.empty() || scenario_path == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else {
    std::ifstream in(scenario_path, std::ios::binary);
    if (!in) {
      std::cerr << "livekv: cannot open " << scenario_path << '\n';
      return livekv::kExitParse;
    }
    text.assign(std::istreambuf_iterator<char>(in), {});
  }

  std::ios::sync_with_stdio(false);
  const int code = livekv::run_scenario(config, text, std::cout);
  std::cout.flush();
  return code;
}
