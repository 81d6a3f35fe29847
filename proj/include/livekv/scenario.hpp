#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "livekv/cluster.hpp"
#include "livekv/records.hpp"

namespace livekv {

struct RunConfig {
  int nodes = 1;
  int vnodes_per_node = 100;
  int replication = 3;
  Strategy strategy = Strategy::kVersionDiff;
  std::uint64_t seed = 0;
  SimTime min_latency = 1;
  SimTime max_latency = 3;
  double drop_rate = 0.0;
  SimTime gossip_interval = 1;
  SimTime suspect_after = 8;
  SimTime compaction_delay = 3;
  SimTime diff_delay = 2;
  std::size_t max_events = 10'000'000;  // per settle
  bool trace = false;

  /// Throws std::invalid_argument on an inconsistent configuration.
  void validate() const;
  ClusterConfig cluster_config() const;
};

struct ScenarioCommand {
  enum class Verb { kPut, kUpdate, kGet, kStream, kUnstream, kTick, kSettle, kCrash, kRecover };

  Verb verb = Verb::kSettle;
  int line = 0;
  std::string key;
  Object object;
  FieldSet fields;
  std::string stream_id;
  std::string sink_id;
  SimTime ticks = 0;
  std::string node;

  bool is_client() const {
    return verb == Verb::kPut || verb == Verb::kUpdate || verb == Verb::kGet ||
           verb == Verb::kStream || verb == Verb::kUnstream;
  }
};

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& message);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// One command per line; '#' outside JSON strings starts a comment.
/// Throws ParseError naming the line and column.
std::vector<ScenarioCommand> parse_scenario(std::string_view text);

/// Parses a flat JSON object of scalars. Throws ParseError with column
/// relative to the start of `json` (1-based) and line 0.
Object parse_flat_object(std::string_view json);

enum ExitCode : int { kExitOk = 0, kExitParse = 2, kExitUnavailable = 3 };

/// Drives a cluster through a scenario. Client command i enters through
/// node (i mod nodes); `tick N` advances time, `settle` runs to quiescence,
/// and the script ends with an implicit settle.
class ScenarioRunner {
 public:
  ScenarioRunner(RunConfig config, std::function<void(const Record&)> sink);

  /// Rejects commands naming unknown nodes. Throws ParseError.
  void validate(const std::vector<ScenarioCommand>& commands) const;

  /// Runs every command and returns the exit code.
  int run(const std::vector<ScenarioCommand>& commands);

  Cluster& cluster() { return *cluster_; }
  const RunConfig& config() const { return config_; }

 private:
  void issue(std::uint64_t index, const ScenarioCommand& command);
  bool settle();
  void record(const Record& r);

  RunConfig config_;
  std::function<void(const Record&)> sink_;
  std::unique_ptr<Cluster> cluster_;
  std::set<std::string> crashed_;
  std::map<std::string, std::string> stream_keys_;
  bool unavailable_ = false;
};

struct ScenarioResult {
  int exit_code = kExitOk;
  std::vector<Record> records;
  std::string jsonl;
};

/// Parses and runs a scenario, collecting records and their JSONL text.
ScenarioResult run_scenario(const RunConfig& config, std::string_view text);

/// Same, streaming JSONL lines to `out`.
int run_scenario(const RunConfig& config, std::string_view text,
                 std::ostream& out);

}  // namespace livekv
