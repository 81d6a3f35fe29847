#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "livekv/node.hpp"
#include "livekv/simulation.hpp"

namespace livekv {

struct ClusterConfig {
  int nodes = 1;
  NodeConfig node;
  SimConfig sim;
};

/// Owns a simulation and its nodes "n1".."nN", all alive and gossiping.
class Cluster {
 public:
  explicit Cluster(ClusterConfig config);

  Simulation& sim() { return sim_; }
  const Simulation& sim() const { return sim_; }
  const ClusterConfig& config() const { return config_; }

  const std::vector<std::string>& node_ids() const { return ids_; }
  Node& node(std::string_view id);
  const Node& node(std::string_view id) const;
  bool has_node(std::string_view id) const;

  /// Injects a client request at `entry` at the current time.
  void submit(const std::string& entry, ClientRequest request);
  /// Scheduled crash/recover, ordered with other events at the current time.
  void schedule_crash(const std::string& id);
  void schedule_recover(const std::string& id);

 private:
  ClusterConfig config_;
  Simulation sim_;
  std::vector<std::string> ids_;
  std::vector<std::unique_ptr<Node>> nodes_;
};

/// "n1".."nN".
std::vector<std::string> node_names(int count);

}  // namespace livekv
