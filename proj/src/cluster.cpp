#include "livekv/cluster.hpp"

#include <algorithm>
#include <stdexcept>

namespace livekv {

std::vector<std::string> node_names(int count) {
  std::vector<std::string> out;
  for (int i = 1; i <= count; ++i) out.push_back("n" + std::to_string(i));
  return out;
}

Cluster::Cluster(ClusterConfig config)
    : config_(config), sim_(config.sim), ids_(node_names(config.nodes)) {
  if (config_.nodes < 1) {
    throw std::invalid_argument("cluster: nodes must be >= 1");
  }
  if (config_.node.replication < 1) {
    throw std::invalid_argument("cluster: replication must be >= 1");
  }
  config_.node.replication = std::min(config_.node.replication, config_.nodes);
  if (config_.node.request_timeout <= 0) {
    config_.node.request_timeout = 2 * config_.sim.max_latency + 1;
  }
  for (const auto& id : ids_) {
    nodes_.push_back(std::make_unique<Node>(id, ids_, config_.node));
    sim_.add_actor(id, nodes_.back().get());
  }
  for (auto& node : nodes_) node->start(sim_);
}

Node& Cluster::node(std::string_view id) {
  for (auto& n : nodes_) {
    if (n->id() == id) return *n;
  }
  throw std::out_of_range("cluster: unknown node " + std::string(id));
}

const Node& Cluster::node(std::string_view id) const {
  return const_cast<Cluster*>(this)->node(id);
}

bool Cluster::has_node(std::string_view id) const {
  return std::find(ids_.begin(), ids_.end(), id) != ids_.end();
}

void Cluster::submit(const std::string& entry, ClientRequest request) {
  const MessageKind kind = request_kind(request.op);
  sim_.schedule(0, Message{std::string(kClientSource), entry, kind,
                           std::move(request)});
}

void Cluster::schedule_crash(const std::string& id) {
  sim_.schedule(0, Message{std::string(kClientSource), id, MessageKind::kCrash, {}});
}

void Cluster::schedule_recover(const std::string& id) {
  sim_.schedule(0,
                Message{std::string(kClientSource), id, MessageKind::kRecover, {}});
}

}  // namespace livekv
