#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "livekv/membership.hpp"
#include "livekv/messages.hpp"
#include "livekv/ring.hpp"
#include "livekv/simulation.hpp"
#include "livekv/store.hpp"

namespace livekv {

struct NodeConfig {
  Strategy strategy = Strategy::kVersionDiff;
  int replication = 3;
  int vnodes_per_node = 100;
  int fanout = 2;
  SimTime gossip_interval = 1;
  SimTime suspect_after = 8;
  SimTime compaction_delay = 3;
  SimTime diff_delay = 2;
  SimTime request_timeout = 0;  // 0: 2 * max_latency + 1
};

/// A physical storage node: gossips membership, coordinates client requests
/// for keys it owns, serves as a replica for others, and emits stream views
/// for writes it coordinates.
class Node : public Actor {
 public:
  Node(std::string id, const std::vector<std::string>& universe,
       NodeConfig config);

  /// Schedules the first gossip tick.
  void start(Simulation& sim);

  void handle(Simulation& sim, const Message& message) override;
  void on_recover(Simulation& sim) override;

  const std::string& id() const { return id_; }
  const MembershipTable& membership() const { return membership_; }
  const RingView& ring() const { return ring_; }
  std::uint64_t write_counter() const { return write_counter_; }

  const ObjectRecord* find_record(std::string_view key) const;
  std::optional<Object> read(std::string_view key) const;
  std::vector<std::string> keys() const;

  /// The preference list this node computes for `key`.
  std::vector<std::string> preference(std::string_view key) const;

 private:
  struct PendingRequest {
    ClientRequest request;
    std::vector<std::string> targets;
    std::size_t attempt = 0;
  };

  void on_gossip_tick(Simulation& sim);
  void refresh_ring();

  void start_request(Simulation& sim, ClientRequest request);
  void try_target(Simulation& sim, std::uint64_t request_id);
  void on_timeout(Simulation& sim, const TimeoutBody& body);

  void serve(Simulation& sim, const ClientRequest& request);
  void serve_get(Simulation& sim, const ClientRequest& request);
  void serve_write(Simulation& sim, const ClientRequest& request);
  void serve_stream(Simulation& sim, const ClientRequest& request);
  void serve_unstream(Simulation& sim, const ClientRequest& request);

  void on_replicate(const ReplicateBody& body);
  void on_stream_sync(const StreamSyncBody& body);
  void on_diff_task(Simulation& sim, const DiffTaskBody& body);
  void on_compact_task(Simulation& sim, const CompactTaskBody& body);

  ObjectRecord& record_for(const std::string& key);
  void flush_deltas(Simulation& sim, ObjectRecord& record);
  void emit_views(Simulation& sim, ObjectRecord& record,
                  std::vector<StreamView> views);
  std::vector<std::string> replicas_for(const std::string& key) const;
  void send_to_replicas(Simulation& sim, const std::string& key,
                        MessageKind kind, const MessageBody& body);
  void reply(Simulation& sim, const ClientRequest& request, MessageKind kind);
  void error(Simulation& sim, const ClientRequest& request, std::string code,
             std::string message);

  std::string id_;
  NodeConfig config_;
  MembershipTable membership_;
  RingView ring_;
  std::map<std::string, ObjectRecord, std::less<>> store_;
  std::map<std::string, std::uint64_t> compaction_epoch_;
  std::map<std::uint64_t, PendingRequest> pending_;
  std::uint64_t write_counter_ = 0;
};

}  // namespace livekv
