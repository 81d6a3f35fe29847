#include "livekv/node.hpp"

#include <algorithm>
#include <utility>

#include "livekv/merkle.hpp"

namespace livekv {

Node::Node(std::string id, const std::vector<std::string>& universe,
           NodeConfig config)
    : id_(std::move(id)),
      config_(config),
      membership_(MembershipTable::bootstrap(id_, universe, 0)) {
  refresh_ring();
}

void Node::start(Simulation& sim) {
  sim.schedule(0, Message{id_, id_, MessageKind::kGossipTick, {}});
}

void Node::on_recover(Simulation& sim) {
  // A restarted failure detector gives every peer a fresh grace period.
  for (auto& [peer, rec] : membership_.records) {
    rec.last_advanced = sim.now();
    rec.status = MemberStatus::kAlive;
  }
  refresh_ring();
  start(sim);
}

const ObjectRecord* Node::find_record(std::string_view key) const {
  auto it = store_.find(key);
  return it == store_.end() ? nullptr : &it->second;
}

std::optional<Object> Node::read(std::string_view key) const {
  const ObjectRecord* rec = find_record(key);
  return rec ? read_object(*rec) : std::nullopt;
}

std::vector<std::string> Node::keys() const {
  std::vector<std::string> out;
  for (const auto& [key, rec] : store_) out.push_back(key);
  return out;
}

std::vector<std::string> Node::preference(std::string_view key) const {
  return preference_list(ring_, key, config_.replication);
}

void Node::refresh_ring() {
  auto alive = membership_.alive_members();
  if (!ring_.empty() && alive == ring_.members()) return;
  ring_ = build_ring(alive, config_.vnodes_per_node);
}

void Node::handle(Simulation& sim, const Message& msg) {
  switch (msg.kind) {
    case MessageKind::kGossipTick:
      on_gossip_tick(sim);
      break;
    case MessageKind::kGossipPush:
      membership_ = merge_tables(std::move(membership_),
                                 std::get<MembershipTable>(msg.body), sim.now());
      refresh_ring();
      sim.send(Message{id_, msg.src, MessageKind::kGossipReply, membership_});
      break;
    case MessageKind::kGossipReply:
      membership_ = merge_tables(std::move(membership_),
                                 std::get<MembershipTable>(msg.body), sim.now());
      refresh_ring();
      break;
    case MessageKind::kGetReq:
    case MessageKind::kPutReq:
    case MessageKind::kUpdateReq:
    case MessageKind::kStreamReq:
    case MessageKind::kUnstreamReq: {
      const auto& request = std::get<ClientRequest>(msg.body);
      if (msg.src == kClientSource) {
        start_request(sim, request);
      } else {
        serve(sim, request);
      }
      break;
    }
    case MessageKind::kAck:
    case MessageKind::kGetResp:
      pending_.erase(std::get<Reply>(msg.body).request_id);
      break;
    case MessageKind::kRequestTimeout:
      on_timeout(sim, std::get<TimeoutBody>(msg.body));
      break;
    case MessageKind::kReplicate:
      on_replicate(std::get<ReplicateBody>(msg.body));
      break;
    case MessageKind::kReplicateStream:
      on_stream_sync(std::get<StreamSyncBody>(msg.body));
      break;
    case MessageKind::kDiffTask:
      on_diff_task(sim, std::get<DiffTaskBody>(msg.body));
      break;
    case MessageKind::kCompactTask:
      on_compact_task(sim, std::get<CompactTaskBody>(msg.body));
      break;
    case MessageKind::kViewDeliver:
    case MessageKind::kCrash:
    case MessageKind::kRecover:
      break;  // handled by the simulation
  }
}

void Node::on_gossip_tick(Simulation& sim) {
  membership_ = tick_heartbeat(std::move(membership_), sim.now());
  membership_ = detect_failures(std::move(membership_), sim.now(),
                                config_.suspect_after);
  refresh_ring();
  for (const auto& peer :
       select_gossip_peers(membership_, config_.fanout, sim.rng())) {
    sim.send(Message{id_, peer, MessageKind::kGossipPush, membership_});
  }
  sim.schedule(config_.gossip_interval,
               Message{id_, id_, MessageKind::kGossipTick, {}});
}

// --- entry-node routing -----------------------------------------------------

void Node::start_request(Simulation& sim, ClientRequest request) {
  request.entry = id_;
  const std::uint64_t id = request.id;
  auto targets = preference(request.key);
  pending_[id] = PendingRequest{std::move(request), std::move(targets), 0};
  try_target(sim, id);
}

void Node::try_target(Simulation& sim, std::uint64_t request_id) {
  auto it = pending_.find(request_id);
  if (it == pending_.end()) return;
  PendingRequest& p = it->second;
  if (p.attempt >= p.targets.size()) {
    const ClientRequest request = p.request;
    pending_.erase(it);
    error(sim, request, "unavailable",
          "no live replica answered for key '" + request.key + "'");
    return;
  }
  const std::string& target = p.targets[p.attempt];
  if (target == id_) {
    const ClientRequest request = p.request;
    pending_.erase(it);
    serve(sim, request);
    return;
  }
  sim.send(Message{id_, target, request_kind(p.request.op), p.request});
  sim.schedule(config_.request_timeout,
               Message{id_, id_, MessageKind::kRequestTimeout,
                       TimeoutBody{request_id, p.attempt}});
}

void Node::on_timeout(Simulation& sim, const TimeoutBody& body) {
  auto it = pending_.find(body.request_id);
  if (it == pending_.end() || it->second.attempt != body.attempt) return;
  ++it->second.attempt;
  try_target(sim, body.request_id);
}

// --- coordinator ------------------------------------------------------------

void Node::serve(Simulation& sim, const ClientRequest& request) {
  switch (request.op) {
    case ClientOp::kGet:
      serve_get(sim, request);
      break;
    case ClientOp::kPut:
    case ClientOp::kUpdate:
      serve_write(sim, request);
      break;
    case ClientOp::kStream:
      serve_stream(sim, request);
      break;
    case ClientOp::kUnstream:
      serve_unstream(sim, request);
      break;
  }
}

ObjectRecord& Node::record_for(const std::string& key) {
  auto [it, inserted] = store_.try_emplace(key);
  if (inserted) it->second.key = key;
  return it->second;
}

void Node::serve_get(Simulation& sim, const ClientRequest& request) {
  GetRecord out{sim.now(), request.id, request.key, id_, std::nullopt, {}};
  if (const ObjectRecord* rec = find_record(request.key)) {
    out.value = read_object(*rec);
    out.stamp = rec->stamp;
  }
  sim.emit(out);
  reply(sim, request, MessageKind::kGetResp);
}

void Node::serve_write(Simulation& sim, const ClientRequest& request) {
  ObjectRecord& rec = record_for(request.key);
  const VersionStamp stamp{++write_counter_, id_};
  const Strategy strategy = config_.strategy;

  if (strategy == Strategy::kDeferredMerge && request.op == ClientOp::kPut) {
    flush_deltas(sim, rec);
  }

  FieldSet changed;
  bool diff_task = false;
  Object old_version, new_version;
  try {
    if (request.op == ClientOp::kPut) {
      auto out = apply_put(rec, request.object, stamp, strategy);
      changed = std::move(out.changed);
      diff_task = out.diff_task_needed;
      old_version = std::move(out.old_version);
      new_version = std::move(out.new_version);
    } else {
      const bool first_delta = rec.pending.empty();
      auto out = apply_update(rec, request.object, stamp, strategy);
      changed = std::move(out.changed);
      diff_task = out.diff_task_needed;
      old_version = std::move(out.old_version);
      new_version = std::move(out.new_version);
      if (out.deferred && first_delta) {
        sim.schedule(config_.compaction_delay,
                     Message{id_, id_, MessageKind::kCompactTask,
                             CompactTaskBody{rec.key,
                                             compaction_epoch_[rec.key]}});
      }
    }
  } catch (const StaleWrite& e) {
    error(sim, request, "stale-write", e.what());
    reply(sim, request, MessageKind::kAck);
    return;
  } catch (const std::invalid_argument& e) {
    error(sim, request, "invalid-argument", e.what());
    reply(sim, request, MessageKind::kAck);
    return;
  }

  sim.emit(AckRecord{sim.now(), request.id, request.op, rec.key, id_, stamp, {}});

  send_to_replicas(sim, rec.key, MessageKind::kReplicate,
                   ReplicateBody{rec.key, read_object(rec).value_or(Object{}),
                                 rec.stamp});

  if (diff_task) {
    // Versions are only diffed for keys somebody streams.
    if (!rec.streams.empty()) {
      sim.schedule(config_.diff_delay,
                   Message{id_, id_, MessageKind::kDiffTask,
                           DiffTaskBody{rec.key, std::move(old_version),
                                        std::move(new_version), stamp,
                                        rec.streams}});
    }
  } else if (!changed.empty()) {
    emit_views(sim, rec, compute_views(rec, changed, stamp));
  }
  reply(sim, request, MessageKind::kAck);
}

void Node::serve_stream(Simulation& sim, const ClientRequest& request) {
  ObjectRecord& rec = record_for(request.key);
  flush_deltas(sim, rec);
  try {
    register_stream(rec, request.stream);
  } catch (const DuplicateStream& e) {
    error(sim, request, "duplicate-stream", e.what());
    reply(sim, request, MessageKind::kAck);
    return;
  }
  sim.emit(AckRecord{sim.now(), request.id, request.op, rec.key, id_,
                     std::nullopt, request.stream.stream_id});
  send_to_replicas(sim, rec.key, MessageKind::kReplicateStream,
                   StreamSyncBody{rec.key, {request.stream}, {}, rec.stream_seq});
  reply(sim, request, MessageKind::kAck);
}

void Node::serve_unstream(Simulation& sim, const ClientRequest& request) {
  ObjectRecord& rec = record_for(request.key);
  flush_deltas(sim, rec);
  deregister_stream(rec, request.stream.stream_id);
  sim.emit(AckRecord{sim.now(), request.id, request.op, rec.key, id_,
                     std::nullopt, request.stream.stream_id});
  send_to_replicas(sim, rec.key, MessageKind::kReplicateStream,
                   StreamSyncBody{rec.key, {}, {request.stream.stream_id}, {}});
  reply(sim, request, MessageKind::kAck);
}

void Node::flush_deltas(Simulation& sim, ObjectRecord& rec) {
  if (rec.pending.empty()) return;
  ++compaction_epoch_[rec.key];
  const FieldSet changed = compact_deltas(rec);
  emit_views(sim, rec, compute_views(rec, changed, rec.stamp));
}

void Node::emit_views(Simulation& sim, ObjectRecord& rec,
                      std::vector<StreamView> views) {
  if (views.empty()) return;
  for (auto& view : views) {
    const std::string sink = view.sink_id;
    sim.send(Message{id_, sink, MessageKind::kViewDeliver, std::move(view)});
  }
  send_to_replicas(sim, rec.key, MessageKind::kReplicateStream,
                   StreamSyncBody{rec.key, {}, {}, rec.stream_seq});
}

void Node::on_diff_task(Simulation& sim, const DiffTaskBody& body) {
  const FieldSet changed = diff_fields(build_field_tree(body.old_version),
                                       build_field_tree(body.new_version));
  if (changed.empty()) return;
  ObjectRecord& rec = record_for(body.key);
  emit_views(sim, rec,
             compute_views(rec, body.streams, body.new_version, changed,
                           body.stamp));
}

void Node::on_compact_task(Simulation& sim, const CompactTaskBody& body) {
  auto it = store_.find(body.key);
  if (it == store_.end()) return;
  if (compaction_epoch_[body.key] != body.epoch) return;
  flush_deltas(sim, it->second);
}

// --- replica ----------------------------------------------------------------

void Node::on_replicate(const ReplicateBody& body) {
  write_counter_ = std::max(write_counter_, body.stamp.counter);
  ObjectRecord& rec = record_for(body.key);
  if (!(body.stamp > rec.stamp)) return;
  if (!rec.pending.empty()) {
    rec.pending.clear();
    ++compaction_epoch_[rec.key];
  }
  if (config_.strategy == Strategy::kVersionDiff) rec.previous = rec.current;
  rec.current = body.object;
  rec.stamp = body.stamp;
}

void Node::on_stream_sync(const StreamSyncBody& body) {
  ObjectRecord& rec = record_for(body.key);
  for (const auto& request : body.added) {
    if (rec.has_stream(request.stream_id)) continue;
    const std::uint64_t seen = rec.stream_seq[request.stream_id];
    register_stream(rec, request);
    rec.stream_seq[request.stream_id] = seen;
  }
  for (const auto& id : body.removed) deregister_stream(rec, id);
  for (const auto& [id, seq] : body.seqs) {
    auto& mine = rec.stream_seq[id];
    mine = std::max(mine, seq);
  }
}

// --- helpers ----------------------------------------------------------------

std::vector<std::string> Node::replicas_for(const std::string& key) const {
  auto out = preference(key);
  out.erase(std::remove(out.begin(), out.end(), id_), out.end());
  return out;
}

void Node::send_to_replicas(Simulation& sim, const std::string& key,
                            MessageKind kind, const MessageBody& body) {
  for (const auto& replica : replicas_for(key)) {
    sim.send(Message{id_, replica, kind, body});
  }
}

void Node::reply(Simulation& sim, const ClientRequest& request,
                 MessageKind kind) {
  if (request.entry.empty() || request.entry == id_) return;
  sim.send(Message{id_, request.entry, kind, Reply{request.id}});
}

void Node::error(Simulation& sim, const ClientRequest& request,
                 std::string code, std::string message) {
  ErrorRecord rec;
  rec.t = sim.now();
  rec.request = request.id;
  rec.op = std::string(op_name(request.op));
  rec.key = request.key;
  rec.error = std::move(code);
  rec.message = std::move(message);
  sim.emit(std::move(rec));
}

}  // namespace livekv
