#include "livekv/simulation.hpp"

#include <algorithm>
#include <stdexcept>

namespace livekv {

Simulation::Simulation(SimConfig config) : config_(config), rng_(config.seed) {
  if (config_.min_latency < 0 || config_.max_latency < config_.min_latency) {
    throw std::invalid_argument("simulation: need 0 <= min_latency <= max_latency");
  }
  if (!(config_.drop_rate >= 0.0 && config_.drop_rate <= 1.0)) {
    throw std::invalid_argument("simulation: drop_rate must be in [0, 1]");
  }
}

void Simulation::add_actor(const std::string& id, Actor* actor) {
  actors_[id] = actor;
  crashed_[id] = false;
}

bool Simulation::has_actor(std::string_view id) const {
  return actors_.find(id) != actors_.end();
}

void Simulation::enqueue(SimTime at, Message message) {
  if (!is_gossip(message.kind)) ++pending_work_;
  queue_.push(SimEvent{at, next_seq_++, std::move(message)});
}

void Simulation::schedule(SimTime delay, Message message) {
  if (delay < 0) throw std::invalid_argument("schedule: negative delay");
  enqueue(now_ + delay, std::move(message));
}

void Simulation::send(Message message) {
  if (message.kind != MessageKind::kViewDeliver &&
      rng_.bernoulli(config_.drop_rate)) {
    return;
  }
  const auto latency = static_cast<SimTime>(
      rng_.uniform(static_cast<std::uint64_t>(config_.min_latency),
                   static_cast<std::uint64_t>(config_.max_latency)));
  auto& tail = channel_tail_[{message.src, message.dst}];
  const SimTime at = std::max(now_ + latency, tail);
  tail = at;
  enqueue(at, std::move(message));
}

bool Simulation::step() {
  if (queue_.empty()) return false;
  SimEvent event = queue_.top();
  queue_.pop();
  if (!is_gossip(event.message.kind)) --pending_work_;
  now_ = event.time;
  dispatch(event);
  return true;
}

void Simulation::dispatch(SimEvent& event) {
  const Message& msg = event.message;
  const bool control =
      msg.kind == MessageKind::kCrash || msg.kind == MessageKind::kRecover;
  const bool to_sink = msg.kind == MessageKind::kViewDeliver;
  if (!control && !to_sink && crashed(msg.dst)) return;
  ++dispatched_;
  if (trace_) {
    emit(EventRecord{event.time, event.seq, msg.dst,
                     std::string(kind_name(msg.kind))});
  }
  if (to_sink) {
    deliver_view(std::get<StreamView>(msg.body));
    return;
  }
  if (msg.kind == MessageKind::kCrash) {
    crash(msg.dst);
    return;
  }
  if (msg.kind == MessageKind::kRecover) {
    recover(msg.dst);
    return;
  }
  auto it = actors_.find(msg.dst);
  if (it == actors_.end()) return;
  it->second->handle(*this, msg);
}

bool Simulation::run_until_quiescent(std::size_t max_events) {
  std::size_t steps = 0;
  while (pending_work_ > 0) {
    if (steps++ >= max_events) return false;
    step();
  }
  return true;
}

void Simulation::run_until(SimTime t) {
  while (!queue_.empty() && queue_.top().time <= t) step();
  now_ = std::max(now_, t);
}

void Simulation::crash(const std::string& id) {
  auto it = crashed_.find(id);
  if (it == crashed_.end()) throw std::invalid_argument("crash: unknown node " + id);
  it->second = true;
}

void Simulation::recover(const std::string& id) {
  auto it = crashed_.find(id);
  if (it == crashed_.end()) throw std::invalid_argument("recover: unknown node " + id);
  if (!it->second) return;
  it->second = false;
  actors_.at(id)->on_recover(*this);
}

bool Simulation::crashed(std::string_view id) const {
  auto it = crashed_.find(id);
  return it != crashed_.end() && it->second;
}

void Simulation::deliver_view(const StreamView& view) {
  auto [it, inserted] = sinks_.try_emplace(view.sink_id);
  if (inserted) it->second.sink_id = view.sink_id;
  it->second.entries.push_back(view);
  emit(ViewRecord{now_, view});
}

void Simulation::emit(Record record) {
  if (observer_) observer_(record);
}

}  // namespace livekv
