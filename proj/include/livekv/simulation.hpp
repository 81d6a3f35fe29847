#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <queue>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "livekv/membership.hpp"
#include "livekv/messages.hpp"
#include "livekv/records.hpp"
#include "livekv/rng.hpp"

namespace livekv {

struct SimConfig {
  std::uint64_t seed = 0;
  SimTime min_latency = 1;
  SimTime max_latency = 3;
  double drop_rate = 0.0;
};

class Simulation;

/// A node in the simulated network. Handlers run one at a time.
class Actor {
 public:
  virtual ~Actor() = default;
  virtual void handle(Simulation& sim, const Message& message) = 0;
  virtual void on_recover(Simulation& sim) = 0;
};

struct SimEvent {
  SimTime time = 0;
  std::uint64_t seq = 0;
  Message message;
};

/// Deliveries seen by one sink, in arrival order.
struct SinkLog {
  std::string sink_id;
  std::vector<StreamView> entries;
};

/// Deterministic discrete-event loop. Events run in (time, seq) order; all
/// randomness comes from one seeded source consumed in dispatch order.
class Simulation {
 public:
  explicit Simulation(SimConfig config);

  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  const SimConfig& config() const { return config_; }
  SimTime now() const { return now_; }
  Rng& rng() { return rng_; }

  /// Actors are not owned.
  void add_actor(const std::string& id, Actor* actor);
  bool has_actor(std::string_view id) const;

  /// Enqueues `message` for message.dst at now + delay, bypassing the network.
  void schedule(SimTime delay, Message message);

  /// Network send: dropped with probability drop_rate (never for
  /// ViewDeliver), else delivered after a uniform latency in
  /// [min_latency, max_latency]. Each (src, dst) channel is FIFO.
  void send(Message message);

  /// Dispatches the next event. False when the queue is empty.
  bool step();

  /// Runs until only gossip traffic remains. False if max_events were
  /// dispatched first.
  bool run_until_quiescent(std::size_t max_events);

  /// Dispatches every event with time <= t, then sets now = t.
  void run_until(SimTime t);

  bool quiescent() const { return pending_work_ == 0; }
  std::size_t queued() const { return queue_.size(); }

  void crash(const std::string& id);
  void recover(const std::string& id);
  bool crashed(std::string_view id) const;

  /// Appends the view to its sink's log and emits a view record.
  void deliver_view(const StreamView& view);
  const std::map<std::string, SinkLog, std::less<>>& sinks() const {
    return sinks_;
  }

  void set_observer(std::function<void(const Record&)> observer) {
    observer_ = std::move(observer);
  }
  void set_trace(bool on) { trace_ = on; }
  void emit(Record record);

  std::uint64_t dispatched() const { return dispatched_; }

 private:
  struct Later {
    bool operator()(const SimEvent& a, const SimEvent& b) const {
      return std::pair(a.time, a.seq) > std::pair(b.time, b.seq);
    }
  };

  void enqueue(SimTime at, Message message);
  void dispatch(SimEvent& event);

  SimConfig config_;
  Rng rng_;
  SimTime now_ = 0;
  std::uint64_t next_seq_ = 0;
  std::uint64_t dispatched_ = 0;
  std::size_t pending_work_ = 0;
  std::priority_queue<SimEvent, std::vector<SimEvent>, Later> queue_;
  std::map<std::string, Actor*, std::less<>> actors_;
  std::map<std::string, bool, std::less<>> crashed_;
  std::map<std::pair<std::string, std::string>, SimTime> channel_tail_;
  std::map<std::string, SinkLog, std::less<>> sinks_;
  std::function<void(const Record&)> observer_;
  bool trace_ = false;
};

}  // namespace livekv
