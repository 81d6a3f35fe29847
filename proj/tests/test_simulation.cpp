#include <doctest.h>

#include "livekv/simulation.hpp"

using namespace livekv;

namespace {

struct Recorder : Actor {
  std::vector<std::pair<SimTime, std::string>> seen;  // (time, src)
  std::vector<std::uint64_t> ids;
  int recovered = 0;

  void handle(Simulation& sim, const Message& m) override {
    seen.emplace_back(sim.now(), m.src);
    if (const auto* r = std::get_if<ClientRequest>(&m.body)) ids.push_back(r->id);
  }
  void on_recover(Simulation&) override { ++recovered; }
};

Message msg(std::string src, std::string dst,
            MessageKind kind = MessageKind::kPutReq) {
  return Message{std::move(src), std::move(dst), kind, {}};
}

}  // namespace

TEST_CASE("schedule orders by time then scheduling order") {
  Simulation sim(SimConfig{});
  Recorder r;
  sim.add_actor("a", &r);
  sim.schedule(5, msg("late", "a"));
  sim.schedule(0, msg("first", "a"));
  sim.schedule(0, msg("second", "a"));
  CHECK(sim.run_until_quiescent(100));
  REQUIRE(r.seen.size() == 3);
  CHECK(r.seen[0] == std::pair<SimTime, std::string>{0, "first"});
  CHECK(r.seen[1] == std::pair<SimTime, std::string>{0, "second"});
  CHECK(r.seen[2] == std::pair<SimTime, std::string>{5, "late"});
}

TEST_CASE("empty queue is quiescent") {
  Simulation sim(SimConfig{});
  CHECK(sim.quiescent());
  CHECK(sim.run_until_quiescent(0));
  CHECK_FALSE(sim.step());
}

TEST_CASE("send latency and drop") {
  SUBCASE("fixed latency") {
    Simulation sim(SimConfig{1, 1, 1, 0.0});
    Recorder r;
    sim.add_actor("a", &r);
    sim.send(msg("x", "a"));
    sim.run_until_quiescent(10);
    REQUIRE(r.seen.size() == 1);
    CHECK(r.seen[0].first == 1);
  }
  SUBCASE("drop rate 1 never delivers") {
    Simulation sim(SimConfig{1, 1, 3, 1.0});
    Recorder r;
    sim.add_actor("a", &r);
    for (int i = 0; i < 20; ++i) sim.send(msg("x", "a"));
    CHECK(sim.queued() == 0);
    sim.run_until_quiescent(10);
    CHECK(r.seen.empty());
  }
  SUBCASE("latencies stay in range and channels are FIFO") {
    Simulation sim(SimConfig{3, 1, 5, 0.0});
    Recorder r;
    sim.add_actor("a", &r);
    for (std::uint64_t i = 0; i < 50; ++i) {
      Message m = msg("x", "a");
      ClientRequest req;
      req.id = i;
      m.body = req;
      sim.send(m);
    }
    sim.run_until_quiescent(100);
    REQUIRE(r.ids.size() == 50);
    for (std::uint64_t i = 0; i < 50; ++i) CHECK(r.ids[i] == i);
    CHECK(r.seen.front().first >= 1);
    CHECK(r.seen.front().first <= 5);
  }
  SUBCASE("independent channels may reorder") {
    Simulation sim(SimConfig{3, 1, 5, 0.0});
    Recorder r;
    sim.add_actor("a", &r);
    for (int i = 0; i < 50; ++i) sim.send(msg("src" + std::to_string(i), "a"));
    sim.run_until_quiescent(100);
    REQUIRE(r.seen.size() == 50);
    bool reordered = false;
    for (std::size_t i = 0; i < 50; ++i) {
      CHECK(r.seen[i].first >= 1);
      CHECK(r.seen[i].first <= 5);
      reordered |= r.seen[i].second != "src" + std::to_string(i);
    }
    CHECK(reordered);
  }
  SUBCASE("replays under a fixed seed") {
    auto run = [] {
      Simulation sim(SimConfig{77, 1, 9, 0.3});
      Recorder r;
      sim.add_actor("a", &r);
      sim.add_actor("b", &r);
      for (int i = 0; i < 100; ++i) sim.send(msg(i % 2 ? "a" : "b", i % 3 ? "a" : "b"));
      sim.run_until_quiescent(1000);
      return r.seen;
    };
    CHECK(run() == run());
  }
}

TEST_CASE("crashed nodes drop their events") {
  Simulation sim(SimConfig{});
  Recorder r;
  sim.add_actor("a", &r);
  sim.crash("a");
  sim.crash("a");
  CHECK(sim.crashed("a"));
  sim.schedule(0, msg("x", "a"));
  sim.run_until_quiescent(10);
  CHECK(r.seen.empty());
  sim.recover("a");
  CHECK(r.recovered == 1);
  sim.recover("a");
  CHECK(r.recovered == 1);
  sim.schedule(0, msg("y", "a"));
  sim.run_until_quiescent(10);
  CHECK(r.seen.size() == 1);
}

TEST_CASE("gossip traffic does not block quiescence") {
  Simulation sim(SimConfig{});
  Recorder r;
  sim.add_actor("a", &r);
  sim.schedule(1, msg("a", "a", MessageKind::kGossipTick));
  CHECK(sim.quiescent());
  sim.schedule(3, msg("x", "a"));
  CHECK_FALSE(sim.quiescent());
  CHECK(sim.run_until_quiescent(10));
  CHECK(r.seen.size() == 2);
}

TEST_CASE("run_until dispatches through the target time") {
  Simulation sim(SimConfig{});
  Recorder r;
  sim.add_actor("a", &r);
  sim.schedule(2, msg("x", "a"));
  sim.schedule(3, msg("y", "a"));
  sim.run_until(2);
  CHECK(r.seen.size() == 1);
  CHECK(sim.now() == 2);
  sim.run_until(10);
  CHECK(sim.now() == 10);
  CHECK(r.seen.size() == 2);
}

TEST_CASE("view delivery appends to the sink log in order") {
  Simulation sim(SimConfig{});
  std::vector<Record> records;
  sim.set_observer([&](const Record& r) { records.push_back(r); });
  for (std::uint64_t seq = 1; seq <= 3; ++seq) {
    StreamView v;
    v.stream_id = "s";
    v.seq = seq;
    v.sink_id = "sink";
    sim.send(Message{"n1", "sink", MessageKind::kViewDeliver, v});
  }
  sim.run_until_quiescent(10);
  const auto& log = sim.sinks().at("sink").entries;
  REQUIRE(log.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(log[i].seq == i + 1);
  CHECK(records.size() == 3);
}

TEST_CASE("trace emits one event record per dispatch") {
  Simulation sim(SimConfig{});
  Recorder r;
  sim.add_actor("a", &r);
  std::vector<Record> records;
  sim.set_observer([&](const Record& rec) { records.push_back(rec); });
  sim.set_trace(true);
  sim.schedule(0, msg("x", "a"));
  sim.schedule(1, msg("x", "a", MessageKind::kDiffTask));
  sim.run_until_quiescent(10);
  REQUIRE(records.size() == 2);
  const auto& e = std::get<EventRecord>(records[1]);
  CHECK(e.t == 1);
  CHECK(e.seq == 1);
  CHECK(e.target == "a");
  CHECK(e.kind == "DiffTask");
}
