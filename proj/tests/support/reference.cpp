#include "reference.hpp"

#include <algorithm>

#include "livekv/jsonl.hpp"
#include "livekv/rng.hpp"

namespace livekv::testing {

using Verb = ScenarioCommand::Verb;

PlainObject plain(const Object& object) {
  PlainObject out;
  for (const auto& [name, value] : object) out.emplace(name, value.storage());
  return out;
}

std::set<std::string> brute_force_diff(const PlainObject& a,
                                       const PlainObject& b) {
  std::set<std::string> out;
  for (const auto& [name, value] : a) {
    auto it = b.find(name);
    if (it == b.end() || !(it->second == value)) out.insert(name);
  }
  for (const auto& [name, value] : b) {
    if (a.find(name) == a.end()) out.insert(name);
  }
  return out;
}

namespace {

struct Registration {
  std::string id;
  std::set<std::string> fields;
};

class ReferenceStore {
 public:
  explicit ReferenceStore(Strategy strategy) : strategy_(strategy) {}

  void apply(const ScenarioCommand& cmd) {
    switch (cmd.verb) {
      case Verb::kPut: {
        flush(cmd.key);
        const PlainObject next = plain(cmd.object);
        const PlainObject before = store_.count(cmd.key) ? store_[cmd.key] : PlainObject{};
        const std::set<std::string> changed = brute_force_diff(before, next);
        store_[cmd.key] = next;
        emit(cmd.key, changed);
        break;
      }
      case Verb::kUpdate: {
        const PlainObject sparse = plain(cmd.object);
        if (strategy_ == Strategy::kDeferredMerge) {
          pending_[cmd.key].push_back(sparse);
          break;
        }
        PlainObject& obj = store_[cmd.key];
        std::set<std::string> changed;
        for (const auto& [name, value] : sparse) {
          auto it = obj.find(name);
          if (it == obj.end() || !(it->second == value)) changed.insert(name);
          obj[name] = value;
        }
        emit(cmd.key, changed);
        break;
      }
      case Verb::kStream:
        flush(cmd.key);
        registry_[cmd.key].push_back({cmd.stream_id, cmd.fields});
        stream_key_[cmd.stream_id] = cmd.key;
        out_.streams[cmd.stream_id];
        break;
      case Verb::kUnstream: {
        auto it = stream_key_.find(cmd.stream_id);
        if (it == stream_key_.end()) break;
        const std::string key = it->second;
        flush(key);
        auto& regs = registry_[key];
        regs.erase(std::remove_if(regs.begin(), regs.end(),
                                  [&](const Registration& r) {
                                    return r.id == cmd.stream_id;
                                  }),
                   regs.end());
        stream_key_.erase(it);
        break;
      }
      default:
        break;
    }
  }

  ReferenceOutcome finish() {
    std::vector<std::string> keys;
    for (const auto& [key, deltas] : pending_) keys.push_back(key);
    for (const auto& key : keys) flush(key);
    out_.store = store_;
    for (auto it = out_.streams.begin(); it != out_.streams.end();) {
      it = it->second.empty() ? out_.streams.erase(it) : std::next(it);
    }
    return out_;
  }

 private:
  void flush(const std::string& key) {
    auto it = pending_.find(key);
    if (it == pending_.end() || it->second.empty()) return;
    PlainObject& obj = store_[key];
    std::set<std::string> changed;
    for (const auto& delta : it->second) {
      for (const auto& [name, value] : delta) {
        auto f = obj.find(name);
        if (f == obj.end() || !(f->second == value)) changed.insert(name);
        obj[name] = value;
      }
    }
    it->second.clear();
    emit(key, changed);
  }

  void emit(const std::string& key, const std::set<std::string>& changed) {
    if (changed.empty()) return;
    const PlainObject& obj = store_[key];
    for (const auto& reg : registry_[key]) {
      Emission e;
      for (const auto& f : reg.fields) {
        if (changed.count(f)) e.updated.insert(f);
        auto v = obj.find(f);
        if (v != obj.end()) e.view.emplace(f, v->second);
      }
      if (e.updated.empty()) continue;
      auto& log = out_.streams[reg.id];
      e.seq = log.size() + 1;
      log.push_back(std::move(e));
    }
  }

  Strategy strategy_;
  std::map<std::string, PlainObject> store_;
  std::map<std::string, std::vector<PlainObject>> pending_;
  std::map<std::string, std::vector<Registration>> registry_;
  std::map<std::string, std::string> stream_key_;
  ReferenceOutcome out_;
};

}  // namespace

ReferenceOutcome reference_run(const std::vector<ScenarioCommand>& commands,
                               Strategy strategy) {
  ReferenceStore store(strategy);
  for (const auto& cmd : commands) store.apply(cmd);
  return store.finish();
}

StreamLog views_by_stream(const std::vector<Record>& records) {
  StreamLog out;
  for (const auto& r : records) {
    if (const auto* v = std::get_if<ViewRecord>(&r)) {
      out[v->view.stream_id].push_back(
          Emission{v->view.seq, v->view.updated, plain(v->view.view)});
    }
  }
  return out;
}

namespace {

FieldValue random_value(Rng& rng) {
  switch (rng.uniform(0, 6)) {
    case 0: return FieldValue(nullptr);
    case 1: return FieldValue(rng.uniform(0, 1) == 1);
    case 2: return FieldValue(0.5);
    case 3: return FieldValue(rng.uniform(0, 1) ? "x" : "y");
    default: return FieldValue(static_cast<double>(rng.uniform(0, 3)));
  }
}

std::string field_name(Rng& rng, int fields) {
  return "f" + std::to_string(rng.uniform(0, static_cast<std::uint64_t>(fields - 1)));
}

}  // namespace

std::vector<ScenarioCommand> random_script(std::uint64_t seed,
                                           const ScriptOptions& options) {
  Rng rng(seed);
  const auto count = rng.uniform(1, static_cast<std::uint64_t>(options.max_commands));
  std::vector<ScenarioCommand> out;
  std::vector<std::string> active;
  int next_stream = 0;
  for (std::uint64_t i = 0; i < count; ++i) {
    ScenarioCommand cmd;
    cmd.line = static_cast<int>(i) + 1;
    cmd.key = "k" + std::to_string(rng.uniform(0, static_cast<std::uint64_t>(options.keys - 1)));
    const auto roll = rng.uniform(0, 99);
    if (roll < 25) {
      cmd.verb = Verb::kPut;
      const auto n = rng.uniform(0, 4);
      for (std::uint64_t f = 0; f < n; ++f) {
        cmd.object.insert_or_assign(field_name(rng, options.fields), random_value(rng));
      }
    } else if (roll < 65) {
      cmd.verb = Verb::kUpdate;
      const auto n = rng.uniform(1, 3);
      for (std::uint64_t f = 0; f < n; ++f) {
        cmd.object.insert_or_assign(field_name(rng, options.fields), random_value(rng));
      }
    } else if (roll < 85 || active.empty()) {
      cmd.verb = Verb::kStream;
      const auto n = rng.uniform(1, 3);
      for (std::uint64_t f = 0; f < n; ++f) cmd.fields.insert(field_name(rng, options.fields));
      cmd.stream_id = "s" + std::to_string(next_stream++);
      cmd.sink_id = rng.uniform(0, 1) ? "sinkA" : "sinkB";
      active.push_back(cmd.stream_id);
    } else if (roll < 93 || !options.include_gets) {
      cmd.verb = Verb::kUnstream;
      cmd.key.clear();
      const auto pick = rng.uniform(0, active.size() - 1);
      cmd.stream_id = active[pick];
      active.erase(active.begin() + static_cast<std::ptrdiff_t>(pick));
    } else {
      cmd.verb = Verb::kGet;
    }
    out.push_back(std::move(cmd));
  }
  return out;
}

std::vector<ScenarioCommand> with_noop_repeats(
    const std::vector<ScenarioCommand>& commands, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<ScenarioCommand> out;
  for (const auto& cmd : commands) {
    out.push_back(cmd);
    if ((cmd.verb == Verb::kPut || cmd.verb == Verb::kUpdate) &&
        rng.bernoulli(0.5)) {
      out.push_back(cmd);
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i].line = static_cast<int>(i) + 1;
  return out;
}

std::string render_script(const std::vector<ScenarioCommand>& commands) {
  std::string out;
  for (const auto& cmd : commands) {
    switch (cmd.verb) {
      case Verb::kPut: out += "put " + cmd.key + " " + object_json(cmd.object); break;
      case Verb::kUpdate: out += "update " + cmd.key + " " + object_json(cmd.object); break;
      case Verb::kGet: out += "get " + cmd.key; break;
      case Verb::kStream: {
        out += "stream " + cmd.key + " [";
        bool first = true;
        for (const auto& f : cmd.fields) {
          if (!first) out += ",";
          first = false;
          out += f;
        }
        out += "] as " + cmd.stream_id + " to " + cmd.sink_id;
        break;
      }
      case Verb::kUnstream: out += "unstream " + cmd.stream_id; break;
      case Verb::kTick: out += "tick " + std::to_string(cmd.ticks); break;
      case Verb::kSettle: out += "settle"; break;
      case Verb::kCrash: out += "crash " + cmd.node; break;
      case Verb::kRecover: out += "recover " + cmd.node; break;
    }
    out += '\n';
  }
  return out;
}

std::map<std::string, PlainObject> lww_fold(
    const std::vector<ScenarioCommand>& commands,
    const std::vector<Record>& records) {
  std::vector<std::pair<VersionStamp, std::uint64_t>> writes;
  for (const auto& r : records) {
    const auto* ack = std::get_if<AckRecord>(&r);
    if (ack && ack->stamp) writes.emplace_back(*ack->stamp, ack->request);
  }
  std::sort(writes.begin(), writes.end());
  std::map<std::string, PlainObject> out;
  for (const auto& [stamp, index] : writes) {
    const auto& cmd = commands.at(index);
    PlainObject& obj = out[cmd.key];
    if (cmd.verb == Verb::kPut) obj.clear();
    for (const auto& [name, value] : cmd.object) obj[name] = value.storage();
  }
  return out;
}

}  // namespace livekv::testing
