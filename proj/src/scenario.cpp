#include "livekv/scenario.hpp"

#include <json.hpp>

#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>

#include "livekv/jsonl.hpp"

namespace livekv {

ParseError::ParseError(int line, int column, const std::string& message)
    : std::runtime_error(message), line_(line), column_(column) {}

void RunConfig::validate() const {
  if (nodes < 1) throw std::invalid_argument("nodes must be >= 1");
  if (vnodes_per_node < 1) throw std::invalid_argument("vnodes must be >= 1");
  if (replication < 1) throw std::invalid_argument("replication must be >= 1");
  if (min_latency < 0 || max_latency < min_latency) {
    throw std::invalid_argument("need 0 <= min-latency <= max-latency");
  }
  if (!(drop_rate >= 0.0 && drop_rate <= 1.0)) {
    throw std::invalid_argument("drop-rate must be in [0, 1]");
  }
  if (gossip_interval < 1) throw std::invalid_argument("gossip interval must be >= 1");
  if (suspect_after < 1) throw std::invalid_argument("suspect-after must be >= 1");
  if (compaction_delay < 0 || diff_delay < 0) {
    throw std::invalid_argument("task delays must be >= 0");
  }
}

ClusterConfig RunConfig::cluster_config() const {
  ClusterConfig c;
  c.nodes = nodes;
  c.node.strategy = strategy;
  c.node.replication = std::min(replication, nodes);
  c.node.vnodes_per_node = vnodes_per_node;
  c.node.gossip_interval = gossip_interval;
  c.node.suspect_after = suspect_after;
  c.node.compaction_delay = compaction_delay;
  c.node.diff_delay = diff_delay;
  c.sim.seed = seed;
  c.sim.min_latency = min_latency;
  c.sim.max_latency = max_latency;
  c.sim.drop_rate = drop_rate;
  return c;
}

// --- parsing ----------------------------------------------------------------

namespace {

using Verb = ScenarioCommand::Verb;

// Cuts a trailing comment, ignoring '#' inside JSON strings.
std::string_view strip_comment(std::string_view line) {
  bool in_string = false;
  bool escaped = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_string) {
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '"') {
        in_string = false;
      }
    } else if (c == '"') {
      in_string = true;
    } else if (c == '#') {
      return line.substr(0, i);
    }
  }
  return line;
}

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

class LineCursor {
 public:
  LineCursor(std::string_view text, int line) : text_(text), line_(line) {}

  void skip_space() {
    while (pos_ < text_.size() && is_space(text_[pos_])) ++pos_;
  }
  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }
  int column() const { return static_cast<int>(pos_) + 1; }
  std::size_t pos() const { return pos_; }

  [[noreturn]] void fail(const std::string& message) const {
    fail_at(column(), message);
  }
  [[noreturn]] void fail_at(int column, const std::string& message) const {
    throw ParseError(line_, column,
                     "line " + std::to_string(line_) + ", column " +
                         std::to_string(column) + ": " + message);
  }

  std::string word(std::string_view what) {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && !is_space(text_[pos_])) ++pos_;
    if (start == pos_) fail("expected " + std::string(what));
    return std::string(text_.substr(start, pos_ - start));
  }

  void expect_word(std::string_view literal) {
    const int col = (skip_space(), column());
    if (word(literal) != literal) {
      fail_at(col, "expected '" + std::string(literal) + "'");
    }
  }

  std::string_view rest() {
    skip_space();
    auto out = text_.substr(pos_);
    pos_ = text_.size();
    while (!out.empty() && is_space(out.back())) out.remove_suffix(1);
    return out;
  }

  FieldSet field_list() {
    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != '[') fail("expected '['");
    ++pos_;
    FieldSet fields;
    while (true) {
      skip_space();
      const std::size_t start = pos_;
      while (pos_ < text_.size() && text_[pos_] != ',' && text_[pos_] != ']') ++pos_;
      if (pos_ >= text_.size()) fail("unterminated field list");
      std::string_view name = text_.substr(start, pos_ - start);
      while (!name.empty() && is_space(name.back())) name.remove_suffix(1);
      if (!name.empty()) {
        try {
          validate_field_name(name);
        } catch (const std::invalid_argument& e) {
          fail_at(static_cast<int>(start) + 1, e.what());
        }
        fields.emplace(name);
      } else if (text_[pos_] == ',' || !fields.empty()) {
        fail_at(static_cast<int>(start) + 1, "empty field name");
      }
      if (text_[pos_++] == ']') break;
    }
    if (fields.empty()) fail("field list must not be empty");
    return fields;
  }

  void expect_end() {
    if (!at_end()) fail("unexpected trailing input");
  }

 private:
  std::string_view text_;
  int line_;
  std::size_t pos_ = 0;
};

std::optional<Verb> verb_from(std::string_view word) {
  if (word == "put") return Verb::kPut;
  if (word == "update") return Verb::kUpdate;
  if (word == "get") return Verb::kGet;
  if (word == "stream") return Verb::kStream;
  if (word == "unstream") return Verb::kUnstream;
  if (word == "tick") return Verb::kTick;
  if (word == "settle") return Verb::kSettle;
  if (word == "crash") return Verb::kCrash;
  if (word == "recover") return Verb::kRecover;
  return std::nullopt;
}

FieldValue scalar_from(const nlohmann::json& value, const std::string& name) {
  switch (value.type()) {
    case nlohmann::json::value_t::null:
      return FieldValue(nullptr);
    case nlohmann::json::value_t::boolean:
      return FieldValue(value.get<bool>());
    case nlohmann::json::value_t::number_integer:
    case nlohmann::json::value_t::number_unsigned:
    case nlohmann::json::value_t::number_float: {
      const double d = value.get<double>();
      if (!std::isfinite(d)) {
        throw std::invalid_argument("field '" + name + "': non-finite number");
      }
      return FieldValue(d);
    }
    case nlohmann::json::value_t::string:
      return FieldValue(value.get<std::string>());
    default:
      throw std::invalid_argument("field '" + name +
                                  "': nested values unsupported");
  }
}

// 1-based column of the first '{' or '[' nested inside the outer object.
int nested_column(std::string_view json) {
  bool in_string = false;
  bool escaped = false;
  int depth = 0;
  for (std::size_t i = 0; i < json.size(); ++i) {
    const char c = json[i];
    if (in_string) {
      if (escaped) escaped = false;
      else if (c == '\\') escaped = true;
      else if (c == '"') in_string = false;
    } else if (c == '"') {
      in_string = true;
    } else if (c == '{' || c == '[') {
      if (depth++ > 0) return static_cast<int>(i) + 1;
    }
  }
  return 1;
}

}  // namespace

Object parse_flat_object(std::string_view json) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json.begin(), json.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(0, static_cast<int>(std::max<std::size_t>(e.byte, 1)),
                     std::string("malformed object: ") + e.what());
  } catch (const nlohmann::json::out_of_range& e) {
    throw ParseError(0, 1, "non-finite number");
  }
  if (!doc.is_object()) {
    throw ParseError(0, 1, "expected a flat JSON object");
  }
  Object out;
  try {
    for (const auto& [name, value] : doc.items()) {
      validate_field_name(name);
      if (value.is_structured()) {
        throw ParseError(0, nested_column(json),
                         "field '" + name + "': nested values unsupported");
      }
      out.insert_or_assign(name, scalar_from(value, name));
    }
  } catch (const std::invalid_argument& e) {
    throw ParseError(0, 1, e.what());
  }
  return out;
}

std::vector<ScenarioCommand> parse_scenario(std::string_view text) {
  std::vector<ScenarioCommand> commands;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    LineCursor cur(strip_comment(raw), line_no);
    if (cur.at_end()) {
      if (end == text.size()) break;
      continue;
    }

    const int verb_col = cur.column();
    const std::string verb_word = cur.word("command");
    const auto verb = verb_from(verb_word);
    if (!verb) cur.fail_at(verb_col, "unknown command '" + verb_word + "'");

    ScenarioCommand cmd;
    cmd.verb = *verb;
    cmd.line = line_no;
    switch (*verb) {
      case Verb::kPut:
      case Verb::kUpdate: {
        cmd.key = cur.word("key");
        cur.skip_space();
        const int json_col = cur.column();
        const std::string_view json = cur.rest();
        if (json.empty()) cur.fail("expected a JSON object");
        try {
          cmd.object = parse_flat_object(json);
        } catch (const ParseError& e) {
          cur.fail_at(json_col + e.column() - 1, e.what());
        }
        if (cmd.verb == Verb::kUpdate && cmd.object.empty()) {
          cur.fail_at(json_col, "update needs at least one field");
        }
        break;
      }
      case Verb::kGet:
        cmd.key = cur.word("key");
        cur.expect_end();
        break;
      case Verb::kStream:
        cmd.key = cur.word("key");
        cmd.fields = cur.field_list();
        cur.expect_word("as");
        cmd.stream_id = cur.word("stream id");
        cur.expect_word("to");
        cmd.sink_id = cur.word("sink id");
        cur.expect_end();
        break;
      case Verb::kUnstream:
        cmd.stream_id = cur.word("stream id");
        cur.expect_end();
        break;
      case Verb::kTick: {
        const int col = (cur.skip_space(), cur.column());
        const std::string n = cur.word("tick count");
        long long value = 0;
        auto [p, ec] = std::from_chars(n.data(), n.data() + n.size(), value);
        if (ec != std::errc() || p != n.data() + n.size() || value < 0) {
          cur.fail_at(col, "tick count must be a non-negative integer");
        }
        cmd.ticks = static_cast<SimTime>(value);
        cur.expect_end();
        break;
      }
      case Verb::kSettle:
        cur.expect_end();
        break;
      case Verb::kCrash:
      case Verb::kRecover:
        cmd.node = cur.word("node id");
        cur.expect_end();
        break;
    }
    commands.push_back(std::move(cmd));
    if (end == text.size()) break;
  }
  return commands;
}

// --- running ----------------------------------------------------------------

ScenarioRunner::ScenarioRunner(RunConfig config,
                               std::function<void(const Record&)> sink)
    : config_(std::move(config)), sink_(std::move(sink)) {
  config_.validate();
  cluster_ = std::make_unique<Cluster>(config_.cluster_config());
  cluster_->sim().set_trace(config_.trace);
  cluster_->sim().set_observer([this](const Record& r) { record(r); });
}

void ScenarioRunner::record(const Record& r) {
  if (const auto* err = std::get_if<ErrorRecord>(&r)) {
    if (err->error == "unavailable") unavailable_ = true;
  }
  if (sink_) sink_(r);
}

void ScenarioRunner::validate(const std::vector<ScenarioCommand>& commands) const {
  for (const auto& cmd : commands) {
    if ((cmd.verb == ScenarioCommand::Verb::kCrash ||
         cmd.verb == ScenarioCommand::Verb::kRecover) &&
        !cluster_->has_node(cmd.node)) {
      throw ParseError(cmd.line, 1,
                       "line " + std::to_string(cmd.line) +
                           ": unknown node '" + cmd.node + "'");
    }
  }
}

void ScenarioRunner::issue(std::uint64_t index, const ScenarioCommand& cmd) {
  using V = ScenarioCommand::Verb;
  Simulation& sim = cluster_->sim();
  ClientRequest req;
  req.id = index;
  req.key = cmd.key;
  switch (cmd.verb) {
    case V::kGet:
      req.op = ClientOp::kGet;
      break;
    case V::kPut:
      req.op = ClientOp::kPut;
      req.object = cmd.object;
      break;
    case V::kUpdate:
      req.op = ClientOp::kUpdate;
      req.object = cmd.object;
      break;
    case V::kStream:
      req.op = ClientOp::kStream;
      if (stream_keys_.contains(cmd.stream_id)) {
        record(ErrorRecord{sim.now(), index, "stream", cmd.key,
                           "duplicate-stream",
                           "stream id '" + cmd.stream_id + "' already used",
                           0, 0});
        return;
      }
      stream_keys_[cmd.stream_id] = cmd.key;
      req.stream = StreamRequest{cmd.stream_id, cmd.key, cmd.fields, cmd.sink_id};
      break;
    case V::kUnstream: {
      req.op = ClientOp::kUnstream;
      auto it = stream_keys_.find(cmd.stream_id);
      if (it == stream_keys_.end()) {
        record(ErrorRecord{sim.now(), index, "unstream", "", "unknown-stream",
                           "no stream '" + cmd.stream_id + "'", 0, 0});
        return;
      }
      req.key = it->second;
      req.stream.stream_id = cmd.stream_id;
      req.stream.key = it->second;
      stream_keys_.erase(it);
      break;
    }
    default:
      return;
  }

  const auto& ids = cluster_->node_ids();
  const std::size_t n = ids.size();
  for (std::size_t k = 0; k < n; ++k) {
    const std::string& entry = ids[(index + k) % n];
    if (!crashed_.contains(entry)) {
      cluster_->submit(entry, std::move(req));
      return;
    }
  }
  record(ErrorRecord{sim.now(), index, std::string(op_name(req.op)), req.key,
                     "unavailable", "every node is crashed", 0, 0});
}

bool ScenarioRunner::settle() {
  Simulation& sim = cluster_->sim();
  if (sim.run_until_quiescent(config_.max_events)) return true;
  record(ErrorRecord{sim.now(), std::nullopt, "", "", "non-quiescent",
                     "event budget exhausted before quiescence", 0, 0});
  return false;
}

int ScenarioRunner::run(const std::vector<ScenarioCommand>& commands) {
  using V = ScenarioCommand::Verb;
  validate(commands);
  for (std::size_t i = 0; i < commands.size(); ++i) {
    const auto& cmd = commands[i];
    switch (cmd.verb) {
      case V::kTick:
        cluster_->sim().run_until(cluster_->sim().now() + cmd.ticks);
        break;
      case V::kSettle:
        if (!settle()) return kExitUnavailable;
        break;
      case V::kCrash:
        crashed_.insert(cmd.node);
        cluster_->schedule_crash(cmd.node);
        break;
      case V::kRecover:
        crashed_.erase(cmd.node);
        cluster_->schedule_recover(cmd.node);
        break;
      default:
        issue(i, cmd);
        break;
    }
  }
  if (!settle()) return kExitUnavailable;
  return unavailable_ ? kExitUnavailable : kExitOk;
}

namespace {

ErrorRecord parse_error_record(const ParseError& e) {
  ErrorRecord r;
  r.error = "parse";
  r.message = e.what();
  r.line = e.line();
  r.column = e.column();
  return r;
}

}  // namespace

ScenarioResult run_scenario(const RunConfig& config, std::string_view text) {
  ScenarioResult result;
  auto collect = [&](const Record& r) {
    result.records.push_back(r);
    result.jsonl += to_json_line(r);
    result.jsonl += '\n';
  };
  try {
    const auto commands = parse_scenario(text);
    ScenarioRunner runner(config, collect);
    result.exit_code = runner.run(commands);
  } catch (const ParseError& e) {
    collect(parse_error_record(e));
    result.exit_code = kExitParse;
  }
  return result;
}

int run_scenario(const RunConfig& config, std::string_view text,
                 std::ostream& out) {
  auto write = [&](const Record& r) { out << to_json_line(r) << '\n'; };
  try {
    const auto commands = parse_scenario(text);
    ScenarioRunner runner(config, write);
    return runner.run(commands);
  } catch (const ParseError& e) {
    write(parse_error_record(e));
    return kExitParse;
  }
}

}  // namespace livekv
