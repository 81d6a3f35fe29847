#include "livekv/jsonl.hpp"

#include <json.hpp>

namespace livekv {

namespace {

std::string stamp_json(const VersionStamp& stamp) {
  return "{\"counter\":" + std::to_string(stamp.counter) +
         ",\"node\":" + json_string(stamp.coordinator) + "}";
}

std::string field_list_json(const FieldSet& fields) {
  std::string out = "[";
  bool first = true;
  for (const auto& f : fields) {
    if (!first) out += ',';
    first = false;
    out += json_string(f);
  }
  return out + "]";
}

struct LineWriter {
  std::string operator()(const AckRecord& r) const {
    std::string out = "{\"type\":\"ack\",\"t\":" + std::to_string(r.t) +
                      ",\"req\":" + std::to_string(r.request) +
                      ",\"op\":" + json_string(op_name(r.op)) +
                      ",\"key\":" + json_string(r.key) +
                      ",\"node\":" + json_string(r.node);
    if (r.stamp) out += ",\"stamp\":" + stamp_json(*r.stamp);
    if (!r.stream_id.empty()) out += ",\"stream\":" + json_string(r.stream_id);
    return out + "}";
  }

  std::string operator()(const GetRecord& r) const {
    std::string out = "{\"type\":\"get\",\"t\":" + std::to_string(r.t) +
                      ",\"req\":" + std::to_string(r.request) +
                      ",\"key\":" + json_string(r.key) +
                      ",\"node\":" + json_string(r.node);
    if (r.value) {
      out += ",\"found\":true,\"value\":" + object_json(*r.value) +
             ",\"stamp\":" + stamp_json(r.stamp);
    } else {
      out += ",\"found\":false,\"value\":null";
    }
    return out + "}";
  }

  std::string operator()(const ViewRecord& r) const {
    const StreamView& v = r.view;
    return "{\"type\":\"view\",\"stream\":" + json_string(v.stream_id) +
           ",\"key\":" + json_string(v.key) +
           ",\"seq\":" + std::to_string(v.seq) +
           ",\"updated\":" + field_list_json(v.updated) +
           ",\"view\":" + object_json(v.view) +
           ",\"stamp\":" + stamp_json(v.stamp) +
           ",\"sink\":" + json_string(v.sink_id) +
           ",\"t\":" + std::to_string(r.t) + "}";
  }

  std::string operator()(const ErrorRecord& r) const {
    std::string out = "{\"type\":\"error\",\"t\":" + std::to_string(r.t);
    if (r.request) out += ",\"req\":" + std::to_string(*r.request);
    if (!r.op.empty()) out += ",\"op\":" + json_string(r.op);
    if (!r.key.empty()) out += ",\"key\":" + json_string(r.key);
    out += ",\"error\":" + json_string(r.error);
    if (!r.message.empty()) out += ",\"message\":" + json_string(r.message);
    if (r.line > 0) {
      out += ",\"line\":" + std::to_string(r.line) +
             ",\"column\":" + std::to_string(r.column);
    }
    return out + "}";
  }

  std::string operator()(const EventRecord& r) const {
    return "{\"type\":\"event\",\"t\":" + std::to_string(r.t) +
           ",\"seq\":" + std::to_string(r.seq) +
           ",\"target\":" + json_string(r.target) +
           ",\"kind\":" + json_string(r.kind) + "}";
  }
};

}  // namespace

std::string json_string(std::string_view text) {
  return nlohmann::json(std::string(text))
      .dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

std::string value_json(const FieldValue& value) {
  if (value.is_null()) return "null";
  if (value.is_bool()) return value.as_bool() ? "true" : "false";
  if (value.is_number()) return format_number(value.as_number());
  return json_string(value.as_text());
}

std::string object_json(const Object& object) {
  std::string out = "{";
  bool first = true;
  for (const auto& [name, value] : object) {
    if (!first) out += ',';
    first = false;
    out += json_string(name);
    out += ':';
    out += value_json(value);
  }
  return out + "}";
}

std::string to_json_line(const Record& record) {
  return std::visit(LineWriter{}, record);
}

}  // namespace livekv
