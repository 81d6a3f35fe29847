#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "livekv/membership.hpp"
#include "livekv/messages.hpp"
#include "livekv/store.hpp"

namespace livekv {

// Observable outcomes of a run, in dispatch order.

struct AckRecord {
  SimTime t = 0;
  std::uint64_t request = 0;
  ClientOp op = ClientOp::kPut;
  std::string key;
  std::string node;
  std::optional<VersionStamp> stamp;  // writes only
  std::string stream_id;              // stream/unstream only
};

struct GetRecord {
  SimTime t = 0;
  std::uint64_t request = 0;
  std::string key;
  std::string node;
  std::optional<Object> value;
  VersionStamp stamp;
};

struct ViewRecord {
  SimTime t = 0;
  StreamView view;
};

struct ErrorRecord {
  SimTime t = 0;
  std::optional<std::uint64_t> request;
  std::string op;
  std::string key;
  std::string error;
  std::string message;
  int line = 0;    // parse errors only
  int column = 0;  // parse errors only
};

struct EventRecord {
  SimTime t = 0;
  std::uint64_t seq = 0;
  std::string target;
  std::string kind;
};

using Record =
    std::variant<AckRecord, GetRecord, ViewRecord, ErrorRecord, EventRecord>;

}  // namespace livekv
