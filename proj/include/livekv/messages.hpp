#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "livekv/field_value.hpp"
#include "livekv/membership.hpp"
#include "livekv/store.hpp"

namespace livekv {

enum class MessageKind {
  kGetReq,
  kGetResp,
  kPutReq,
  kUpdateReq,
  kStreamReq,
  kUnstreamReq,
  kAck,
  kReplicate,
  kReplicateStream,
  kGossipPush,
  kGossipReply,
  kDiffTask,
  kCompactTask,
  kViewDeliver,
  // Internal tasks.
  kGossipTick,
  kRequestTimeout,
  kCrash,
  kRecover,
};

std::string_view kind_name(MessageKind kind);

/// Gossip traffic regenerates forever and does not count against quiescence.
bool is_gossip(MessageKind kind);

enum class ClientOp { kGet, kPut, kUpdate, kStream, kUnstream };

std::string_view op_name(ClientOp op);
MessageKind request_kind(ClientOp op);

/// Source id used for requests injected by the scenario driver.
inline constexpr std::string_view kClientSource = "client";

struct ClientRequest {
  std::uint64_t id = 0;
  ClientOp op = ClientOp::kGet;
  std::string key;
  Object object;          // put: full object, update: sparse object
  StreamRequest stream;   // stream: full request, unstream: stream_id only
  std::string entry;      // node the client contacted
};

struct Reply {
  std::uint64_t request_id = 0;
};

struct ReplicateBody {
  std::string key;
  Object object;
  VersionStamp stamp;
};

/// Stream registry changes pushed from a coordinator to its replicas.
struct StreamSyncBody {
  std::string key;
  std::vector<StreamRequest> added;
  std::vector<std::string> removed;
  std::map<std::string, std::uint64_t> seqs;
};

struct DiffTaskBody {
  std::string key;
  Object old_version;
  Object new_version;
  VersionStamp stamp;
  std::vector<StreamRequest> streams;  // registrations at write time
};

struct CompactTaskBody {
  std::string key;
  std::uint64_t epoch = 0;
};

struct TimeoutBody {
  std::uint64_t request_id = 0;
  std::size_t attempt = 0;
};

using MessageBody =
    std::variant<std::monostate, ClientRequest, Reply, ReplicateBody,
                 StreamSyncBody, MembershipTable, DiffTaskBody,
                 CompactTaskBody, StreamView, TimeoutBody>;

struct Message {
  std::string src;
  std::string dst;
  MessageKind kind = MessageKind::kGossipTick;
  MessageBody body;
};

}  // namespace livekv
