#include "livekv/messages.hpp"

namespace livekv {

std::string_view kind_name(MessageKind kind) {
  switch (kind) {
    case MessageKind::kGetReq: return "GetReq";
    case MessageKind::kGetResp: return "GetResp";
    case MessageKind::kPutReq: return "PutReq";
    case MessageKind::kUpdateReq: return "UpdateReq";
    case MessageKind::kStreamReq: return "StreamReq";
    case MessageKind::kUnstreamReq: return "UnstreamReq";
    case MessageKind::kAck: return "Ack";
    case MessageKind::kReplicate: return "Replicate";
    case MessageKind::kReplicateStream: return "ReplicateStream";
    case MessageKind::kGossipPush: return "GossipPush";
    case MessageKind::kGossipReply: return "GossipReply";
    case MessageKind::kDiffTask: return "DiffTask";
    case MessageKind::kCompactTask: return "CompactTask";
    case MessageKind::kViewDeliver: return "ViewDeliver";
    case MessageKind::kGossipTick: return "GossipTick";
    case MessageKind::kRequestTimeout: return "RequestTimeout";
    case MessageKind::kCrash: return "Crash";
    case MessageKind::kRecover: return "Recover";
  }
  return "Unknown";
}

bool is_gossip(MessageKind kind) {
  return kind == MessageKind::kGossipTick || kind == MessageKind::kGossipPush ||
         kind == MessageKind::kGossipReply;
}

std::string_view op_name(ClientOp op) {
  switch (op) {
    case ClientOp::kGet: return "get";
    case ClientOp::kPut: return "put";
    case ClientOp::kUpdate: return "update";
    case ClientOp::kStream: return "stream";
    case ClientOp::kUnstream: return "unstream";
  }
  return "unknown";
}

MessageKind request_kind(ClientOp op) {
  switch (op) {
    case ClientOp::kGet: return MessageKind::kGetReq;
    case ClientOp::kPut: return MessageKind::kPutReq;
    case ClientOp::kUpdate: return MessageKind::kUpdateReq;
    case ClientOp::kStream: return MessageKind::kStreamReq;
    case ClientOp::kUnstream: return MessageKind::kUnstreamReq;
  }
  return MessageKind::kGetReq;
}

}  // namespace livekv
