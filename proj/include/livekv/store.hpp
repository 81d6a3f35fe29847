#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "livekv/field_value.hpp"

namespace livekv {

/// How a node detects which fields a write changed.
enum class Strategy {
  kMergeOnWrite,   // sparse update merged into the stored object before ack
  kDeferredMerge,  // sparse deltas persisted, folded in later by compaction
  kVersionDiff,    // full versions kept, Merkle-diffed after the ack
};

std::string_view strategy_name(Strategy s);
/// Accepts "merge", "deferred", "versiondiff". Throws std::invalid_argument.
Strategy parse_strategy(std::string_view name);

/// Write version; ordered by (counter, coordinator). Last writer wins.
struct VersionStamp {
  std::uint64_t counter = 0;
  std::string coordinator;

  friend auto operator<=>(const VersionStamp&, const VersionStamp&) = default;
};

struct StreamRequest {
  std::string stream_id;
  std::string key;
  FieldSet fields;
  std::string sink_id;

  friend bool operator==(const StreamRequest&, const StreamRequest&) = default;
};

/// A projected update pushed to a stream's sink.
struct StreamView {
  std::string stream_id;
  std::string key;
  std::uint64_t seq = 0;
  FieldSet updated;
  Object view;
  VersionStamp stamp;
  std::string sink_id;

  friend bool operator==(const StreamView&, const StreamView&) = default;
};

struct PendingDelta {
  Object sparse;
  VersionStamp stamp;
};

/// Everything a node keeps for one key.
struct ObjectRecord {
  std::string key;
  std::optional<Object> current;
  std::optional<Object> previous;
  std::vector<PendingDelta> pending;
  VersionStamp stamp;
  std::vector<StreamRequest> streams;
  std::map<std::string, std::uint64_t> stream_seq;

  bool has_stream(std::string_view stream_id) const;
};

class StaleWrite : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DuplicateStream : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MergeResult {
  Object merged;
  FieldSet changed;
};

/// Overlays `sparse` on `base`. `changed` holds the fields whose value is new
/// or different; re-assigning an equal value is not a change.
MergeResult merge_sparse(const std::optional<Object>& base,
                         const Object& sparse);

/// Full-object comparison: fields added, removed, or with a different value.
FieldSet compare_objects(const std::optional<Object>& before,
                         const Object& after);

struct PutOutcome {
  FieldSet changed;              // set unless diff_task_needed
  bool diff_task_needed = false;
  Object old_version;            // VersionDiff: version replaced (empty if none)
  Object new_version;
};

/// Applies a full-object write. Throws StaleWrite unless stamp > record.stamp.
/// Under DeferredMerge the caller must compact pending deltas first
/// (std::logic_error otherwise).
PutOutcome apply_put(ObjectRecord& record, Object object,
                     const VersionStamp& stamp, Strategy strategy);

struct UpdateOutcome {
  FieldSet changed;
  bool deferred = false;
  bool diff_task_needed = false;
  Object old_version;
  Object new_version;
};

/// Applies a sparse write (upsert). Throws StaleWrite unless
/// stamp > record.stamp, std::invalid_argument on an empty sparse object.
UpdateOutcome apply_update(ObjectRecord& record, const Object& sparse,
                           const VersionStamp& stamp, Strategy strategy);

/// Current object with pending deltas overlaid in order.
std::optional<Object> read_object(const ObjectRecord& record);

/// Folds pending deltas into `current`, returning the union of the per-delta
/// changes measured against the evolving object.
FieldSet compact_deltas(ObjectRecord& record);

/// Throws DuplicateStream if the id is already registered on this record.
void register_stream(ObjectRecord& record, StreamRequest request);

/// Idempotent. The stream's seq counter is kept so in-flight diffs for
/// earlier writes still number their views consistently.
bool deregister_stream(ObjectRecord& record, std::string_view stream_id);

/// One view per request whose fields intersect `changed`, projecting
/// `source`. Advances the per-stream seq counters on `record`.
std::vector<StreamView> compute_views(ObjectRecord& record,
                                      std::span<const StreamRequest> requests,
                                      const Object& source,
                                      const FieldSet& changed,
                                      const VersionStamp& stamp);

/// compute_views over the record's registered streams and read_object().
std::vector<StreamView> compute_views(ObjectRecord& record,
                                      const FieldSet& changed,
                                      const VersionStamp& stamp);

Object project(const Object& object, const FieldSet& fields);

}  // namespace livekv
