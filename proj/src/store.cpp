#include "livekv/store.hpp"

#include <algorithm>


namespace livekv {

std::string_view strategy_name(Strategy s) {
  switch (s) {
    case Strategy::kMergeOnWrite:
      return "merge";
    case Strategy::kDeferredMerge:
      return "deferred";
    case Strategy::kVersionDiff:
      return "versiondiff";
  }
  return "unknown";
}

Strategy parse_strategy(std::string_view name) {
  if (name == "merge") return Strategy::kMergeOnWrite;
  if (name == "deferred") return Strategy::kDeferredMerge;
  if (name == "versiondiff") return Strategy::kVersionDiff;
  throw std::invalid_argument("unknown strategy: " + std::string(name));
}

bool ObjectRecord::has_stream(std::string_view stream_id) const {
  return std::any_of(streams.begin(), streams.end(),
                     [&](const StreamRequest& r) {
                       return r.stream_id == stream_id;
                     });
}

MergeResult merge_sparse(const std::optional<Object>& base,
                         const Object& sparse) {
  MergeResult out;
  if (base) out.merged = *base;
  for (const auto& [name, value] : sparse) {
    auto it = out.merged.find(name);
    if (it == out.merged.end()) {
      out.merged.emplace(name, value);
      out.changed.insert(name);
    } else if (!(it->second == value)) {
      it->second = value;
      out.changed.insert(name);
    }
  }
  return out;
}

FieldSet compare_objects(const std::optional<Object>& before,
                         const Object& after) {
  FieldSet changed;
  static const Object kEmpty;
  const Object& old = before ? *before : kEmpty;
  for (const auto& [name, value] : after) {
    auto it = old.find(name);
    if (it == old.end() || !(it->second == value)) changed.insert(name);
  }
  for (const auto& [name, value] : old) {
    if (!after.contains(name)) changed.insert(name);
  }
  return changed;
}

namespace {

void check_fresh(const ObjectRecord& record, const VersionStamp& stamp) {
  if (!(stamp > record.stamp)) {
    throw StaleWrite("stale write to key '" + record.key + "'");
  }
}

}  // namespace

PutOutcome apply_put(ObjectRecord& record, Object object,
                     const VersionStamp& stamp, Strategy strategy) {
  check_fresh(record, stamp);
  for (const auto& [name, value] : object) validate_field_name(name);
  PutOutcome out;
  if (strategy == Strategy::kVersionDiff) {
    out.old_version = record.current.value_or(Object{});
    out.new_version = object;
    out.diff_task_needed = true;
    record.previous = record.current;
    record.current = std::move(object);
  } else {
    if (!record.pending.empty()) {
      throw std::logic_error("apply_put: pending deltas must be compacted first");
    }
    out.changed = compare_objects(record.current, object);
    out.old_version = record.current.value_or(Object{});
    out.new_version = object;
    record.current = std::move(object);
  }
  record.stamp = stamp;
  return out;
}

UpdateOutcome apply_update(ObjectRecord& record, const Object& sparse,
                           const VersionStamp& stamp, Strategy strategy) {
  if (sparse.empty()) {
    throw std::invalid_argument("apply_update: sparse object is empty");
  }
  check_fresh(record, stamp);
  for (const auto& [name, value] : sparse) validate_field_name(name);
  UpdateOutcome out;
  switch (strategy) {
    case Strategy::kMergeOnWrite: {
      auto merged = merge_sparse(record.current, sparse);
      out.changed = std::move(merged.changed);
      out.old_version = record.current.value_or(Object{});
      record.current = std::move(merged.merged);
      out.new_version = *record.current;
      record.stamp = stamp;
      break;
    }
    case Strategy::kDeferredMerge:
      record.pending.push_back({sparse, stamp});
      record.stamp = stamp;
      out.deferred = true;
      break;
    case Strategy::kVersionDiff: {
      auto merged = merge_sparse(read_object(record), sparse);
      auto put = apply_put(record, std::move(merged.merged), stamp, strategy);
      out.diff_task_needed = true;
      out.old_version = std::move(put.old_version);
      out.new_version = std::move(put.new_version);
      break;
    }
  }
  return out;
}

std::optional<Object> read_object(const ObjectRecord& record) {
  if (record.pending.empty()) return record.current;
  Object out = record.current.value_or(Object{});
  for (const auto& delta : record.pending) {
    for (const auto& [name, value] : delta.sparse) out[name] = value;
  }
  return out;
}

FieldSet compact_deltas(ObjectRecord& record) {
  FieldSet changed;
  for (const auto& delta : record.pending) {
    auto merged = merge_sparse(record.current, delta.sparse);
    changed.insert(merged.changed.begin(), merged.changed.end());
    record.current = std::move(merged.merged);
  }
  record.pending.clear();
  return changed;
}

void register_stream(ObjectRecord& record, StreamRequest request) {
  if (record.has_stream(request.stream_id)) {
    throw DuplicateStream("stream '" + request.stream_id +
                          "' already registered on key '" + record.key + "'");
  }
  record.stream_seq[request.stream_id] = 0;
  record.streams.push_back(std::move(request));
}

bool deregister_stream(ObjectRecord& record, std::string_view stream_id) {
  auto it = std::find_if(
      record.streams.begin(), record.streams.end(),
      [&](const StreamRequest& r) { return r.stream_id == stream_id; });
  if (it == record.streams.end()) return false;
  record.streams.erase(it);
  return true;
}

Object project(const Object& object, const FieldSet& fields) {
  Object out;
  for (const auto& name : fields) {
    auto it = object.find(name);
    if (it != object.end()) out.emplace(name, it->second);
  }
  return out;
}

std::vector<StreamView> compute_views(ObjectRecord& record,
                                      std::span<const StreamRequest> requests,
                                      const Object& source,
                                      const FieldSet& changed,
                                      const VersionStamp& stamp) {
  std::vector<StreamView> views;
  if (changed.empty()) return views;
  for (const auto& request : requests) {
    FieldSet updated;
    std::set_intersection(changed.begin(), changed.end(),
                          request.fields.begin(), request.fields.end(),
                          std::inserter(updated, updated.end()));
    if (updated.empty()) continue;
    StreamView view;
    view.stream_id = request.stream_id;
    view.key = record.key;
    view.seq = ++record.stream_seq[request.stream_id];
    view.updated = std::move(updated);
    view.view = project(source, request.fields);
    view.stamp = stamp;
    view.sink_id = request.sink_id;
    views.push_back(std::move(view));
  }
  return views;
}

std::vector<StreamView> compute_views(ObjectRecord& record,
                                      const FieldSet& changed,
                                      const VersionStamp& stamp) {
  const Object source = read_object(record).value_or(Object{});
  const auto requests = record.streams;
  return compute_views(record, requests, source, changed, stamp);
}

}  // namespace livekv
