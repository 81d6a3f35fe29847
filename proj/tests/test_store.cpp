#include <doctest.h>

#include <stdexcept>

#include "livekv/store.hpp"

using namespace livekv;

namespace {

VersionStamp stamp(std::uint64_t c) { return VersionStamp{c, "n1"}; }

ObjectRecord record(std::optional<Object> current = std::nullopt) {
  ObjectRecord r;
  r.key = "k";
  r.current = std::move(current);
  if (r.current) r.stamp = stamp(1);
  return r;
}

StreamRequest req(std::string id, FieldSet fields) {
  return StreamRequest{std::move(id), "k", std::move(fields), "sink"};
}

}  // namespace

TEST_CASE("version stamps order by counter then coordinator") {
  CHECK(VersionStamp{2, "a"} > VersionStamp{1, "z"});
  CHECK(VersionStamp{2, "b"} > VersionStamp{2, "a"});
  CHECK(VersionStamp{1, "n1"} > VersionStamp{});
}

TEST_CASE("merge_sparse") {
  auto r = merge_sparse(Object{{"a", 1}, {"b", 2}}, Object{{"b", 3}});
  CHECK(r.merged == Object{{"a", 1}, {"b", 3}});
  CHECK(r.changed == FieldSet{"b"});

  r = merge_sparse(std::nullopt, Object{{"x", 1}});
  CHECK(r.merged == Object{{"x", 1}});
  CHECK(r.changed == FieldSet{"x"});

  r = merge_sparse(Object{{"a", 1}}, Object{{"a", 1}});
  CHECK(r.merged == Object{{"a", 1}});
  CHECK(r.changed.empty());
}

TEST_CASE("apply_put") {
  SUBCASE("first version-diff put") {
    auto rec = record();
    auto out = apply_put(rec, {{"a", 1}}, stamp(1), Strategy::kVersionDiff);
    CHECK(out.diff_task_needed);
    CHECK_FALSE(rec.previous.has_value());
    CHECK(rec.current == Object{{"a", 1}});
    CHECK(out.old_version.empty());
  }
  SUBCASE("version-diff keeps the prior version") {
    auto rec = record(Object{{"a", 1}});
    apply_put(rec, {{"a", 2}}, stamp(2), Strategy::kVersionDiff);
    CHECK(rec.previous == Object{{"a", 1}});
    CHECK(rec.current == Object{{"a", 2}});
  }
  SUBCASE("full put counts removed fields as changed") {
    auto rec = record(Object{{"a", 1}, {"b", 2}});
    auto out = apply_put(rec, {{"a", 2}}, stamp(2), Strategy::kMergeOnWrite);
    CHECK_FALSE(out.diff_task_needed);
    CHECK(out.changed == FieldSet{"a", "b"});
  }
  SUBCASE("identical put changes nothing") {
    auto rec = record(Object{{"a", 1}});
    CHECK(apply_put(rec, {{"a", 1}}, stamp(2), Strategy::kMergeOnWrite).changed.empty());
  }
  SUBCASE("stale stamps are rejected") {
    auto rec = record(Object{{"a", 1}});
    rec.stamp = stamp(5);
    CHECK_THROWS_AS(apply_put(rec, {{"a", 2}}, stamp(5), Strategy::kVersionDiff), StaleWrite);
    CHECK_THROWS_AS(apply_put(rec, {{"a", 2}}, stamp(4), Strategy::kMergeOnWrite), StaleWrite);
    CHECK(rec.current == Object{{"a", 1}});
  }
  SUBCASE("deferred put requires compaction first") {
    auto rec = record(Object{{"a", 1}});
    apply_update(rec, {{"b", 2}}, stamp(2), Strategy::kDeferredMerge);
    CHECK_THROWS_AS(apply_put(rec, {{"a", 2}}, stamp(3), Strategy::kDeferredMerge),
                    std::logic_error);
  }
}

TEST_CASE("apply_update") {
  SUBCASE("merge on write") {
    auto rec = record(Object{{"a", 1}});
    auto out = apply_update(rec, {{"b", 2}}, stamp(2), Strategy::kMergeOnWrite);
    CHECK(rec.current == Object{{"a", 1}, {"b", 2}});
    CHECK(out.changed == FieldSet{"b"});
    CHECK_FALSE(out.deferred);
  }
  SUBCASE("merge on write no-op") {
    auto rec = record(Object{{"a", 1}});
    CHECK(apply_update(rec, {{"a", 1}}, stamp(2), Strategy::kMergeOnWrite).changed.empty());
  }
  SUBCASE("deferred appends a delta") {
    auto rec = record(Object{{"a", 1}});
    auto out = apply_update(rec, {{"b", 2}}, stamp(2), Strategy::kDeferredMerge);
    CHECK(out.deferred);
    CHECK(out.changed.empty());
    CHECK(rec.pending.size() == 1);
    CHECK(rec.current == Object{{"a", 1}});
    CHECK(rec.stamp == stamp(2));
  }
  SUBCASE("version diff merges into a full version") {
    auto rec = record(Object{{"a", 1}});
    auto out = apply_update(rec, {{"b", 2}}, stamp(2), Strategy::kVersionDiff);
    CHECK(out.diff_task_needed);
    CHECK(rec.previous == Object{{"a", 1}});
    CHECK(rec.current == Object{{"a", 1}, {"b", 2}});
  }
  SUBCASE("upsert on an absent key") {
    auto rec = record();
    apply_update(rec, {{"x", 1}}, stamp(1), Strategy::kMergeOnWrite);
    CHECK(rec.current == Object{{"x", 1}});
  }
  SUBCASE("empty sparse object") {
    auto rec = record();
    CHECK_THROWS_AS(apply_update(rec, {}, stamp(1), Strategy::kMergeOnWrite),
                    std::invalid_argument);
  }
}

TEST_CASE("read_object overlays pending deltas without mutating") {
  auto rec = record(Object{{"a", 1}});
  rec.pending.push_back({{{"b", 2}}, stamp(2)});
  rec.pending.push_back({{{"a", 3}}, stamp(3)});
  CHECK(read_object(rec) == Object{{"a", 3}, {"b", 2}});
  CHECK(rec.current == Object{{"a", 1}});
  CHECK_FALSE(read_object(record()).has_value());
  CHECK(read_object(record(Object{{"a", 1}})) == Object{{"a", 1}});
}

TEST_CASE("compact_deltas") {
  SUBCASE("change then change back still counts") {
    auto rec = record(Object{{"a", 1}});
    rec.pending.push_back({{{"a", 2}}, stamp(2)});
    rec.pending.push_back({{{"a", 1}}, stamp(3)});
    CHECK(compact_deltas(rec) == FieldSet{"a"});
    CHECK(rec.current == Object{{"a", 1}});
    CHECK(rec.pending.empty());
  }
  SUBCASE("pure no-op") {
    auto rec = record(Object{{"a", 1}});
    rec.pending.push_back({{{"a", 1}}, stamp(2)});
    CHECK(compact_deltas(rec).empty());
  }
  SUBCASE("nothing pending") {
    auto rec = record(Object{{"a", 1}});
    CHECK(compact_deltas(rec).empty());
    CHECK(rec.current == Object{{"a", 1}});
  }
}

TEST_CASE("stream registry") {
  auto rec = record();
  register_stream(rec, req("s1", {"a"}));
  register_stream(rec, req("s2", {"b"}));
  CHECK(rec.streams.size() == 2);
  CHECK(rec.stream_seq["s1"] == 0);
  CHECK_THROWS_AS(register_stream(rec, req("s1", {"c"})), DuplicateStream);

  CHECK(deregister_stream(rec, "s1"));
  CHECK(rec.streams.size() == 1);
  CHECK_FALSE(deregister_stream(rec, "s1"));
  CHECK_FALSE(deregister_stream(rec, "nope"));

  apply_update(rec, {{"a", 1}, {"b", 1}}, stamp(1), Strategy::kMergeOnWrite);
  auto views = compute_views(rec, {"a", "b"}, stamp(1));
  REQUIRE(views.size() == 1);
  CHECK(views[0].stream_id == "s2");
}

TEST_CASE("compute_views") {
  SUBCASE("projects all requested fields") {
    auto rec = record(Object{{"a", 1}, {"b", 3}, {"c", 9}});
    register_stream(rec, req("s", {"a", "b"}));
    auto views = compute_views(rec, {"b"}, stamp(2));
    REQUIRE(views.size() == 1);
    CHECK(views[0].view == Object{{"a", 1}, {"b", 3}});
    CHECK(views[0].updated == FieldSet{"b"});
    CHECK(views[0].seq == 1);
    CHECK(views[0].stamp == stamp(2));
    CHECK(views[0].sink_id == "sink");
  }
  SUBCASE("no intersection, no view") {
    auto rec = record(Object{{"a", 1}});
    register_stream(rec, req("s", {"a", "b"}));
    CHECK(compute_views(rec, {"c"}, stamp(2)).empty());
  }
  SUBCASE("independent counters per stream") {
    auto rec = record(Object{{"a", 1}, {"b", 2}});
    register_stream(rec, req("sa", {"a"}));
    register_stream(rec, req("sb", {"b"}));
    compute_views(rec, {"a"}, stamp(2));
    auto views = compute_views(rec, {"a", "b"}, stamp(3));
    REQUIRE(views.size() == 2);
    CHECK(views[0].seq == 2);
    CHECK(views[1].seq == 1);
  }
  SUBCASE("absent fields are omitted") {
    auto rec = record(Object{{"a", 1}});
    register_stream(rec, req("s", {"a", "zz"}));
    auto views = compute_views(rec, {"a"}, stamp(2));
    REQUIRE(views.size() == 1);
    CHECK(views[0].view == Object{{"a", 1}});
  }
}

TEST_CASE("strategy names") {
  CHECK(parse_strategy("merge") == Strategy::kMergeOnWrite);
  CHECK(parse_strategy("deferred") == Strategy::kDeferredMerge);
  CHECK(parse_strategy("versiondiff") == Strategy::kVersionDiff);
  CHECK(strategy_name(Strategy::kDeferredMerge) == "deferred");
  CHECK_THROWS_AS(parse_strategy("other"), std::invalid_argument);
}
