#include "livekv/membership.hpp"

#include <stdexcept>
#include <utility>

namespace livekv {

MembershipTable MembershipTable::bootstrap(
    const std::string& self, const std::vector<std::string>& members,
    SimTime now) {
  MembershipTable table;
  table.self = self;
  for (const auto& m : members) {
    table.records[m] = MemberRecord{m, 0, now, MemberStatus::kAlive};
  }
  table.records.try_emplace(self,
                            MemberRecord{self, 0, now, MemberStatus::kAlive});
  return table;
}

std::set<std::string> MembershipTable::alive_members() const {
  std::set<std::string> out;
  for (const auto& [id, rec] : records) {
    if (rec.status == MemberStatus::kAlive) out.insert(id);
  }
  return out;
}

std::map<std::string, std::uint64_t> MembershipTable::heartbeats() const {
  std::map<std::string, std::uint64_t> out;
  for (const auto& [id, rec] : records) out[id] = rec.heartbeat;
  return out;
}

MembershipTable tick_heartbeat(MembershipTable table, SimTime now) {
  auto it = table.records.find(table.self);
  if (it == table.records.end()) {
    throw std::invalid_argument("tick_heartbeat: table has no self record");
  }
  it->second.heartbeat += 1;
  it->second.last_advanced = now;
  it->second.status = MemberStatus::kAlive;
  return table;
}

std::vector<std::string> select_gossip_peers(const MembershipTable& table,
                                             int fanout, Rng& rng) {
  std::vector<std::string> candidates;
  for (const auto& [id, rec] : table.records) {
    if (id != table.self) candidates.push_back(id);
  }
  const std::size_t want = std::min<std::size_t>(
      fanout > 0 ? static_cast<std::size_t>(fanout) : 0, candidates.size());
  // Partial Fisher-Yates over the sorted candidates.
  for (std::size_t i = 0; i < want; ++i) {
    const auto j = static_cast<std::size_t>(rng.uniform(i, candidates.size() - 1));
    std::swap(candidates[i], candidates[j]);
  }
  candidates.resize(want);
  return candidates;
}

MembershipTable merge_tables(MembershipTable local,
                             const MembershipTable& remote, SimTime now) {
  for (const auto& [id, theirs] : remote.records) {
    auto it = local.records.find(id);
    if (it == local.records.end()) {
      local.records.emplace(
          id, MemberRecord{id, theirs.heartbeat, now, MemberStatus::kAlive});
      continue;
    }
    MemberRecord& mine = it->second;
    if (theirs.heartbeat > mine.heartbeat) {
      mine.heartbeat = theirs.heartbeat;
      mine.last_advanced = now;
      mine.status = MemberStatus::kAlive;
    }
  }
  return local;
}

MembershipTable detect_failures(MembershipTable table, SimTime now,
                                SimTime suspect_after) {
  if (suspect_after <= 0) {
    throw std::invalid_argument("detect_failures: suspect_after must be > 0");
  }
  for (auto& [id, rec] : table.records) {
    if (id == table.self) {
      rec.status = MemberStatus::kAlive;
    } else {
      rec.status = (now - rec.last_advanced > suspect_after)
                       ? MemberStatus::kSuspect
                       : MemberStatus::kAlive;
    }
  }
  return table;
}

}  // namespace livekv
