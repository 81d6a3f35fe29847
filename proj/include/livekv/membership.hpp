#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "livekv/rng.hpp"

namespace livekv {

/// Simulation time in integer units.
using SimTime = std::int64_t;

enum class MemberStatus { kAlive, kSuspect };

struct MemberRecord {
  std::string node;
  std::uint64_t heartbeat = 0;
  SimTime last_advanced = 0;
  MemberStatus status = MemberStatus::kAlive;

  friend bool operator==(const MemberRecord&, const MemberRecord&) = default;
};

/// One node's view of cluster membership. Always holds an alive record for
/// `self`.
struct MembershipTable {
  std::string self;
  std::map<std::string, MemberRecord> records;

  /// Every member at heartbeat 0, alive, advanced at `now`.
  static MembershipTable bootstrap(const std::string& self,
                                   const std::vector<std::string>& members,
                                   SimTime now = 0);

  std::set<std::string> alive_members() const;
  std::map<std::string, std::uint64_t> heartbeats() const;
};

MembershipTable tick_heartbeat(MembershipTable table, SimTime now);

/// min(fanout, others) distinct peers drawn uniformly without replacement.
/// Suspect members stay eligible so they can be rediscovered.
std::vector<std::string> select_gossip_peers(const MembershipTable& table,
                                             int fanout, Rng& rng);

/// Pointwise heartbeat maximum. A strictly larger remote heartbeat refreshes
/// last_advanced and marks the member alive; unknown members are inserted.
MembershipTable merge_tables(MembershipTable local,
                             const MembershipTable& remote, SimTime now);

/// Marks every non-self member suspect iff now - last_advanced > suspect_after.
MembershipTable detect_failures(MembershipTable table, SimTime now,
                                SimTime suspect_after);

}  // namespace livekv
