#pragma once

#include <compare>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "livekv/md5.hpp"

namespace livekv {

/// A point on the 2^128 hash circle.
struct RingPosition {
  unsigned __int128 value = 0;

  static RingPosition from_digest(const Digest& digest);
  std::string to_hex() const;

  friend auto operator<=>(const RingPosition&, const RingPosition&) = default;
};

/// MD5 of the label's bytes, read big-endian.
RingPosition position_of(std::string_view label);

/// Label hashed for a virtual node: "<physical>#<index>".
std::string vnode_label(std::string_view physical, std::uint32_t index);

struct VirtualNode {
  std::string physical;
  std::uint32_t index = 0;
  RingPosition position;

  friend bool operator==(const VirtualNode&, const VirtualNode&) = default;
};

/// Immutable consistent-hash ring. Virtual nodes are ordered by
/// (position, physical, index).
class RingView {
 public:
  RingView() = default;

  std::span<const VirtualNode> vnodes() const { return vnodes_; }
  int vnodes_per_node() const { return vnodes_per_node_; }
  const std::set<std::string>& members() const { return members_; }
  bool empty() const { return vnodes_.empty(); }

 private:
  friend RingView build_ring(const std::set<std::string>&, int);

  std::vector<VirtualNode> vnodes_;
  std::set<std::string> members_;
  int vnodes_per_node_ = 0;
};

/// Throws std::invalid_argument for an empty member set or vnodes < 1.
RingView build_ring(const std::set<std::string>& members, int vnodes_per_node);

/// Distinct physical nodes met walking clockwise from the key's position.
/// Returns min(n, member count) ids; the first is the key's owner.
std::vector<std::string> preference_list(const RingView& ring,
                                         std::string_view key, int n);

}  // namespace livekv
