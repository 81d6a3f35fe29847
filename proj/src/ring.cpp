#include "livekv/ring.hpp"

#include <algorithm>
#include <stdexcept>

namespace livekv {

RingPosition RingPosition::from_digest(const Digest& digest) {
  RingPosition pos;
  for (std::uint8_t b : digest) pos.value = (pos.value << 8) | b;
  return pos;
}

std::string RingPosition::to_hex() const {
  Digest bytes{};
  unsigned __int128 v = value;
  for (int i = 15; i >= 0; --i) {
    bytes[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(v & 0xff);
    v >>= 8;
  }
  return livekv::to_hex(bytes);
}

RingPosition position_of(std::string_view label) {
  return RingPosition::from_digest(md5(label));
}

std::string vnode_label(std::string_view physical, std::uint32_t index) {
  std::string label(physical);
  label.push_back('#');
  label += std::to_string(index);
  return label;
}

RingView build_ring(const std::set<std::string>& members,
                    int vnodes_per_node) {
  if (members.empty()) {
    throw std::invalid_argument("build_ring: empty member set");
  }
  if (vnodes_per_node < 1) {
    throw std::invalid_argument("build_ring: vnodes_per_node must be >= 1");
  }
  RingView ring;
  ring.members_ = members;
  ring.vnodes_per_node_ = vnodes_per_node;
  ring.vnodes_.reserve(members.size() *
                       static_cast<std::size_t>(vnodes_per_node));
  for (const auto& member : members) {
    for (int i = 0; i < vnodes_per_node; ++i) {
      const auto index = static_cast<std::uint32_t>(i);
      ring.vnodes_.push_back(
          {member, index, position_of(vnode_label(member, index))});
    }
  }
  std::sort(ring.vnodes_.begin(), ring.vnodes_.end(),
            [](const VirtualNode& a, const VirtualNode& b) {
              return std::tie(a.position, a.physical, a.index) <
                     std::tie(b.position, b.physical, b.index);
            });
  return ring;
}

std::vector<std::string> preference_list(const RingView& ring,
                                         std::string_view key, int n) {
  std::vector<std::string> out;
  if (ring.empty() || n < 1) return out;
  const auto want =
      std::min<std::size_t>(static_cast<std::size_t>(n), ring.members().size());
  const auto vnodes = ring.vnodes();
  const RingPosition pos = position_of(key);
  auto it = std::lower_bound(
      vnodes.begin(), vnodes.end(), pos,
      [](const VirtualNode& v, const RingPosition& p) { return v.position < p; });
  auto start = static_cast<std::size_t>(it - vnodes.begin());
  for (std::size_t step = 0; step < vnodes.size() && out.size() < want;
       ++step) {
    const auto& vnode = vnodes[(start + step) % vnodes.size()];
    if (std::find(out.begin(), out.end(), vnode.physical) == out.end()) {
      out.push_back(vnode.physical);
    }
  }
  return out;
}

}  // namespace livekv
