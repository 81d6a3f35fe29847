#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "livekv/field_value.hpp"
#include "livekv/md5.hpp"

namespace livekv {

struct FieldLeaf {
  std::string name;
  Digest digest{};
};

/// MD5(name || 0x00 || canonical value bytes).
Digest leaf_digest(std::string_view name, const FieldValue& value);

/// Merkle tree over an object's fields.
///
/// Leaves are sorted by field name. Each level pairs nodes left to right,
/// parent = MD5(left || right); an unpaired trailing node is carried up as is.
/// The empty object has root MD5(0x00).
class FieldTree {
 public:
  FieldTree();

  std::span<const FieldLeaf> leaves() const { return leaves_; }
  /// levels()[0] holds the leaf digests, levels().back() the root. Empty for
  /// the empty object.
  const std::vector<std::vector<Digest>>& levels() const { return levels_; }
  const Digest& root() const { return root_; }

 private:
  friend FieldTree build_field_tree(const Object& object);

  std::vector<FieldLeaf> leaves_;
  std::vector<std::vector<Digest>> levels_;
  Digest root_{};
};

/// Throws std::invalid_argument on an invalid field name.
FieldTree build_field_tree(const Object& object);

inline const Digest& root_digest(const FieldTree& tree) { return tree.root(); }

/// Traversal counters for diff_fields.
struct DiffStats {
  std::size_t digest_comparisons = 0;  // every node digest compared
  std::size_t leaf_comparisons = 0;    // comparisons at the leaf level
};

/// Fields added, removed, or holding a different value between two versions.
/// Equal roots short-circuit; with equal name lists only mismatching
/// subtrees are descended.
FieldSet diff_fields(const FieldTree& old_tree, const FieldTree& new_tree,
                     DiffStats* stats = nullptr);

}  // namespace livekv
