#include "livekv/merkle.hpp"

#include <algorithm>
#include <cstdint>

namespace livekv {

namespace {

Digest hash_pair(const Digest& left, const Digest& right) {
  std::array<std::uint8_t, 32> buf;
  std::copy(left.begin(), left.end(), buf.begin());
  std::copy(right.begin(), right.end(), buf.begin() + 16);
  return md5(std::span<const std::uint8_t>(buf));
}

Digest empty_root() {
  const std::uint8_t zero = 0;
  return md5(std::span<const std::uint8_t>(&zero, 1));
}

bool same_names(std::span<const FieldLeaf> a, std::span<const FieldLeaf> b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end(),
                    [](const FieldLeaf& x, const FieldLeaf& y) {
                      return x.name == y.name;
                    });
}

class Differ {
 public:
  Differ(const FieldTree& a, const FieldTree& b, DiffStats* stats)
      : a_(a), b_(b), stats_(stats) {}

  FieldSet run() {
    FieldSet out;
    if (!roots_equal()) {
      if (same_names(a_.leaves(), b_.leaves())) {
        const std::size_t top = a_.levels().size() - 1;
        descend(top, 0, out);
      } else {
        merge_walk(out);
      }
    }
    return out;
  }

 private:
  bool roots_equal() {
    count(a_.levels().size() == 1);
    return a_.root() == b_.root();
  }

  void count(bool leaf) {
    if (!stats_) return;
    ++stats_->digest_comparisons;
    if (leaf) ++stats_->leaf_comparisons;
  }

  // Both trees share shape here; (level, index) addresses the same subtree.
  void descend(std::size_t level, std::size_t index, FieldSet& out) {
    if (level == 0) {
      out.insert(a_.leaves()[index].name);
      return;
    }
    const auto& below_a = a_.levels()[level - 1];
    const auto& below_b = b_.levels()[level - 1];
    for (std::size_t child = 2 * index;
         child < std::min(2 * index + 2, below_a.size()); ++child) {
      count(level - 1 == 0);
      if (below_a[child] != below_b[child]) descend(level - 1, child, out);
    }
  }

  void merge_walk(FieldSet& out) {
    auto la = a_.leaves();
    auto lb = b_.leaves();
    std::size_t i = 0, j = 0;
    while (i < la.size() || j < lb.size()) {
      if (j == lb.size() || (i < la.size() && la[i].name < lb[j].name)) {
        out.insert(la[i++].name);
      } else if (i == la.size() || lb[j].name < la[i].name) {
        out.insert(lb[j++].name);
      } else {
        count(true);
        if (la[i].digest != lb[j].digest) out.insert(la[i].name);
        ++i;
        ++j;
      }
    }
  }

  const FieldTree& a_;
  const FieldTree& b_;
  DiffStats* stats_;
};

}  // namespace

Digest leaf_digest(std::string_view name, const FieldValue& value) {
  std::string buf(name);
  buf.push_back('\0');
  buf += value.canonical_bytes();
  return md5(buf);
}

FieldTree::FieldTree() : root_(empty_root()) {}

FieldTree build_field_tree(const Object& object) {
  FieldTree tree;
  // std::map iterates in byte order of the names.
  for (const auto& [name, value] : object) {
    validate_field_name(name);
    tree.leaves_.push_back({name, leaf_digest(name, value)});
  }
  if (tree.leaves_.empty()) return tree;

  std::vector<Digest> level;
  level.reserve(tree.leaves_.size());
  for (const auto& leaf : tree.leaves_) level.push_back(leaf.digest);
  tree.levels_.push_back(level);
  while (tree.levels_.back().size() > 1) {
    const auto& below = tree.levels_.back();
    std::vector<Digest> above;
    above.reserve((below.size() + 1) / 2);
    for (std::size_t i = 0; i < below.size(); i += 2) {
      above.push_back(i + 1 < below.size() ? hash_pair(below[i], below[i + 1])
                                           : below[i]);
    }
    tree.levels_.push_back(std::move(above));
  }
  tree.root_ = tree.levels_.back().front();
  return tree;
}

FieldSet diff_fields(const FieldTree& old_tree, const FieldTree& new_tree,
                     DiffStats* stats) {
  return Differ(old_tree, new_tree, stats).run();
}

}  // namespace livekv
