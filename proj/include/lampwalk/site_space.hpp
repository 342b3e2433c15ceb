#pragma once

// Interned base-group elements for long walks. A walk on F_k that has gone
// 5000 steps sits on a word of length ~2500; multiplying and hashing such
// words at every step is quadratic. Instead each trajectory keeps the part of
// the Cayley tree it has touched as a trie (node = reduced word, parent =
// word minus its last letter), so a generator step is O(1) and lamp sites are
// node ids. Lattice walks intern integer vectors the same way.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <variant>
#include <vector>

#include "lampwalk/base_group.hpp"

namespace lampwalk {

using SiteId = std::int32_t;

class WordTree {
 public:
  explicit WordTree(int rank);

  int rank() const noexcept { return rank_; }
  static constexpr SiteId root() noexcept { return 0; }
  std::size_t size() const noexcept { return parent_.size(); }

  SiteId parent(SiteId v) const { return parent_[static_cast<std::size_t>(v)]; }
  std::int32_t last_letter(SiteId v) const { return letter_[static_cast<std::size_t>(v)]; }
  std::int32_t depth(SiteId v) const { return depth_[static_cast<std::size_t>(v)]; }

  /// v . letter, creating the node if needed.
  SiteId step(SiteId v, std::int32_t letter);
  SiteId advance(SiteId v, const BaseElement& g);
  /// Node for `w` if it was ever created.
  std::optional<SiteId> find(const BaseElement& w) const;
  BaseElement element(SiteId v) const;

  SiteId ancestor_at_depth(SiteId v, std::int32_t depth) const;
  SiteId lowest_common_ancestor(SiteId a, SiteId b) const;

  /// Computes Euler-tour intervals; required before is_ancestor.
  void finalize();
  bool finalized() const noexcept { return !tin_.empty() && tin_.size() == parent_.size(); }
  /// True when the word at `a` is a prefix of the word at `b`.
  bool is_ancestor(SiteId a, SiteId b) const;

 private:
  std::size_t slot(std::int32_t letter) const;

  int rank_;
  std::vector<SiteId> parent_;
  std::vector<std::int32_t> letter_;
  std::vector<std::int32_t> depth_;
  std::vector<SiteId> children_;  // 2k slots per node, -1 when absent
  std::vector<std::int32_t> tin_;
  std::vector<std::int32_t> tout_;
};

class LatticeIndex {
 public:
  explicit LatticeIndex(int dimension);

  int dimension() const noexcept { return dimension_; }
  static constexpr SiteId origin() noexcept { return 0; }
  std::size_t size() const noexcept { return coords_.size() / static_cast<std::size_t>(dimension_); }

  SiteId intern(std::vector<std::int32_t> v);
  SiteId advance(SiteId v, const BaseElement& g);
  std::optional<SiteId> find(const BaseElement& x) const;
  BaseElement element(SiteId v) const;
  std::int32_t coord(SiteId v, std::size_t axis) const {
    return coords_[static_cast<std::size_t>(v) * static_cast<std::size_t>(dimension_) + axis];
  }
  std::int64_t norm(SiteId v) const;

 private:
  struct KeyHash {
    std::size_t operator()(const std::vector<std::int32_t>& v) const noexcept;
  };

  int dimension_;
  std::vector<std::int32_t> coords_;
  std::unordered_map<std::vector<std::int32_t>, SiteId, KeyHash> index_;
};

/// Either a WordTree (F_k) or a LatticeIndex (Z^d).
class SiteSpace {
 public:
  explicit SiteSpace(const GroupSpec& group);

  const GroupSpec& group() const noexcept { return group_; }
  SiteId origin() const noexcept { return 0; }
  std::size_t size() const;

  SiteId advance(SiteId v, const BaseElement& g);
  /// Interns `x` (as origin . x).
  SiteId intern(const BaseElement& x) { return advance(origin(), x); }
  std::optional<SiteId> find(const BaseElement& x) const;
  BaseElement element(SiteId v) const;
  /// d(e, site).
  std::int64_t norm(SiteId v) const;

  void finalize();

  bool is_tree() const noexcept { return std::holds_alternative<WordTree>(impl_); }
  const WordTree& tree() const { return std::get<WordTree>(impl_); }
  const LatticeIndex& lattice() const { return std::get<LatticeIndex>(impl_); }

 private:
  GroupSpec group_;
  std::variant<WordTree, LatticeIndex> impl_;
};

}  // namespace lampwalk
