#pragma once

// Base groups for the lamplighter construction: the free group F_k on
// generators a, b, c, ... and the lattice Z^d with its standard basis.
//
// Free-group letters are signed integers +-1..+-k (letter -i is the inverse of
// generator i). Words are kept freely reduced at all times, so equality of
// elements is plain sequence equality. Lattice elements are integer vectors
// with the l1 word metric coming from the generators +-e_i.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lampwalk/rational.hpp"

namespace lampwalk {

enum class GroupFamily : std::uint8_t { Free, Lattice };

std::string_view to_string(GroupFamily family);

/// An element of F_k (reduced word) or of Z^d (integer vector).
class BaseElement {
 public:
  /// Identity of F_k (the empty word).
  BaseElement() = default;

  /// Freely reduces `letters`. Letters must be nonzero.
  static BaseElement word(std::vector<std::int32_t> letters);
  static BaseElement vector(std::vector<std::int32_t> coords);
  static BaseElement free_identity() { return {}; }
  static BaseElement zero(std::size_t dimension);

  GroupFamily family() const noexcept { return family_; }
  bool is_free() const noexcept { return family_ == GroupFamily::Free; }

  /// Letters of a free word / coordinates of a lattice vector.
  std::span<const std::int32_t> letters() const noexcept { return data_; }
  std::span<const std::int32_t> coords() const noexcept { return data_; }

  /// Word length (free) or dimension (lattice).
  std::size_t size() const noexcept { return data_.size(); }

  /// d(e, this): reduced length or l1 norm.
  std::int64_t norm() const noexcept;

  bool is_identity() const noexcept;
  BaseElement inverse() const;

  /// Right-multiplies in place by `rhs`. Same-variant precondition checked.
  BaseElement& operator*=(const BaseElement& rhs);

  friend bool operator==(const BaseElement&, const BaseElement&) = default;
  friend std::strong_ordering operator<=>(const BaseElement& a, const BaseElement& b);

  std::size_t hash() const noexcept;

 private:
  BaseElement(GroupFamily family, std::vector<std::int32_t> data)
      : family_(family), data_(std::move(data)) {}

  GroupFamily family_ = GroupFamily::Free;
  std::vector<std::int32_t> data_;
};

/// Concrete base group: F_k (k >= 2 for the walk experiments; arithmetic works
/// for k >= 1) or Z^d.
struct GroupSpec {
  GroupFamily family = GroupFamily::Free;
  int rank = 2;  // k for F_k, d for Z^d

  static GroupSpec free(int k) { return {GroupFamily::Free, k}; }
  static GroupSpec lattice(int d) { return {GroupFamily::Lattice, d}; }

  BaseElement identity() const;
  /// Symmetric generating set: a, A, b, B, ... or +e1, -e1, +e2, -e2, ...
  std::vector<BaseElement> generators() const;
  /// Throws InvalidInput when `x` does not belong to this group.
  void validate(const BaseElement& x) const;

  /// Closed-form |B(e, n)|.
  std::uint64_t ball_size(int n) const;
  /// Largest radius whose ball holds at most 10^7 elements (14 for F_2).
  int default_ball_cap() const;

  friend bool operator==(const GroupSpec&, const GroupSpec&) = default;
};

std::string to_string(const GroupSpec& group);

BaseElement multiply(const BaseElement& a, const BaseElement& b);
BaseElement inverse(const BaseElement& a);
std::int64_t word_distance(const BaseElement& a, const BaseElement& b);

/// d(x, y) / d(x, e). Throws InvalidInput when x is the identity.
Rational cp_ratio(const BaseElement& x, const BaseElement& y);

/// Length of the longest common prefix of two free words.
std::size_t common_prefix_length(std::span<const std::int32_t> a, std::span<const std::int32_t> b);

struct Ball {
  BaseElement center;
  int radius = 0;
  std::vector<BaseElement> elements;  // sorted, no duplicates
};

/// Exact enumeration of B(center, n). `cap` < 0 selects the group default.
/// Throws CapExceeded("ball radius", ...) when n > cap.
Ball enumerate_ball(const GroupSpec& group, const BaseElement& center, int n, int cap = -1);

/// Letter syntax: a..z are generators 1..26, A..Z their inverses; "e" or ""
/// is the identity. Lattice syntax: "1,-2,0" (parentheses optional).
std::string to_string(const BaseElement& x);
BaseElement parse_element(const GroupSpec& group, std::string_view text);

char letter_char(std::int32_t letter);
std::int32_t letter_from_char(char ch);

}  // namespace lampwalk

template <>
struct std::hash<lampwalk::BaseElement> {
  std::size_t operator()(const lampwalk::BaseElement& x) const noexcept { return x.hash(); }
};
