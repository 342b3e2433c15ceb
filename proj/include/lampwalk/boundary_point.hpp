#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lampwalk/base_group.hpp"

namespace lampwalk {

/// An end of F_k: the infinite reduced word prefix . period . period . ...
///
/// Exact ends always carry a nonempty, cyclically reduced, primitive period and
/// are stored in canonical form (shortest prefix), so two exact ends are equal
/// iff their representations are. An estimated end has an empty period and
/// only records a finite prefix obtained from simulation.
struct End {
  BaseElement prefix;
  BaseElement period;
  bool exact = true;

  friend bool operator==(const End&, const End&) = default;
};

/// A point of the sphere S_{d-1}, the boundary of Z^d.
struct Direction {
  std::vector<double> components;

  friend bool operator==(const Direction&, const Direction&) = default;
};

class BoundaryPoint {
 public:
  static constexpr double kUnitTolerance = 1e-9;

  /// Exact end prefix.period^infinity. Throws InvalidInput if the period is
  /// empty or the infinite word fails to be reduced.
  static BoundaryPoint end(const BaseElement& prefix, const BaseElement& period);
  /// Finite-precision end estimated from a walk.
  static BoundaryPoint estimated_end(const BaseElement& prefix);
  /// Normalizes a nonzero vector onto the unit sphere.
  static BoundaryPoint direction(std::vector<double> v);

  bool is_end() const noexcept { return std::holds_alternative<End>(data_); }
  bool is_direction() const noexcept { return std::holds_alternative<Direction>(data_); }
  const End& as_end() const;
  const Direction& as_direction() const;

  /// True for exact ends and for directions.
  bool exact() const noexcept;

  /// The i-th letter (0-based) of the infinite word. Exact ends only.
  std::int32_t letter(std::size_t i) const;
  /// The first n letters as a reduced word. Estimated ends fail beyond their
  /// recorded prefix.
  BaseElement truncate(std::size_t n) const;

  friend bool operator==(const BoundaryPoint&, const BoundaryPoint&) = default;

 private:
  explicit BoundaryPoint(std::variant<End, Direction> data) : data_(std::move(data)) {}
  std::variant<End, Direction> data_;
};

/// g . u. Ends: left-concatenate and re-reduce. Directions: unchanged, since
/// translations fix the sphere at infinity.
BoundaryPoint act_on_boundary(const BaseElement& g, const BoundaryPoint& u);

/// Length of the common prefix of two ends. Equal exact ends return
/// `std::size_t(-1)`; estimated ends stop at their recorded length.
std::size_t common_prefix_length(const BoundaryPoint& u, const BoundaryPoint& v);

/// Appends `period` to the end estimate, yielding an exact end (the caller is
/// responsible for flagging results built on promoted ends).
BoundaryPoint promote_end(const BoundaryPoint& estimate, const BaseElement& period);
/// Promotes by repeating the last letter of the prefix (which keeps the word
/// reduced). An empty prefix uses the first generator.
BoundaryPoint promote_end(const BoundaryPoint& estimate);

/// "prefix.period" letter syntax, e.g. "a.a" for a^infinity, "ab.ab", ".ab".
/// A string without a dot is an estimated end.
BoundaryPoint parse_end(const GroupSpec& group, std::string_view text);
std::string to_string(const BoundaryPoint& u);

}  // namespace lampwalk
