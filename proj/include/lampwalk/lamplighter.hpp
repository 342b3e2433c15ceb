#pragma once

// The wreath product G = Z_r wr Gamma: elements are (configuration, position)
// pairs multiplied by
//
//   (eta, x)(eta', x') = (eta + T_x eta', x x'),   (T_x eta)(y) = eta(x^-1 y),
//
// with lamp states added mod r. The word metric on G charges 1 per base
// generator step and c per lamp change, which makes
//
//   d_G((eta, x), (eta', x')) = l(x, x') + c |{y : eta(y) != eta'(y)}|
//
// where l is the shortest walk from x to x' visiting every differing lamp.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "lampwalk/base_group.hpp"
#include "lampwalk/rational.hpp"

namespace lampwalk {

/// Finitely supported map Gamma -> Z_r. Zero states are never stored.
class Configuration {
 public:
  explicit Configuration(int modulus = 2);

  int modulus() const noexcept { return modulus_; }
  int at(const BaseElement& site) const;
  /// Stores `state mod r`, erasing the site when that is zero.
  void set(const BaseElement& site, int state);
  /// Adds `delta` mod r at `site`.
  void add(const BaseElement& site, int delta);

  const std::map<BaseElement, int>& states() const noexcept { return states_; }
  std::size_t size() const noexcept { return states_.size(); }
  bool empty() const noexcept { return states_.empty(); }
  std::vector<BaseElement> support() const;

  /// Componentwise sum mod r.
  Configuration& operator+=(const Configuration& rhs);

  friend bool operator==(const Configuration&, const Configuration&) = default;

  static Configuration delta(const BaseElement& site, int modulus = 2, int state = 1);

 private:
  void check_variant(const BaseElement& site) const;

  int modulus_;
  std::map<BaseElement, int> states_;
};

/// Sites where the two configurations differ (the symmetric difference when
/// r = 2).
std::vector<BaseElement> differing_sites(const Configuration& a, const Configuration& b);

struct LampElement {
  Configuration config;
  BaseElement pos;

  static LampElement identity(const GroupSpec& group, int modulus = 2) {
    return {Configuration(modulus), group.identity()};
  }

  friend bool operator==(const LampElement&, const LampElement&) = default;
};

std::string to_string(const LampElement& g);

struct MetricParams {
  Rational c{1};                 // cost of one lamp change
  int exact_tsp_max_lamps = 16;  // Held-Karp is used up to this many sites
  bool heuristic = false;        // allow certified bounds above the cap
};

/// T_x eta.
Configuration translate(const BaseElement& x, const Configuration& eta);

LampElement lamp_multiply(const LampElement& g, const LampElement& h);
LampElement lamp_inverse(const LampElement& g);

/// Right-multiplies `g` in place by `h` (the walk recursion Z_n = Z_{n-1} i_n).
void lamp_multiply_inplace(LampElement& g, const LampElement& h);

/// Outcome of the travelling-salesman problem from x to x2 through a site set.
/// Exact results have lower == upper and carry the optimal visit order.
struct TourResult {
  std::int64_t lower = 0;
  std::int64_t upper = 0;
  bool exact = true;
  std::vector<BaseElement> order;

  std::int64_t length() const noexcept { return upper; }
};

/// Exact minimum over visit orders, by Held-Karp bitmask DP. Throws
/// CapExceeded when |sites| > params.exact_tsp_max_lamps unless
/// params.heuristic is set, in which case certified bounds are returned.
TourResult solve_tour(const BaseElement& x, const BaseElement& x2, const std::vector<BaseElement>& sites,
                      const MetricParams& params = {});

/// Convenience: the exact tour length (throws above the cap).
std::int64_t tour_length(const BaseElement& x, const BaseElement& x2, const std::vector<BaseElement>& sites,
                         const MetricParams& params = {});

/// Exact tour length on the Cayley tree of F_k for any number of sites:
/// 2 * |edges of the subtree spanning {x, x2} and the sites| - d(x, x2).
std::int64_t tree_tour_length(const BaseElement& x, const BaseElement& x2, const std::vector<BaseElement>& sites);

/// Certified bounds for the tour. Upper: nearest-neighbour tour. Lower: the
/// larger of the minimum spanning tree weight over all points and the longest
/// single detour d(x, s) + d(s, x2).
TourResult tour_bounds(const BaseElement& x, const BaseElement& x2, const std::vector<BaseElement>& sites);

struct LampDistance {
  Rational lower;
  Rational upper;
  bool exact = true;
  std::vector<BaseElement> tour;  // optimal visit order when known

  const Rational& value() const noexcept { return upper; }
};

/// d_G(g, h) with its tour. Free groups above the Held-Karp cap use the exact
/// tree formula; lattices above the cap need params.heuristic (bounds).
LampDistance lamp_distance_detailed(const LampElement& g, const LampElement& h, const MetricParams& params = {});

/// Exact d_G(g, h); throws CapExceeded when only bounds are available.
Rational lamp_distance(const LampElement& g, const LampElement& h, const MetricParams& params = {});

/// Generators of G used by the breadth-first oracle: (k delta_e, e) for
/// k = 1..r-1, and (0, s) for the base generators s.
std::vector<LampElement> lamp_generators(const GroupSpec& group, int modulus);

struct LampElementHash {
  std::size_t operator()(const LampElement& g) const noexcept;
};

/// All elements of the Cayley graph of G within `max_radius` steps of the
/// identity, with their graph distances. Every generator has unit length, so
/// this agrees with d_G only for c = 1.
std::unordered_map<LampElement, int, LampElementHash> lamp_ball_bfs(const GroupSpec& group, int modulus,
                                                                    int max_radius);

/// Breadth-first distance from the identity to `g` (c = 1). max_radius <= 12;
/// throws InvalidInput when `g` is not reached within it.
int bfs_distance_oracle(const GroupSpec& group, const LampElement& g, int max_radius);

}  // namespace lampwalk
