#pragma once

// Half-space geometry for pairs of boundary points: the base strip between
// two ends (a bi-infinite geodesic on the tree, all of Z^d on the lattice),
// half-space partitions through a strip point, the configuration glued from
// two limit configurations, and the lifted strip in the lamplighter group.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "lampwalk/base_group.hpp"
#include "lampwalk/boundary.hpp"
#include "lampwalk/boundary_point.hpp"
#include "lampwalk/lamplighter.hpp"
#include "lampwalk/rational.hpp"

namespace lampwalk {

enum class StripKind { TreeGeodesic, FullLattice };

struct BaseStrip {
  StripKind kind;
  GroupSpec group;
  BoundaryPoint u;
  BoundaryPoint v;
  std::size_t confluence = 0;  // tree: length of the common prefix of u and v

  bool contains(const BaseElement& y) const;
  /// Neighbour of the strip point x one step toward u. Tree only.
  BaseElement toward_u(const BaseElement& x) const;
  /// Strip points within distance `radius` of `center`, sorted.
  std::vector<BaseElement> points_within(const BaseElement& center, int radius) const;
};

/// Tree: u and v must be distinct exact ends. Lattice: u and v must be
/// directions; the strip is the whole lattice.
BaseStrip base_strip(const GroupSpec& group, const BoundaryPoint& u, const BoundaryPoint& v);
/// Lattice strip whose ends are +-m/|m| for the drift m.
BaseStrip lattice_strip(const GroupSpec& group, const std::vector<Rational>& drift);

/// |strip ∩ B(e, n)|. Throws CapExceeded above the ball cap (group default
/// when cap < 0).
std::int64_t strip_ball_count(const BaseStrip& strip, int n, int cap = -1);

/// beta_u(x, y) = lim d(x, y_i) - i along the ray y = y_0, y_1, ... to u.
/// Tree only; u must be an end whose letters are known up to max(|x|, |y|).
std::int64_t busemann(const BoundaryPoint& u, const BaseElement& x, const BaseElement& y);

enum class PartitionScheme { TreeEdgeCut, Horosphere, Hyperplane };
enum class Side { Plus, Minus, Neither };

std::string to_string(PartitionScheme scheme);
PartitionScheme parse_scheme(std::string_view text);
std::string to_string(Side side);

struct HalfSpacePartition {
  PartitionScheme scheme;
  BaseElement x;
  BaseStrip strip;
  BaseElement cut_far;               // TreeEdgeCut: far endpoint of the cut edge (toward u)
  std::vector<std::int64_t> normal;  // Hyperplane: integer multiple of the drift

  Side classify(const BaseElement& y) const;
};

/// Throws InvalidInput when x is not on the strip, and VariantMismatch when
/// the scheme does not fit the strip. Hyperplane partitions need the drift,
/// which must point at strip.u.
HalfSpacePartition half_space_partition(const BaseStrip& strip, const BaseElement& x, PartitionScheme scheme,
                                        const std::vector<Rational>& drift = {});

/// phi_minus on Plus, phi_plus on Minus, zero on Neither.
Configuration glue_configuration(const Configuration& phi_plus, const Configuration& phi_minus,
                                 const HalfSpacePartition& partition);

/// A point (phi, u) of Omega with an exact boundary point.
struct ExactOmegaPoint {
  Configuration config;
  BoundaryPoint point;
  bool promoted = false;  // end completed from a finite estimate
};

/// Settled configuration of the estimate, with an estimated end completed to
/// an exact one (flagged). Directions are kept as they are.
ExactOmegaPoint promote_omega_point(const OmegaPointEstimate& est);

/// g . (phi, u) = (eta + T_gamma phi, gamma u) for g = (eta, gamma).
ExactOmegaPoint act_on_omega(const LampElement& g, const ExactOmegaPoint& b);

/// (Phi(b+, b-, x), x).
LampElement lifted_strip_element(const GroupSpec& group, const ExactOmegaPoint& b_plus, const ExactOmegaPoint& b_minus,
                                 const BaseElement& x, PartitionScheme scheme, const std::vector<Rational>& drift = {});

struct StripCount {
  int n = 0;
  std::int64_t count_g = 0;     // |S(b+, b-) ∩ B_G(id, n)|
  std::int64_t count_base = 0;  // |strip ∩ B(e, n)|
};

/// Counts for every radius 0..n_max. Ends must be exact; d_G must be exact
/// for every strip point (CapExceeded otherwise).
std::vector<StripCount> lifted_strip_curve(const GroupSpec& group, const ExactOmegaPoint& b_plus,
                                           const ExactOmegaPoint& b_minus, PartitionScheme scheme, int n_max,
                                           const MetricParams& params = {}, const std::vector<Rational>& drift = {});
StripCount lifted_strip_count(const GroupSpec& group, const ExactOmegaPoint& b_plus, const ExactOmegaPoint& b_minus,
                              PartitionScheme scheme, int n, const MetricParams& params = {},
                              const std::vector<Rational>& drift = {});

struct EquivarianceReport {
  std::size_t checked = 0;
  std::size_t strip_mismatches = 0;
  std::size_t partition_mismatches = 0;
  std::size_t lifted_mismatches = 0;
  std::vector<std::string> examples;  // first few offending elements

  std::size_t mismatches() const noexcept { return strip_mismatches + partition_mismatches + lifted_mismatches; }
  bool ok() const noexcept { return mismatches() == 0; }
};

/// With g = (eta, gamma), compares on B(e, radius) ∪ B(gamma x, radius):
/// (i) gamma s(u, v) with s(gamma u, gamma v); (ii) gamma Gamma_pm(u, v, x)
/// with Gamma_pm(gamma u, gamma v, gamma x); (iii) g (Phi(b+, b-, x'), x')
/// with (Phi(g b+, g b-, gamma x'), gamma x') for strip points x' near x.
EquivarianceReport check_equivariance(const GroupSpec& group, const LampElement& g, const ExactOmegaPoint& b_plus,
                                      const ExactOmegaPoint& b_minus, const BaseElement& x, PartitionScheme scheme,
                                      int radius = 5, const std::vector<Rational>& drift = {});

}  // namespace lampwalk
