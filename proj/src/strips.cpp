#include "lampwalk/strips.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lampwalk/error.hpp"

namespace lampwalk {

namespace {

constexpr std::size_t kMaxExamples = 8;

// Length of the common prefix of the word x and the end u.
std::size_t prefix_agreement(const BoundaryPoint& u, const BaseElement& x) {
  const End& e = u.as_end();
  std::size_t i = 0;
  for (std::int32_t letter : x.letters()) {
    if (!e.exact && i >= e.prefix.size()) {
      throw InvalidInput("estimated end " + to_string(u) + " is too short for " + to_string(x));
    }
    if (u.letter(i) != letter) break;
    ++i;
  }
  return i;
}

bool is_prefix(const BaseElement& p, const BaseElement& y) {
  if (p.size() > y.size()) return false;
  return std::equal(p.letters().begin(), p.letters().end(), y.letters().begin());
}

// p with |p| = i on the ray from e to u.
bool on_ray(const BoundaryPoint& u, const BaseElement& y) {
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (u.letter(i) != y.letters()[i]) return false;
  }
  return true;
}

std::vector<std::int64_t> integer_normal(const std::vector<Rational>& m) {
  std::int64_t scale = 1;
  for (const auto& x : m) scale = std::lcm(scale, x.denominator());
  std::vector<std::int64_t> n;
  for (const auto& x : m) n.push_back(x.numerator() * (scale / x.denominator()));
  return n;
}

void require_exact(const BoundaryPoint& p) {
  if (!p.exact()) throw InvalidInput("exact boundary point required, got estimate " + to_string(p));
}

void append_example(EquivarianceReport& r, std::string text) {
  if (r.examples.size() < kMaxExamples) r.examples.push_back(std::move(text));
}

}  // namespace

bool BaseStrip::contains(const BaseElement& y) const {
  group.validate(y);
  if (kind == StripKind::FullLattice) return true;
  if (y.size() < confluence) return false;
  return on_ray(u, y) || on_ray(v, y);
}

BaseElement BaseStrip::toward_u(const BaseElement& x) const {
  if (kind != StripKind::TreeGeodesic) throw VariantMismatch("toward_u is defined for tree strips");
  if (!contains(x)) throw InvalidInput(to_string(x) + " is not on the strip");
  if (on_ray(u, x)) return u.truncate(x.size() + 1);
  return v.truncate(x.size() - 1);  // |x| > confluence on the v side
}

std::vector<BaseElement> BaseStrip::points_within(const BaseElement& center, int radius) const {
  if (kind == StripKind::FullLattice) return enumerate_ball(group, center, radius).elements;
  std::vector<BaseElement> out;
  if (radius < 0) return out;
  const std::size_t top = center.size() + static_cast<std::size_t>(radius);
  for (std::size_t i = confluence; i <= top; ++i) {
    for (const BoundaryPoint* end : {&u, &v}) {
      if (i == confluence && end == &v) continue;
      BaseElement p = end->truncate(i);
      if (word_distance(center, p) <= radius) out.push_back(std::move(p));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

BaseStrip base_strip(const GroupSpec& group, const BoundaryPoint& u, const BoundaryPoint& v) {
  if (group.family == GroupFamily::Lattice) {
    const auto& du = u.as_direction();
    const auto& dv = v.as_direction();
    if (static_cast<int>(du.components.size()) != group.rank || static_cast<int>(dv.components.size()) != group.rank) {
      throw VariantMismatch("direction dimension does not match Z^" + std::to_string(group.rank));
    }
    return BaseStrip{StripKind::FullLattice, group, u, v, 0};
  }
  require_exact(u);
  require_exact(v);
  for (const auto* p : {&u, &v}) {
    const End& e = p->as_end();
    group.validate(e.prefix);
    group.validate(e.period);
  }
  const std::size_t c = common_prefix_length(u, v);
  if (c == static_cast<std::size_t>(-1)) throw InvalidInput("strip needs distinct ends, got u = v = " + to_string(u));
  return BaseStrip{StripKind::TreeGeodesic, group, u, v, c};
}

BaseStrip lattice_strip(const GroupSpec& group, const std::vector<Rational>& drift) {
  if (group.family != GroupFamily::Lattice) throw VariantMismatch("lattice strip needs Z^d");
  if (static_cast<int>(drift.size()) != group.rank) throw InvalidInput("drift dimension mismatch");
  std::vector<double> m;
  for (const auto& x : drift) m.push_back(to_double(x));
  std::vector<double> minus = m;
  for (double& x : minus) x = -x;
  return base_strip(group, BoundaryPoint::direction(m), BoundaryPoint::direction(minus));
}

std::int64_t strip_ball_count(const BaseStrip& strip, int n, int cap) {
  if (cap < 0) cap = strip.group.default_ball_cap();
  if (n > cap) throw CapExceeded("ball radius", cap, n);
  if (n < 0) return 0;
  if (strip.kind == StripKind::FullLattice) return static_cast<std::int64_t>(strip.group.ball_size(n));
  // The geodesic meets B(e, n) in the points at depth confluence..n on each side.
  const auto c = static_cast<std::int64_t>(strip.confluence);
  return n < c ? 0 : 2 * (n - c) + 1;
}

std::int64_t busemann(const BoundaryPoint& u, const BaseElement& x, const BaseElement& y) {
  if (!u.is_end() || !x.is_free() || !y.is_free()) throw VariantMismatch("Busemann functions are computed on trees");
  // d(z, u_j) = |z| + j - 2 lcp(z, u) once j >= |z|.
  const auto level = [&](const BaseElement& z) {
    return static_cast<std::int64_t>(z.size()) - 2 * static_cast<std::int64_t>(prefix_agreement(u, z));
  };
  return level(x) - level(y);
}

std::string to_string(PartitionScheme scheme) {
  switch (scheme) {
    case PartitionScheme::TreeEdgeCut: return "tree-edge-cut";
    case PartitionScheme::Horosphere: return "horosphere";
    case PartitionScheme::Hyperplane: return "hyperplane";
  }
  return "?";
}

PartitionScheme parse_scheme(std::string_view text) {
  if (text == "tree-edge-cut" || text == "cut") return PartitionScheme::TreeEdgeCut;
  if (text == "horosphere") return PartitionScheme::Horosphere;
  if (text == "hyperplane") return PartitionScheme::Hyperplane;
  throw InvalidInput("unknown partition scheme '" + std::string(text) + "'");
}

std::string to_string(Side side) {
  switch (side) {
    case Side::Plus: return "plus";
    case Side::Minus: return "minus";
    case Side::Neither: return "neither";
  }
  return "?";
}

Side HalfSpacePartition::classify(const BaseElement& y) const {
  strip.group.validate(y);
  switch (scheme) {
    case PartitionScheme::TreeEdgeCut:
      // Removing the edge {x, cut_far} leaves the component of cut_far (u side).
      if (cut_far.size() > x.size()) return is_prefix(cut_far, y) ? Side::Plus : Side::Minus;
      return is_prefix(x, y) ? Side::Minus : Side::Plus;
    case PartitionScheme::Horosphere:
      if (busemann(strip.u, x, y) == 0) return Side::Plus;
      if (busemann(strip.v, x, y) == 0) return Side::Minus;
      return Side::Neither;
    case PartitionScheme::Hyperplane: {
      std::int64_t dot = 0;
      for (std::size_t i = 0; i < normal.size(); ++i) {
        dot += (static_cast<std::int64_t>(y.coords()[i]) - x.coords()[i]) * normal[i];
      }
      return dot > 0 ? Side::Plus : Side::Minus;  // the plane itself goes to Minus
    }
  }
  return Side::Neither;
}

HalfSpacePartition half_space_partition(const BaseStrip& strip, const BaseElement& x, PartitionScheme scheme,
                                        const std::vector<Rational>& drift) {
  const bool tree = strip.kind == StripKind::TreeGeodesic;
  if (tree == (scheme == PartitionScheme::Hyperplane)) {
    throw VariantMismatch("scheme " + to_string(scheme) + " does not apply to this strip");
  }
  if (!strip.contains(x)) throw InvalidInput(to_string(x) + " is not on the strip");
  HalfSpacePartition p{scheme, x, strip, BaseElement{}, {}};
  if (scheme == PartitionScheme::TreeEdgeCut) p.cut_far = strip.toward_u(x);
  if (scheme == PartitionScheme::Hyperplane) {
    if (static_cast<int>(drift.size()) != strip.group.rank) throw InvalidInput("hyperplane partition needs the drift");
    p.normal = integer_normal(drift);
    if (std::all_of(p.normal.begin(), p.normal.end(), [](std::int64_t a) { return a == 0; })) {
      throw InvalidInput("hyperplane partition needs a nonzero drift");
    }
    const BoundaryPoint expected = lattice_strip(strip.group, drift).u;
    const auto& want = expected.as_direction().components;
    const auto& got = strip.u.as_direction().components;
    for (std::size_t i = 0; i < want.size(); ++i) {
      if (std::abs(want[i] - got[i]) > BoundaryPoint::kUnitTolerance) {
        throw InvalidInput("strip end u is not m/|m| for the given drift");
      }
    }
  }
  return p;
}

Configuration glue_configuration(const Configuration& phi_plus, const Configuration& phi_minus,
                                 const HalfSpacePartition& partition) {
  if (phi_plus.modulus() != phi_minus.modulus()) throw InvalidInput("configurations have different moduli");
  Configuration out(phi_plus.modulus());
  for (const auto& [site, state] : phi_minus.states()) {
    if (partition.classify(site) == Side::Plus) out.set(site, state);
  }
  for (const auto& [site, state] : phi_plus.states()) {
    if (partition.classify(site) == Side::Minus) out.set(site, state);
  }
  return out;
}

ExactOmegaPoint promote_omega_point(const OmegaPointEstimate& est) {
  const Configuration config = est.config.settled_configuration();
  const BoundaryPoint point = est.point.boundary_point();
  if (point.is_direction() || point.exact()) return {config, point, false};
  return {config, promote_end(point), true};
}

ExactOmegaPoint act_on_omega(const LampElement& g, const ExactOmegaPoint& b) {
  Configuration config = g.config;
  config += translate(g.pos, b.config);
  return {std::move(config), act_on_boundary(g.pos, b.point), b.promoted};
}

LampElement lifted_strip_element(const GroupSpec& group, const ExactOmegaPoint& b_plus, const ExactOmegaPoint& b_minus,
                                 const BaseElement& x, PartitionScheme scheme, const std::vector<Rational>& drift) {
  const BaseStrip strip = base_strip(group, b_plus.point, b_minus.point);
  const HalfSpacePartition partition = half_space_partition(strip, x, scheme, drift);
  return {glue_configuration(b_plus.config, b_minus.config, partition), x};
}

std::vector<StripCount> lifted_strip_curve(const GroupSpec& group, const ExactOmegaPoint& b_plus,
                                           const ExactOmegaPoint& b_minus, PartitionScheme scheme, int n_max,
                                           const MetricParams& params, const std::vector<Rational>& drift) {
  require_exact(b_plus.point);
  require_exact(b_minus.point);
  const BaseStrip strip = base_strip(group, b_plus.point, b_minus.point);
  strip_ball_count(strip, n_max);  // cap check before any work
  const LampElement id = LampElement::identity(group, b_plus.config.modulus());

  std::vector<std::int64_t> hits(static_cast<std::size_t>(std::max(n_max, 0)) + 1, 0);
  for (const BaseElement& x : strip.points_within(group.identity(), n_max)) {
    const LampElement s{glue_configuration(b_plus.config, b_minus.config, half_space_partition(strip, x, scheme, drift)), x};
    // d_G >= d(e, x) + c |supp Phi|: skip the tour when that already exceeds n_max.
    if (Rational(x.norm()) + params.c * static_cast<std::int64_t>(s.config.size()) > Rational(n_max)) continue;
    const Rational d = lamp_distance(id, s, params);
    const std::int64_t radius = (d.numerator() + d.denominator() - 1) / d.denominator();  // ceil
    if (radius <= n_max) ++hits[static_cast<std::size_t>(radius)];
  }
  std::vector<StripCount> curve;
  std::int64_t running = 0;
  for (int n = 0; n <= n_max; ++n) {
    running += hits[static_cast<std::size_t>(n)];
    curve.push_back({n, running, strip_ball_count(strip, n)});
  }
  return curve;
}

StripCount lifted_strip_count(const GroupSpec& group, const ExactOmegaPoint& b_plus, const ExactOmegaPoint& b_minus,
                              PartitionScheme scheme, int n, const MetricParams& params,
                              const std::vector<Rational>& drift) {
  if (n < 0) throw InvalidInput("radius must be >= 0");
  return lifted_strip_curve(group, b_plus, b_minus, scheme, n, params, drift).back();
}

EquivarianceReport check_equivariance(const GroupSpec& group, const LampElement& g, const ExactOmegaPoint& b_plus,
                                      const ExactOmegaPoint& b_minus, const BaseElement& x, PartitionScheme scheme,
                                      int radius, const std::vector<Rational>& drift) {
  require_exact(b_plus.point);
  require_exact(b_minus.point);
  const BaseElement& gamma = g.pos;
  const BaseElement gamma_inv = inverse(gamma);
  const BaseElement gx = multiply(gamma, x);
  const ExactOmegaPoint gb_plus = act_on_omega(g, b_plus);
  const ExactOmegaPoint gb_minus = act_on_omega(g, b_minus);

  const BaseStrip strip = base_strip(group, b_plus.point, b_minus.point);
  const BaseStrip moved = base_strip(group, gb_plus.point, gb_minus.point);
  const HalfSpacePartition part = half_space_partition(strip, x, scheme, drift);
  const HalfSpacePartition moved_part = half_space_partition(moved, gx, scheme, drift);

  std::vector<BaseElement> test = enumerate_ball(group, group.identity(), radius).elements;
  const auto around = enumerate_ball(group, gx, radius).elements;
  test.insert(test.end(), around.begin(), around.end());
  std::sort(test.begin(), test.end());
  test.erase(std::unique(test.begin(), test.end()), test.end());

  EquivarianceReport report;
  for (const BaseElement& y : test) {
    const BaseElement pre = multiply(gamma_inv, y);
    ++report.checked;
    if (moved.contains(y) != strip.contains(pre)) {
      ++report.strip_mismatches;
      append_example(report, "strip at " + to_string(y));
    }
    const Side a = moved_part.classify(y);
    const Side b = part.classify(pre);
    if (a != b) {
      ++report.partition_mismatches;
      append_example(report, "partition at " + to_string(y) + ": " + to_string(a) + " vs " + to_string(b));
    }
  }

  // Strip points near x (x and its neighbours on the lattice).
  std::vector<BaseElement> anchors =
      strip.kind == StripKind::TreeGeodesic ? strip.points_within(x, radius) : strip.points_within(x, 1);
  for (const BaseElement& xp : anchors) {
    const LampElement lhs = lamp_multiply(g, lifted_strip_element(group, b_plus, b_minus, xp, scheme, drift));
    const LampElement rhs = lifted_strip_element(group, gb_plus, gb_minus, multiply(gamma, xp), scheme, drift);
    ++report.checked;
    if (!(lhs == rhs)) {
      ++report.lifted_mismatches;
      append_example(report, "lifted strip at x' = " + to_string(xp) + ": " + to_string(lhs) + " vs " + to_string(rhs));
    }
  }
  return report;
}

}  // namespace lampwalk
