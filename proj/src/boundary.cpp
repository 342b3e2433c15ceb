#include "lampwalk/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <unordered_set>

#include "lampwalk/error.hpp"

namespace lampwalk {

namespace {

BaseElement word_prefix(const BaseElement& w, std::size_t n) {
  auto letters = w.letters();
  return BaseElement::word(std::vector<std::int32_t>(letters.begin(), letters.begin() + static_cast<std::ptrdiff_t>(n)));
}

std::int64_t horizon_or_steps(const Trajectory& traj, std::int64_t horizon) {
  if (horizon < 0) return traj.steps;
  if (horizon > traj.steps) throw InvalidInput("horizon beyond the end of the trajectory");
  return horizon;
}

void check_window(std::int64_t horizon, std::int64_t tail_window) {
  if (tail_window < 1) throw InvalidInput("tail window must be >= 1");
  if (horizon < 2 * tail_window) {
    throw InvalidInput("horizon " + std::to_string(horizon) + " shorter than twice the tail window " +
                       std::to_string(tail_window));
  }
}

std::vector<double> unit(const std::vector<Rational>& m) {
  std::vector<double> v;
  for (const auto& x : m) v.push_back(to_double(x));
  const double norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
  if (norm == 0.0) throw InvalidInput("drift is zero; no preferred direction");
  for (double& x : v) x /= norm;
  return v;
}

// d(a, b) for two sites of the same space.
std::int64_t site_distance(const SiteSpace& space, SiteId a, SiteId b) {
  if (space.is_tree()) {
    const WordTree& t = space.tree();
    return t.depth(a) + t.depth(b) - 2 * static_cast<std::int64_t>(t.depth(t.lowest_common_ancestor(a, b)));
  }
  const LatticeIndex& lat = space.lattice();
  std::int64_t d = 0;
  for (std::size_t i = 0; i < static_cast<std::size_t>(lat.dimension()); ++i) d += std::abs(lat.coord(a, i) - lat.coord(b, i));
  return d;
}

}  // namespace

BoundaryPoint LimitEndEstimate::boundary_point() const {
  if (family == GroupFamily::Free) return BoundaryPoint::estimated_end(stable_prefix);
  if (direction.empty()) throw InvalidInput("no direction");
  return BoundaryPoint::direction(direction);
}

LimitEndEstimate estimate_limit_point(const Trajectory& traj, std::int64_t tail_window, std::int64_t horizon) {
  horizon = horizon_or_steps(traj, horizon);
  check_window(horizon, tail_window);
  LimitEndEstimate est;
  est.family = traj.sites->group().family;
  est.tail_window = tail_window;
  est.horizon = horizon;
  if (est.family == GroupFamily::Free) {
    const PrefixStability ps = stable_prefix(traj, horizon, tail_window);
    est.stable_prefix = traj.sites->element(ps.node);
    est.stabilization_time = ps.stabilization_time;
    return est;
  }
  const BaseElement x = traj.position(horizon);
  if (x.norm() == 0) throw InvalidInput("no direction: walk is at the origin at the horizon");
  est.direction = BoundaryPoint::direction(std::vector<double>(x.coords().begin(), x.coords().end())).as_direction().components;
  // A snapshot, not a running limit: no stabilization time for directions.
  est.stabilization_time = horizon;
  return est;
}

Configuration LimitConfigurationEstimate::settled_configuration(int radius) const {
  Configuration config(modulus);
  for (const auto& lamp : lamps) {
    if (!lamp.settled) continue;
    if (radius >= 0 && sites->norm(lamp.site) > radius) continue;
    config.set(sites->element(lamp.site), lamp.state);
  }
  return config;
}

std::size_t LimitConfigurationEstimate::settled_count() const {
  return static_cast<std::size_t>(std::count_if(lamps.begin(), lamps.end(), [](const LampRecord& l) { return l.settled; }));
}

LimitConfigurationEstimate LimitConfigurationEstimate::from_configuration(const GroupSpec& group,
                                                                          const Configuration& config) {
  auto space = std::make_shared<SiteSpace>(group);
  LimitConfigurationEstimate est;
  est.modulus = config.modulus();
  est.finite_configuration = true;
  for (const auto& [site, state] : config.states()) {
    group.validate(site);
    est.lamps.push_back({space->intern(site), state, 0, true});
  }
  space->finalize();
  est.sites = std::move(space);
  return est;
}

LimitConfigurationEstimate estimate_limit_configuration(const Trajectory& traj, std::int64_t tail_window,
                                                        std::int64_t horizon) {
  horizon = horizon_or_steps(traj, horizon);
  check_window(horizon, tail_window);
  LimitConfigurationEstimate est;
  est.sites = traj.sites;
  est.horizon = horizon;
  est.tail_window = tail_window;
  est.modulus = traj.measure->modulus();
  for (SiteId site : traj.touched_sites) {
    const int state = traj.state_at(site, horizon);
    if (state == 0) continue;
    const std::int64_t flip = traj.last_flip(site, horizon);
    est.lamps.push_back({site, state, flip, flip <= horizon - tail_window});
  }
  return est;
}

OmegaPointEstimate estimate_omega_point(const Trajectory& traj, std::int64_t tail_window, std::int64_t horizon) {
  return {estimate_limit_configuration(traj, tail_window, horizon), estimate_limit_point(traj, tail_window, horizon)};
}

AccumulationReport accumulation_check(const OmegaPointEstimate& est, int depth, const AccumulationOptions& opts) {
  const SiteSpace& space = *est.config.sites;
  AccumulationReport report;
  report.depth = depth;
  report.finite_configuration = est.config.finite_configuration;

  std::function<bool(SiteId)> inside;
  std::optional<SiteId> cylinder;
  std::vector<double> normal;
  if (space.is_tree()) {
    if (depth < 0) throw InvalidInput("depth must be >= 0");
    if (est.point.stable_prefix.size() < static_cast<std::size_t>(depth)) {
      throw InvalidInput("stable prefix of length " + std::to_string(est.point.stable_prefix.size()) +
                         " is shorter than depth " + std::to_string(depth));
    }
    cylinder = space.find(word_prefix(est.point.stable_prefix, static_cast<std::size_t>(depth)));
    inside = [&](SiteId y) { return cylinder && space.tree().is_ancestor(*cylinder, y); };
  } else {
    if (opts.drift.empty()) throw InvalidInput("accumulation check on a lattice needs the drift");
    if (static_cast<int>(opts.drift.size()) != space.group().rank) throw VariantMismatch("drift dimension mismatch");
    normal = unit(opts.drift);
    inside = [&](SiteId y) {
      double dot = 0.0;
      for (std::size_t i = 0; i < normal.size(); ++i) dot += normal[i] * space.lattice().coord(y, i);
      return dot > -opts.slab_offset;
    };
  }

  for (const auto& lamp : est.config.lamps) {
    if (!lamp.settled) continue;
    ++report.settled;
    if (inside(lamp.site)) {
      ++report.inside;
    } else {
      ++report.outside;
      report.max_outside_distance = std::max(report.max_outside_distance, space.norm(lamp.site));
    }
  }
  return report;
}

SpeedEstimate speed_estimate(const std::vector<WalkSummary>& summaries) {
  SpeedEstimate est;
  est.walks = summaries.size();
  if (summaries.empty()) return est;
  const double n = static_cast<double>(summaries.size());
  for (const auto& s : summaries) {
    est.mean += s.speed;
    est.lamp_lower += to_double(s.lamp_lower) / static_cast<double>(s.steps);
    est.lamp_upper += to_double(s.lamp_upper) / static_cast<double>(s.steps);
  }
  est.mean /= n;
  est.lamp_lower /= n;
  est.lamp_upper /= n;
  if (summaries.size() > 1) {
    double ss = 0.0;
    for (const auto& s : summaries) ss += (s.speed - est.mean) * (s.speed - est.mean);
    est.standard_error = std::sqrt(ss / (n - 1.0) / n);
  }
  return est;
}

SpeedEstimate speed_estimate(const std::vector<Trajectory>& trajectories, const MetricParams& params) {
  SummaryOptions opts;
  opts.metric = params;
  std::vector<WalkSummary> summaries;
  summaries.reserve(trajectories.size());
  for (const auto& t : trajectories) summaries.push_back(summarize(t, opts));
  return speed_estimate(summaries);
}

double EmpiricalBoundaryMeasure::frequency(const BaseElement& cylinder) const {
  if (decided == 0) return 0.0;
  auto it = counts.find(cylinder);
  return it == counts.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(decided);
}

double EmpiricalBoundaryMeasure::max_frequency() const {
  std::int64_t best = 0;
  for (const auto& [_, c] : counts) best = std::max(best, c);
  return decided == 0 ? 0.0 : static_cast<double>(best) / static_cast<double>(decided);
}

EmpiricalBoundaryMeasure EmpiricalBoundaryMeasure::coarsen(int shallower_depth) const {
  if (family != GroupFamily::Free) throw VariantMismatch("cylinders are defined for free groups");
  if (shallower_depth < 0 || shallower_depth > depth) throw InvalidInput("coarsening depth out of range");
  EmpiricalBoundaryMeasure out = *this;
  out.depth = shallower_depth;
  out.counts.clear();
  for (const auto& [w, c] : counts) out.counts[word_prefix(w, static_cast<std::size_t>(shallower_depth))] += c;
  return out;
}

EmpiricalBoundaryMeasure harmonic_measure_estimate(const std::vector<WalkSummary>& summaries, int depth) {
  if (depth < 0) throw InvalidInput("cylinder depth must be >= 0");
  EmpiricalBoundaryMeasure m;
  m.depth = depth;
  if (!summaries.empty()) m.family = summaries.front().final_position.family();
  for (const auto& s : summaries) {
    if (m.family == GroupFamily::Free) {
      if (s.stable_prefix.size() < static_cast<std::size_t>(depth)) {
        ++m.undecided;
        continue;
      }
      ++m.counts[word_prefix(s.stable_prefix, static_cast<std::size_t>(depth))];
    } else {
      if (s.direction.empty()) {
        ++m.undecided;
        continue;
      }
      // Nearest coordinate direction +-e_i.
      std::size_t axis = 0;
      for (std::size_t i = 1; i < s.direction.size(); ++i) {
        if (std::abs(s.direction[i]) > std::abs(s.direction[axis])) axis = i;
      }
      std::vector<std::int32_t> atom(s.direction.size(), 0);
      atom[axis] = s.direction[axis] > 0 ? 1 : -1;
      ++m.counts[BaseElement::vector(std::move(atom))];
    }
    ++m.decided;
  }
  return m;
}

StationarityReport stationarity_check(const StepMeasure& mu, const EmpiricalBoundaryMeasure& lhs,
                                      const EmpiricalBoundaryMeasure& rhs, int depth) {
  if (mu.group().family != GroupFamily::Free || lhs.family != GroupFamily::Free || rhs.family != GroupFamily::Free) {
    throw VariantMismatch("stationarity is checked on cylinders of free groups");
  }
  const BaseMeasure nu = project_measure(mu);
  std::int64_t reach = 0;
  for (const auto& a : nu.atoms) reach = std::max(reach, a.element.norm());
  if (depth < 1) throw InvalidInput("cylinder depth must be >= 1");
  if (lhs.depth < depth) throw InvalidInput("measure recorded at depth " + std::to_string(lhs.depth) + " < " + std::to_string(depth));
  if (rhs.depth < depth + reach) {
    throw InvalidInput("cylinder algebra not closed: preimages of depth-" + std::to_string(depth) +
                       " cylinders need recorded depth " + std::to_string(depth + reach) + ", have " +
                       std::to_string(rhs.depth));
  }

  StationarityReport report;
  report.depth = depth;
  const Ball ball = enumerate_ball(mu.group(), mu.group().identity(), depth);
  for (const auto& w : ball.elements) {
    if (static_cast<int>(w.size()) == depth) report.sides[w] = {0.0, 0.0};
  }
  const EmpiricalBoundaryMeasure coarse = lhs.coarsen(depth);
  for (auto& [w, sides] : report.sides) sides.first = coarse.frequency(w);

  // nu(g^-1 U) = P[g X_inf in U]; with |p| >= L + |g| the first L letters of
  // g xi are those of g p for every xi in the cylinder of p.
  for (const auto& [p, count] : rhs.counts) {
    const double f = static_cast<double>(count) / static_cast<double>(rhs.decided);
    for (const auto& a : nu.atoms) {
      const BaseElement image = word_prefix(multiply(a.element, p), static_cast<std::size_t>(depth));
      report.sides[image].second += to_double(a.probability) * f;
    }
  }

  double worst_var = 0.0;
  bool first = true;
  for (const auto& [w, sides] : report.sides) {
    const double gap = std::abs(sides.first - sides.second);
    if (first || gap > report.max_discrepancy) {
      report.max_discrepancy = gap;
      report.worst_cylinder = w;
      first = false;
    }
    worst_var = std::max(worst_var, sides.first * (1.0 - sides.first));
  }
  const double n1 = static_cast<double>(std::max<std::int64_t>(lhs.decided, 1));
  const double n2 = static_cast<double>(std::max<std::int64_t>(rhs.decided, 1));
  report.confidence_radius = 3.0 * std::sqrt(worst_var / n1 + worst_var / n2);
  return report;
}

StationarityReport stationarity_check(const StepMeasure& mu, const EmpiricalBoundaryMeasure& measure, int depth) {
  return stationarity_check(mu, measure, measure, depth);
}

AtomReport atom_check(const std::vector<WalkSummary>& summaries, int max_depth) {
  AtomReport report;
  if (!summaries.empty() && !summaries.front().final_position.is_free()) {
    report.atomic = true;
    report.note = "atomic by design, two-point Omega";
    return report;
  }
  if (max_depth < 1) throw InvalidInput("max depth must be >= 1");
  for (int L = 1; L <= max_depth; ++L) report.max_mass.push_back(harmonic_measure_estimate(summaries, L).max_frequency());
  report.decaying = true;
  for (std::size_t i = 1; i < report.max_mass.size(); ++i) {
    if (!(report.max_mass[i] < report.max_mass[i - 1])) report.decaying = false;
  }
  report.atomic = !report.decaying;

  std::map<std::pair<BaseElement, std::map<BaseElement, int>>, std::size_t> groups;
  for (const auto& s : summaries) {
    if (s.stable_prefix.size() < static_cast<std::size_t>(max_depth)) continue;
    ++groups[{word_prefix(s.stable_prefix, static_cast<std::size_t>(max_depth)), s.settled_near_origin.states()}];
  }
  for (const auto& [_, k] : groups) report.shared_pairs += k * (k - 1) / 2;
  report.note = report.atomic ? "max cylinder mass does not decay" : "max cylinder mass decays";
  return report;
}

CpWitness cp_witness(const Trajectory& traj, std::int64_t from, std::int64_t to) {
  from = std::max<std::int64_t>(from, 0);
  to = std::min(to, traj.steps);
  CpWitness w;
  if (to <= from) return w;
  std::vector<std::vector<SiteId>> touched(static_cast<std::size_t>(to - from));
  for (SiteId site : traj.touched_sites) {
    for (const auto& e : traj.lamp_events[static_cast<std::size_t>(site)]) {
      if (e.time > from && e.time <= to) touched[static_cast<std::size_t>(e.time - from - 1)].push_back(site);
    }
  }
  const SiteSpace& space = *traj.sites;
  double total = 0.0;
  for (std::int64_t t = from + 1; t <= to; ++t) {
    const SiteId x = traj.positions[static_cast<std::size_t>(t)];
    const std::int64_t dx = space.norm(x);
    if (dx == 0) continue;
    for (SiteId y : touched[static_cast<std::size_t>(t - from - 1)]) {
      total += static_cast<double>(site_distance(space, x, y)) / static_cast<double>(dx);
      ++w.samples;
    }
  }
  if (w.samples > 0) w.mean_ratio = total / static_cast<double>(w.samples);
  return w;
}

bool check_support_containment(const Trajectory& traj) {
  const StepMeasure& mu = *traj.measure;
  std::unordered_set<BaseElement> reach;
  BaseElement x = mu.group().identity();
  for (std::int64_t t = 1; t <= traj.steps; ++t) {
    const LampElement& f = traj.increment(t);
    for (const auto& [s, _] : f.config.states()) reach.insert(multiply(x, s));
    x *= f.pos;
  }
  const LampElement last = replay(traj);
  for (const auto& [site, _] : last.config.states()) {
    if (!reach.count(site)) return false;
  }
  return true;
}

}  // namespace lampwalk
