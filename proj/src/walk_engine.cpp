#include "lampwalk/walk_engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numeric>
#include <unordered_set>

#include "lampwalk/error.hpp"
#include "lampwalk/rng.hpp"

namespace lampwalk {

namespace {

bool atom_less(const Atom& a, const Atom& b) {
  if (a.element.pos != b.element.pos) return a.element.pos < b.element.pos;
  return a.element.config.states() < b.element.config.states();
}

std::uint64_t fixed_point_threshold(const Rational& cumulative) {
  if (cumulative >= Rational(1)) return UINT64_MAX;
  const auto num = static_cast<unsigned __int128>(cumulative.numerator());
  const auto den = static_cast<unsigned __int128>(cumulative.denominator());
  return static_cast<std::uint64_t>((num << 64) / den);
}

/// True when the integer span of `vectors` is all of Z^d.
bool spans_lattice(std::vector<std::vector<std::int64_t>> rows, int d) {
  std::size_t pivot_row = 0;
  for (int col = 0; col < d; ++col) {
    // Euclid on column `col` among rows >= pivot_row.
    while (true) {
      std::size_t best = rows.size();
      for (std::size_t r = pivot_row; r < rows.size(); ++r) {
        if (rows[r][static_cast<std::size_t>(col)] != 0 &&
            (best == rows.size() || std::llabs(rows[r][static_cast<std::size_t>(col)]) <
                                        std::llabs(rows[best][static_cast<std::size_t>(col)]))) {
          best = r;
        }
      }
      if (best == rows.size()) return false;
      std::swap(rows[pivot_row], rows[best]);
      bool reduced = true;
      const std::int64_t p = rows[pivot_row][static_cast<std::size_t>(col)];
      for (std::size_t r = pivot_row + 1; r < rows.size(); ++r) {
        const std::int64_t q = rows[r][static_cast<std::size_t>(col)] / p;
        if (q != 0) {
          for (int c = 0; c < d; ++c) {
            rows[r][static_cast<std::size_t>(c)] -= q * rows[pivot_row][static_cast<std::size_t>(c)];
          }
        }
        if (rows[r][static_cast<std::size_t>(col)] != 0) reduced = false;
      }
      if (reduced) break;
    }
    if (std::llabs(rows[pivot_row][static_cast<std::size_t>(col)]) != 1) return false;
    ++pivot_row;
  }
  return true;
}

bool free_base_generated(const GroupSpec& group, const std::vector<BaseElement>& support, int max_depth) {
  std::vector<BaseElement> gens;
  for (const auto& x : support) {
    if (x.is_identity()) continue;
    gens.push_back(x);
    gens.push_back(x.inverse());
  }
  std::vector<BaseElement> targets;
  for (int i = 1; i <= group.rank; ++i) targets.push_back(BaseElement::word({i}));

  constexpr std::size_t kVisitCap = 200'000;
  std::unordered_set<BaseElement> seen{group.identity()};
  std::vector<BaseElement> frontier{group.identity()};
  auto all_found = [&] {
    return std::all_of(targets.begin(), targets.end(), [&](const BaseElement& t) { return seen.count(t) > 0; });
  };
  for (int depth = 0; depth < max_depth && !all_found(); ++depth) {
    std::vector<BaseElement> next;
    for (const auto& w : frontier) {
      for (const auto& g : gens) {
        BaseElement v = multiply(w, g);
        if (seen.insert(v).second) next.push_back(std::move(v));
        if (seen.size() > kVisitCap) return all_found();
      }
    }
    frontier = std::move(next);
  }
  return all_found();
}

bool is_pure_lamp(const LampElement& g) {
  if (!g.pos.is_identity() || g.config.size() != 1) return false;
  return std::gcd(g.config.states().begin()->second, g.config.modulus()) == 1;
}

bool lamp_generator_reachable(const StepMeasure& mu, int max_depth) {
  std::vector<LampElement> gens;
  for (const auto& a : mu.atoms()) {
    gens.push_back(a.element);
    gens.push_back(lamp_inverse(a.element));
  }
  for (const auto& g : gens) {
    if (is_pure_lamp(g)) return true;
  }
  constexpr std::size_t kVisitCap = 200'000;
  const LampElement id = LampElement::identity(mu.group(), mu.modulus());
  std::unordered_set<LampElement, LampElementHash> seen{id};
  std::vector<LampElement> frontier{id};
  for (int depth = 0; depth < max_depth; ++depth) {
    std::vector<LampElement> next;
    for (const auto& w : frontier) {
      for (const auto& g : gens) {
        LampElement v = lamp_multiply(w, g);
        if (is_pure_lamp(v)) return true;
        if (seen.insert(v).second) next.push_back(std::move(v));
        if (seen.size() > kVisitCap) return false;
      }
    }
    frontier = std::move(next);
  }
  return false;
}

}  // namespace

StepMeasure StepMeasure::create(const GroupSpec& group, int modulus, std::vector<Atom> atoms, GenerationCheck check) {
  if (atoms.empty()) throw InvalidInput("step measure needs at least one atom");
  Rational total{0};
  for (const auto& a : atoms) {
    if (a.probability <= Rational(0)) throw InvalidInput("atom " + to_string(a.element) + " has nonpositive probability");
    if (a.element.config.modulus() != modulus) throw VariantMismatch("atom lamp modulus differs from r");
    group.validate(a.element.pos);
    for (const auto& [site, state] : a.element.config.states()) group.validate(site);
    total += a.probability;
  }
  if (total != Rational(1)) throw InvalidInput("step probabilities sum to " + to_string(total) + ", not 1");

  std::sort(atoms.begin(), atoms.end(), atom_less);
  std::vector<Atom> merged;
  for (auto& a : atoms) {
    if (!merged.empty() && merged.back().element == a.element) {
      merged.back().probability += a.probability;
    } else {
      merged.push_back(std::move(a));
    }
  }

  StepMeasure mu;
  mu.group_ = group;
  mu.modulus_ = modulus;
  mu.atoms_ = std::move(merged);
  Rational cumulative{0};
  for (const auto& a : mu.atoms_) {
    cumulative += a.probability;
    mu.thresholds_.push_back(fixed_point_threshold(cumulative));
  }
  if (check == GenerationCheck::Require) {
    const GenerationReport report = check_generation(mu);
    if (!report.ok()) throw InvalidInput("step measure does not generate G: " + report.diagnostic);
  }
  return mu;
}

std::size_t StepMeasure::sample(std::uint64_t u) const noexcept {
  const auto it = std::upper_bound(thresholds_.begin(), thresholds_.end(), u);
  const auto idx = static_cast<std::size_t>(it - thresholds_.begin());
  return std::min(idx, atoms_.size() - 1);
}

GenerationReport check_generation(const StepMeasure& mu, int max_depth) {
  GenerationReport report;
  const BaseMeasure nu = project_measure(mu);
  std::vector<BaseElement> support;
  for (const auto& a : nu.atoms) support.push_back(a.element);

  if (mu.group().family == GroupFamily::Free) {
    report.base_generated = free_base_generated(mu.group(), support, max_depth);
  } else {
    std::vector<std::vector<std::int64_t>> rows;
    for (const auto& x : support) rows.emplace_back(x.coords().begin(), x.coords().end());
    report.base_generated = spans_lattice(std::move(rows), mu.group().rank);
  }
  report.lamp_reachable = lamp_generator_reachable(mu, max_depth);

  if (!report.base_generated) {
    report.diagnostic = "projected support does not generate " + to_string(mu.group()) +
                        " within products of depth " + std::to_string(max_depth);
  }
  if (!report.lamp_reachable) {
    if (!report.diagnostic.empty()) report.diagnostic += "; ";
    report.diagnostic += "no single-lamp element (k delta_y, e) with gcd(k, r) = 1 within depth " +
                         std::to_string(max_depth);
  }
  return report;
}

BaseMeasure project_measure(const StepMeasure& mu) {
  std::map<BaseElement, Rational> grouped;
  for (const auto& a : mu.atoms()) grouped[a.element.pos] += a.probability;
  BaseMeasure nu{mu.group(), {}};
  for (auto& [x, p] : grouped) nu.atoms.push_back({x, p});
  return nu;
}

StepMeasure reflect_measure(const StepMeasure& mu) {
  std::vector<Atom> atoms;
  atoms.reserve(mu.atoms().size());
  for (const auto& a : mu.atoms()) atoms.push_back({lamp_inverse(a.element), a.probability});
  return StepMeasure::create(mu.group(), mu.modulus(), std::move(atoms), GenerationCheck::Skip);
}

BaseMeasure reflect_measure(const BaseMeasure& nu) {
  std::map<BaseElement, Rational> grouped;
  for (const auto& a : nu.atoms) grouped[a.element.inverse()] += a.probability;
  BaseMeasure out{nu.group, {}};
  for (auto& [x, p] : grouped) out.atoms.push_back({x, p});
  return out;
}

Moments first_moment(const StepMeasure& mu, const MetricParams& params) {
  Moments m{Rational(0), Rational(0)};
  const LampElement id = LampElement::identity(mu.group(), mu.modulus());
  for (const auto& a : mu.atoms()) {
    m.lamp += a.probability * lamp_distance(id, a.element, params);
    m.base += a.probability * a.element.pos.norm();
  }
  return m;
}

std::vector<Rational> drift(const BaseMeasure& nu) {
  if (nu.group.family != GroupFamily::Lattice) throw VariantMismatch("drift is defined for lattice measures");
  std::vector<Rational> m(static_cast<std::size_t>(nu.group.rank), Rational(0));
  for (const auto& a : nu.atoms) {
    for (std::size_t i = 0; i < m.size(); ++i) m[i] += a.probability * a.element.coords()[i];
  }
  return m;
}

StepMeasure simple_random_walk(const GroupSpec& group, int modulus) {
  const auto gens = group.generators();
  std::vector<Atom> atoms;
  for (const auto& s : gens) {
    atoms.push_back({{Configuration(modulus), s}, Rational(1, static_cast<std::int64_t>(gens.size()))});
  }
  return StepMeasure::create(group, modulus, std::move(atoms), GenerationCheck::Skip);
}

StepMeasure switch_walk(const GroupSpec& group, int modulus) {
  const auto gens = group.generators();
  const Rational p(1, 2 * static_cast<std::int64_t>(gens.size()));
  std::vector<Atom> atoms;
  for (const auto& s : gens) {
    atoms.push_back({{Configuration(modulus), s}, p});
    atoms.push_back({{Configuration::delta(group.identity(), modulus), s}, p});
  }
  return StepMeasure::create(group, modulus, std::move(atoms));
}

StepMeasure drift_walk(const GroupSpec& group, int modulus, const std::vector<Rational>& m, bool lamps) {
  if (group.family != GroupFamily::Lattice) throw VariantMismatch("drift walks live on Z^d");
  if (static_cast<int>(m.size()) != group.rank) throw InvalidInput("drift vector has the wrong dimension");
  Rational l1{0};
  for (const auto& x : m) l1 += x < Rational(0) ? -x : x;
  if (l1 >= Rational(1)) throw InvalidInput("drift walk needs |m|_1 < 1, got " + to_string(l1));
  const Rational base = (Rational(1) - l1) / (2 * static_cast<std::int64_t>(group.rank));

  std::vector<Atom> atoms;
  const auto gens = group.generators();  // +e1, -e1, +e2, ...
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const Rational& mi = m[i / 2];
    const Rational tilt = (i % 2 == 0) ? std::max(mi, Rational(0)) : std::max(-mi, Rational(0));
    const Rational p = base + tilt;
    if (p == Rational(0)) continue;
    if (lamps) {
      atoms.push_back({{Configuration(modulus), gens[i]}, p / 2});
      atoms.push_back({{Configuration::delta(group.identity(), modulus), gens[i]}, p / 2});
    } else {
      atoms.push_back({{Configuration(modulus), gens[i]}, p});
    }
  }
  return StepMeasure::create(group, modulus, std::move(atoms), lamps ? GenerationCheck::Require : GenerationCheck::Skip);
}

const LampElement& Trajectory::increment(std::int64_t t) const {
  if (t < 1 || t > steps) throw InvalidInput("increment index out of range");
  return measure->atoms()[increments[static_cast<std::size_t>(t - 1)]].element;
}

int Trajectory::state_at(SiteId site, std::int64_t time) const {
  const auto& events = lamp_events[static_cast<std::size_t>(site)];
  auto it = std::upper_bound(events.begin(), events.end(), time,
                             [](std::int64_t t, const LampEvent& e) { return t < e.time; });
  return it == events.begin() ? 0 : std::prev(it)->state;
}

std::int64_t Trajectory::last_flip(SiteId site, std::int64_t time) const {
  const auto& events = lamp_events[static_cast<std::size_t>(site)];
  auto it = std::upper_bound(events.begin(), events.end(), time,
                             [](std::int64_t t, const LampEvent& e) { return t < e.time; });
  return it == events.begin() ? 0 : std::prev(it)->time;
}

Configuration Trajectory::config_at(std::int64_t time) const {
  Configuration config(measure->modulus());
  for (SiteId site : touched_sites) {
    const int s = state_at(site, time);
    if (s != 0) config.set(sites->element(site), s);
  }
  return config;
}

Trajectory run_walk(const StepMeasure& mu, const WalkConfig& cfg, std::uint64_t walk_index) {
  if (cfg.steps < 1) throw InvalidInput("walk length must be >= 1");
  Trajectory traj;
  traj.seed = cfg.seed;
  traj.walk_index = walk_index;
  traj.steps = cfg.steps;
  traj.measure = std::make_shared<const StepMeasure>(mu);
  auto space = std::make_shared<SiteSpace>(mu.group());

  // Lamp parts of the atoms as (offset, delta) lists.
  std::vector<std::vector<std::pair<BaseElement, int>>> lamp_parts;
  for (const auto& a : mu.atoms()) {
    lamp_parts.emplace_back(a.element.config.states().begin(), a.element.config.states().end());
  }

  const CounterRng rng(cfg.seed, walk_index);
  const int r = mu.modulus();
  std::vector<int> state(1, 0);
  traj.lamp_events.resize(1);
  traj.positions.reserve(static_cast<std::size_t>(cfg.steps) + 1);
  traj.increments.reserve(static_cast<std::size_t>(cfg.steps));
  SiteId pos = space->origin();
  traj.positions.push_back(pos);

  for (std::int64_t t = 1; t <= cfg.steps; ++t) {
    const std::size_t k = mu.sample(rng(static_cast<std::uint64_t>(t)));
    traj.increments.push_back(static_cast<std::uint32_t>(k));
    for (const auto& [offset, delta] : lamp_parts[k]) {
      const SiteId y = space->advance(pos, offset);
      if (static_cast<std::size_t>(y) >= state.size()) {
        state.resize(space->size(), 0);
        traj.lamp_events.resize(space->size());
      }
      auto& s = state[static_cast<std::size_t>(y)];
      s = (s + delta) % r;
      auto& events = traj.lamp_events[static_cast<std::size_t>(y)];
      if (events.empty()) traj.touched_sites.push_back(y);
      events.push_back({t, s});
    }
    pos = space->advance(pos, mu.atoms()[k].element.pos);
    traj.positions.push_back(pos);
  }
  space->finalize();
  traj.lamp_events.resize(space->size());
  traj.sites = std::move(space);
  return traj;
}

LampElement replay(const Trajectory& traj, std::int64_t upto) {
  if (upto < 0) upto = traj.steps;
  LampElement z = LampElement::identity(traj.measure->group(), traj.measure->modulus());
  for (std::int64_t t = 1; t <= upto; ++t) lamp_multiply_inplace(z, traj.increment(t));
  return z;
}

int resolve_thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("LAMPWALK_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

PrefixStability stable_prefix(const Trajectory& traj, std::int64_t horizon, std::int64_t window) {
  if (!traj.sites->is_tree()) throw VariantMismatch("stable prefixes are defined for free-group walks");
  if (horizon < 0 || horizon > traj.steps) throw InvalidInput("horizon outside the trajectory");
  window = std::clamp<std::int64_t>(window, 1, std::max<std::int64_t>(horizon, 1));
  const WordTree& tree = traj.sites->tree();
  const auto& pos = traj.positions;

  SiteId node = pos[static_cast<std::size_t>(horizon)];
  for (std::int64_t m = std::max<std::int64_t>(horizon - window + 1, 0); m < horizon; ++m) {
    node = tree.lowest_common_ancestor(node, pos[static_cast<std::size_t>(m)]);
  }
  std::int64_t t = horizon;
  while (t > 0 && tree.is_ancestor(node, pos[static_cast<std::size_t>(t - 1)])) --t;
  return {node, t};
}

WalkSummary summarize(const Trajectory& traj, const SummaryOptions& opts) {
  WalkSummary s;
  const std::int64_t n = traj.steps;
  const SiteSpace& space = *traj.sites;
  s.walk_index = traj.walk_index;
  s.steps = n;
  s.final_position = traj.position(n);
  s.distance = s.final_position.norm();
  s.speed = static_cast<double>(s.distance) / static_cast<double>(n);
  for (std::int64_t t : {n / 4, n / 2, 3 * n / 4, n}) {
    if (t < 1) continue;
    s.speed_samples.emplace_back(t, static_cast<double>(space.norm(traj.positions[static_cast<std::size_t>(t)])) /
                                        static_cast<double>(t));
  }
  s.tail_window = opts.tail_window > 0 ? opts.tail_window : std::max<std::int64_t>(1, n / 10);

  const int r = traj.measure->modulus();
  s.settled_near_origin = Configuration(r);
  std::vector<SiteId> support;
  for (SiteId site : traj.touched_sites) {
    const int st = traj.state_at(site, n);
    if (st == 0) continue;
    support.push_back(site);
    if (traj.last_flip(site, n) <= n - s.tail_window) {
      ++s.settled_count;
      if (space.norm(site) <= opts.settled_radius) s.settled_near_origin.set(space.element(site), st);
    }
  }
  s.support_size = support.size();

  if (space.is_tree()) {
    const PrefixStability ps = stable_prefix(traj, n, s.tail_window);
    s.stable_prefix = space.element(ps.node);
    s.stabilization_time = ps.stabilization_time;
  } else if (s.distance > 0) {
    std::vector<double> v(s.final_position.coords().begin(), s.final_position.coords().end());
    const double norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
    for (double& x : v) x /= norm;
    s.direction = std::move(v);
  }

  const Rational toggles = opts.metric.c * static_cast<std::int64_t>(support.size());
  if (space.is_tree()) {
    // Exact: twice the spanning-subtree edges minus d(e, X_n).
    const WordTree& tree = space.tree();
    std::vector<std::int64_t> count(tree.size(), 0);
    count[0] += 1;
    count[static_cast<std::size_t>(traj.positions.back())] += 1;
    for (SiteId site : support) count[static_cast<std::size_t>(site)] += 1;
    const std::int64_t total = static_cast<std::int64_t>(support.size()) + 2;
    std::int64_t edges = 0;
    for (std::size_t v = tree.size(); v-- > 1;) {
      if (count[v] > 0 && count[v] < total) ++edges;
      count[static_cast<std::size_t>(tree.parent(static_cast<SiteId>(v)))] += count[v];
    }
    s.lamp_lower = s.lamp_upper = Rational(2 * edges - s.distance) + toggles;
  } else {
    std::int64_t detour = s.distance;
    for (SiteId site : support) {
      const BaseElement y = space.element(site);
      detour = std::max(detour, y.norm() + word_distance(y, s.final_position));
    }
    s.lamp_lower = Rational(detour) + toggles;
    // Triangle inequality along the path: d_G(id, Z_n) <= sum_t d_G(id, i_t).
    const LampElement id = LampElement::identity(space.group(), r);
    std::vector<Rational> atom_cost;
    for (const auto& a : traj.measure->atoms()) atom_cost.push_back(lamp_distance(id, a.element, opts.metric));
    Rational upper{0};
    for (std::uint32_t k : traj.increments) upper += atom_cost[k];
    s.lamp_upper = upper;
  }
  return s;
}

std::vector<WalkSummary> batch_run(const StepMeasure& mu, const WalkConfig& cfg, const SummaryOptions& opts) {
  return batch_map(mu, cfg, [&](const Trajectory& t) { return summarize(t, opts); });
}

}  // namespace lampwalk
