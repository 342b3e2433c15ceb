#pragma once

// Step measures on Z_r wr Gamma and seeded trajectories of the walk
// Z_0 = (0, e), Z_n = Z_{n-1} i_n with i.i.d. increments i_n ~ mu.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "lampwalk/base_group.hpp"
#include "lampwalk/lamplighter.hpp"
#include "lampwalk/rational.hpp"
#include "lampwalk/site_space.hpp"

namespace lampwalk {

struct Atom {
  LampElement element;
  Rational probability;

  friend bool operator==(const Atom&, const Atom&) = default;
};

enum class GenerationCheck { Require, Skip };

/// Result of the bounded-depth "supp(mu) generates G" verifier.
struct GenerationReport {
  bool base_generated = false;  // projected support generates Gamma
  bool lamp_reachable = false;  // some (k delta_y, e) with gcd(k, r) = 1 is a short product
  std::string diagnostic;

  bool ok() const noexcept { return base_generated && lamp_reachable; }
};

/// Finitely supported probability measure on G with exact rational weights.
/// Atoms are merged and sorted, so equal measures compare equal.
class StepMeasure {
 public:
  /// Validates weights (positive, summing to exactly 1), group membership and,
  /// unless `check` is Skip, generation of G. Throws InvalidInput.
  static StepMeasure create(const GroupSpec& group, int modulus, std::vector<Atom> atoms,
                            GenerationCheck check = GenerationCheck::Require);

  const GroupSpec& group() const noexcept { return group_; }
  int modulus() const noexcept { return modulus_; }
  const std::vector<Atom>& atoms() const noexcept { return atoms_; }

  /// Atom index for a uniform 64-bit draw.
  std::size_t sample(std::uint64_t u) const noexcept;

  friend bool operator==(const StepMeasure& a, const StepMeasure& b) {
    return a.group_ == b.group_ && a.modulus_ == b.modulus_ && a.atoms_ == b.atoms_;
  }

 private:
  StepMeasure() = default;

  GroupSpec group_;
  int modulus_ = 2;
  std::vector<Atom> atoms_;
  std::vector<std::uint64_t> thresholds_;  // cumulative, 64-bit fixed point
};

GenerationReport check_generation(const StepMeasure& mu, int max_depth = 6);

struct BaseAtom {
  BaseElement element;
  Rational probability;

  friend bool operator==(const BaseAtom&, const BaseAtom&) = default;
};

/// Measure on Gamma (sorted, merged atoms).
struct BaseMeasure {
  GroupSpec group;
  std::vector<BaseAtom> atoms;

  friend bool operator==(const BaseMeasure&, const BaseMeasure&) = default;
};

/// nu(x) = sum over eta of mu(eta, x).
BaseMeasure project_measure(const StepMeasure& mu);
/// mu-check(g) = mu(g^-1).
StepMeasure reflect_measure(const StepMeasure& mu);
BaseMeasure reflect_measure(const BaseMeasure& nu);

struct Moments {
  Rational lamp;  // sum p d_G(id, atom)
  Rational base;  // sum p d(e, pos)
};
Moments first_moment(const StepMeasure& mu, const MetricParams& params = {});

/// m = sum x nu(x), exact. Lattice measures only.
std::vector<Rational> drift(const BaseMeasure& nu);

/// Uniform on (0, s) over the symmetric generators. Does not generate G (no
/// lamp moves), so it is built with GenerationCheck::Skip.
StepMeasure simple_random_walk(const GroupSpec& group, int modulus = 2);
/// "Switch-walk": uniform over s, then with probability 1/2 toggle the lamp at
/// the current position before moving: atoms (0, s) and (delta_e, s), each
/// 1/(2|S|). The projection is exactly the simple random walk.
StepMeasure switch_walk(const GroupSpec& group, int modulus = 2);
/// Nearest-neighbour walk on Z^d with exact drift m (requires |m|_1 < 1):
/// p(+-e_i) = (1 - |m|_1)/(2d) + max(+-m_i, 0). With `lamps`, each move is
/// split into (0, s) and (delta_e, s) like the switch-walk.
StepMeasure drift_walk(const GroupSpec& group, int modulus, const std::vector<Rational>& m, bool lamps);

struct WalkConfig {
  std::int64_t steps = 1000;
  std::int64_t walks = 1;
  std::uint64_t seed = 0;
  MetricParams metric;
  int threads = 0;  // 0: LAMPWALK_THREADS or hardware concurrency
};

struct LampEvent {
  std::int64_t time;
  int state;  // state after the change

  friend bool operator==(const LampEvent&, const LampEvent&) = default;
};

/// A sampled path. Positions and lamp sites are ids into `sites`, which is
/// finalized (immutable) once the walk completes.
struct Trajectory {
  std::uint64_t seed = 0;
  std::uint64_t walk_index = 0;
  std::int64_t steps = 0;
  std::shared_ptr<const StepMeasure> measure;
  std::shared_ptr<const SiteSpace> sites;
  std::vector<SiteId> positions;          // X_0 .. X_n
  std::vector<std::uint32_t> increments;  // atom index of i_1 .. i_n
  std::vector<std::vector<LampEvent>> lamp_events;  // by site id, time ordered
  std::vector<SiteId> touched_sites;      // sites with at least one event, first-touch order

  BaseElement position(std::int64_t t) const { return sites->element(positions[static_cast<std::size_t>(t)]); }
  /// i_t for t in 1..n.
  const LampElement& increment(std::int64_t t) const;
  /// Lamp state at `site` after step `time`.
  int state_at(SiteId site, std::int64_t time) const;
  /// Time of the last change at `site` up to `time` (0 when never changed).
  std::int64_t last_flip(SiteId site, std::int64_t time) const;
  /// Configuration after step `time` (defaults to the final one).
  Configuration config_at(std::int64_t time) const;
  Configuration final_config() const { return config_at(steps); }
  LampElement final_state() const { return {final_config(), position(steps)}; }
};

/// Runs walk number `walk_index` of the batch described by `cfg`. The result
/// is a pure function of (mu, cfg.steps, cfg.seed, walk_index).
Trajectory run_walk(const StepMeasure& mu, const WalkConfig& cfg, std::uint64_t walk_index);

/// Folds the recorded increments through lamp_multiply (independent check of
/// the incremental bookkeeping).
LampElement replay(const Trajectory& traj, std::int64_t upto = -1);

/// Thread count: `requested` if positive, else LAMPWALK_THREADS, else the
/// hardware concurrency.
int resolve_thread_count(int requested = 0);

/// Applies `fn(walk_index)` for every index in [0, count) on a worker pool and
/// returns the results ordered by index.
template <class Fn>
auto parallel_indexed(std::int64_t count, int threads, Fn fn) -> std::vector<decltype(fn(std::uint64_t{}))> {
  using Result = decltype(fn(std::uint64_t{}));
  std::vector<std::optional<Result>> slots(static_cast<std::size_t>(count));
  std::atomic<std::int64_t> next{0};
  auto worker = [&] {
    for (std::int64_t i = next++; i < count; i = next++) {
      slots[static_cast<std::size_t>(i)].emplace(fn(static_cast<std::uint64_t>(i)));
    }
  };
  const int pool = std::max(1, std::min<int>(resolve_thread_count(threads), static_cast<int>(std::max<std::int64_t>(count, 1))));
  if (pool == 1) {
    worker();
  } else {
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(pool));
    for (int t = 0; t < pool; ++t) workers.emplace_back(worker);
    for (auto& w : workers) w.join();
  }
  std::vector<Result> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

/// Runs cfg.walks trajectories and maps each through `fn` (trajectories are
/// dropped after mapping, so memory stays per-thread).
template <class Fn>
auto batch_map(const StepMeasure& mu, const WalkConfig& cfg, Fn fn) {
  return parallel_indexed(cfg.walks, cfg.threads, [&](std::uint64_t i) { return fn(run_walk(mu, cfg, i)); });
}

/// Longest common prefix of X_m over m in (horizon - window, horizon], as a
/// trie node, and the earliest time from which every X_m up to the horizon
/// extends it. Free groups only.
struct PrefixStability {
  SiteId node = 0;
  std::int64_t stabilization_time = 0;
};
PrefixStability stable_prefix(const Trajectory& traj, std::int64_t horizon, std::int64_t window);

struct SummaryOptions {
  std::int64_t tail_window = 0;  // 0: steps / 10
  int settled_radius = 3;
  MetricParams metric;
};

/// Per-walk record used by the batch estimators.
struct WalkSummary {
  std::uint64_t walk_index = 0;
  std::int64_t steps = 0;
  BaseElement final_position;
  std::int64_t distance = 0;  // d(e, X_n)
  double speed = 0.0;         // d(e, X_n) / n
  std::vector<std::pair<std::int64_t, double>> speed_samples;  // (t, d(e, X_t)/t) at n/4, n/2, 3n/4, n
  std::size_t support_size = 0;
  std::size_t settled_count = 0;
  std::int64_t tail_window = 0;
  BaseElement stable_prefix;            // free groups
  std::vector<double> direction;        // lattices: X_n / |X_n| (empty at the origin)
  std::int64_t stabilization_time = 0;
  Configuration settled_near_origin;    // settled lamps within settled_radius of e
  Rational lamp_lower;                  // bounds on d_G(id, Z_n)
  Rational lamp_upper;
};

WalkSummary summarize(const Trajectory& traj, const SummaryOptions& opts = {});

/// N independent walks summarized in walk-index order.
std::vector<WalkSummary> batch_run(const StepMeasure& mu, const WalkConfig& cfg, const SummaryOptions& opts = {});

}  // namespace lampwalk
