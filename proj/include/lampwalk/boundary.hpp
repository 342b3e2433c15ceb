#pragma once

// Finite-horizon estimators for the behaviour of the lamplighter walk at
// infinity: the limit end (or direction) of the base walk, the limit lamp
// configuration, the rate of escape, and the hitting distribution on the
// boundary of the base group.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lampwalk/base_group.hpp"
#include "lampwalk/boundary_point.hpp"
#include "lampwalk/lamplighter.hpp"
#include "lampwalk/site_space.hpp"
#include "lampwalk/walk_engine.hpp"

namespace lampwalk {

struct LimitEndEstimate {
  GroupFamily family = GroupFamily::Free;
  BaseElement stable_prefix;       // F_k: common prefix of X_m over the tail window
  std::vector<double> direction;   // Z^d: X_h / |X_h|
  std::int64_t stabilization_time = 0;
  std::int64_t tail_window = 0;
  std::int64_t horizon = 0;

  bool stable() const noexcept {
    return family == GroupFamily::Free ? stable_prefix.size() > 0 : !direction.empty();
  }
  /// Estimated end or exact direction.
  BoundaryPoint boundary_point() const;
};

/// Throws InvalidInput when traj.steps < 2 * tail_window, and for lattices
/// when X_h is the origin ("no direction").
LimitEndEstimate estimate_limit_point(const Trajectory& traj, std::int64_t tail_window, std::int64_t horizon = -1);

struct LampRecord {
  SiteId site;
  int state;
  std::int64_t last_flip;
  bool settled;
};

struct LimitConfigurationEstimate {
  std::shared_ptr<const SiteSpace> sites;
  std::int64_t horizon = 0;
  std::int64_t tail_window = 0;
  std::vector<LampRecord> lamps;  // nonzero lamps at the horizon
  int modulus = 2;
  bool finite_configuration = false;  // built from an explicit finite configuration

  /// Settled lamps, optionally restricted to B(e, radius).
  Configuration settled_configuration(int radius = -1) const;
  std::size_t settled_count() const;

  /// Wraps a finitely supported configuration; every lamp counts as settled.
  static LimitConfigurationEstimate from_configuration(const GroupSpec& group, const Configuration& config);
};

LimitConfigurationEstimate estimate_limit_configuration(const Trajectory& traj, std::int64_t tail_window,
                                                        std::int64_t horizon = -1);

struct OmegaPointEstimate {
  LimitConfigurationEstimate config;
  LimitEndEstimate point;
};

OmegaPointEstimate estimate_omega_point(const Trajectory& traj, std::int64_t tail_window, std::int64_t horizon = -1);

struct AccumulationOptions {
  std::vector<Rational> drift;  // required for lattices
  double slab_offset = 10.0;    // R_0: inside means <y, m/|m|> > -R_0
};

struct AccumulationReport {
  int depth = 0;
  std::size_t settled = 0;
  std::size_t inside = 0;
  std::size_t outside = 0;
  std::int64_t max_outside_distance = 0;
  bool finite_configuration = false;
};

/// Splits the settled lamps into those near the limit point (F_k: inside the
/// depth-`depth` cylinder of the stable prefix; Z^d: in the half-space facing
/// the drift) and the rest.
AccumulationReport accumulation_check(const OmegaPointEstimate& est, int depth, const AccumulationOptions& opts = {});

struct SpeedEstimate {
  std::size_t walks = 0;
  double mean = 0.0;            // mean of d(e, X_n) / n
  double standard_error = 0.0;
  double lamp_lower = 0.0;      // mean of lower bound of d_G(id, Z_n) / n
  double lamp_upper = 0.0;
};

SpeedEstimate speed_estimate(const std::vector<WalkSummary>& summaries);
SpeedEstimate speed_estimate(const std::vector<Trajectory>& trajectories, const MetricParams& params = {});

/// Hit counts of depth-L cylinders (F_k) or nearest axis directions (Z^d).
struct EmpiricalBoundaryMeasure {
  GroupFamily family = GroupFamily::Free;
  int depth = 0;
  std::map<BaseElement, std::int64_t> counts;
  std::int64_t decided = 0;
  std::int64_t undecided = 0;

  std::int64_t total() const noexcept { return decided + undecided; }
  double frequency(const BaseElement& cylinder) const;
  double max_frequency() const;
  /// Coarsens to depth L' <= depth by truncating cylinder words.
  EmpiricalBoundaryMeasure coarsen(int shallower_depth) const;
};

/// Walks whose stable prefix is shorter than L are counted as undecided.
EmpiricalBoundaryMeasure harmonic_measure_estimate(const std::vector<WalkSummary>& summaries, int depth);

struct StationarityReport {
  int depth = 0;
  double max_discrepancy = 0.0;
  BaseElement worst_cylinder;
  double confidence_radius = 0.0;  // 3 sigma of the two-sided estimate
  std::map<BaseElement, std::pair<double, double>> sides;  // cylinder -> (nu(U), sum_g nu(g) nu(g^-1 U))
};

/// Checks nu_inf(U) = sum_g nu(g) nu_inf(g^-1 U) over all depth-L cylinders,
/// using the projected measure. `measure` must be recorded at depth at least
/// L + max |g|; otherwise the preimages are not unions of recorded cylinders
/// and InvalidInput is thrown.
StationarityReport stationarity_check(const StepMeasure& mu, const EmpiricalBoundaryMeasure& measure, int depth);
/// Same, with nu(U) taken from `lhs` and the preimage masses from an
/// independent batch `rhs`.
StationarityReport stationarity_check(const StepMeasure& mu, const EmpiricalBoundaryMeasure& lhs,
                                      const EmpiricalBoundaryMeasure& rhs, int depth);

struct AtomReport {
  std::vector<double> max_mass;  // depth 1..L_max
  bool decaying = false;
  bool atomic = false;
  std::size_t shared_pairs = 0;  // runs agreeing on the depth-L_max prefix and settled lamps near e
  std::string note;
};

AtomReport atom_check(const std::vector<WalkSummary>& summaries, int max_depth);

struct CpWitness {
  std::size_t samples = 0;
  double mean_ratio = 0.0;  // mean of d(X_t, y_t) / d(X_t, e) over the window
};

/// cp_ratio(X_t, y_t) for lamp sites y_t touched at step t, averaged over
/// t in (from, to].
CpWitness cp_witness(const Trajectory& traj, std::int64_t from, std::int64_t to);

/// supp(eta_n) is contained in the union of supp(T_{X_{i-1}} f_i), recomputed
/// with explicit group elements.
bool check_support_containment(const Trajectory& traj);

}  // namespace lampwalk
