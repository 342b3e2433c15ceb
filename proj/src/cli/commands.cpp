#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lampwalk/boundary.hpp"
#include "lampwalk/cli.hpp"
#include "lampwalk/error.hpp"
#include "lampwalk/sampling.hpp"
#include "lampwalk/strips.hpp"

namespace lampwalk::cli {

namespace {

// Flags shared by every subcommand. Each config field has a flag of the same
// name; values given on the command line override the config file.
struct CommonOptions {
  std::string config_path;
  std::map<std::string, std::string> overrides;
  int threads = 0;
  std::string out_path;
};

const std::vector<std::string> kIntegerFields{"rank", "modulus", "steps", "walks", "seed", "tail-window", "depth"};
const std::vector<std::string> kStringFields{"family", "c", "measure", "scheme"};

void add_common(CLI::App* sub, CommonOptions& opts) {
  sub->add_option("--config", opts.config_path, "JSON config file");
  for (const auto* fields : {&kIntegerFields, &kStringFields}) {
    for (const auto& name : *fields) {
      sub->add_option_function<std::string>(
          "--" + name, [&opts, name](const std::string& v) { opts.overrides[name] = v; }, "overrides config '" + name + "'");
    }
  }
  sub->add_option("--threads", opts.threads, "worker threads (default: LAMPWALK_THREADS or all cores)");
  sub->add_option("--out", opts.out_path, "write records here instead of stdout");
}

ExperimentConfig resolve_config(const CommonOptions& opts) {
  ExperimentConfig cfg = opts.config_path.empty() ? ExperimentConfig{} : load_config(opts.config_path);
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [key, text] : opts.overrides) {
    if (std::find(kIntegerFields.begin(), kIntegerFields.end(), key) != kIntegerFields.end()) {
      std::size_t used = 0;
      long long v = 0;
      try {
        v = std::stoll(text, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != text.size() || text.empty()) throw InvalidInput("--" + key + " needs an integer, got '" + text + "'");
      j[key] = v;
    } else {
      j[key] = text;
    }
  }
  apply_config_json(cfg, j.dump());
  validate(cfg);
  return cfg;
}

// Output goes to --out when given, else to the caller's stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw InvalidInput("cannot write '" + path + "'");
    }
    stream_ = path.empty() ? &fallback : &file_;
  }
  std::ostream& operator*() { return *stream_; }
  void record(const Record& r) { *stream_ << serialize(r) << '\n'; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

std::string join_doubles(const std::vector<double>& xs) {
  std::string s;
  for (double x : xs) {
    if (!s.empty()) s += ';';
    s += format_double(x);
  }
  return s;
}

std::string join_rationals(const std::vector<Rational>& xs) {
  std::string s;
  for (const auto& x : xs) {
    if (!s.empty()) s += ',';
    s += to_string(x);
  }
  return s;
}

std::string counts_string(const EmpiricalBoundaryMeasure& m) {
  std::string s;
  for (const auto& [cyl, count] : m.counts) {
    if (!s.empty()) s += ';';
    s += to_string(cyl) + "=" + std::to_string(count);
  }
  return s;
}

EmpiricalBoundaryMeasure subset_measure(const std::vector<WalkSummary>& all, int parity, int depth) {
  std::vector<WalkSummary> part;
  for (std::size_t i = static_cast<std::size_t>(parity); i < all.size(); i += 2) part.push_back(all[i]);
  return harmonic_measure_estimate(part, depth);
}

// ---------------------------------------------------------------- simulate

int cmd_simulate(const CommonOptions& opts, std::ostream& out) {
  const ExperimentConfig cfg = resolve_config(opts);
  const StepMeasure mu = build_measure(cfg);
  const std::string hash = hex_hash(config_hash(cfg));

  WalkConfig wc;
  wc.steps = cfg.steps;
  wc.walks = cfg.walks;
  wc.seed = cfg.seed;
  wc.metric.c = cfg.c;
  wc.threads = opts.threads;
  SummaryOptions so;
  so.tail_window = cfg.tail_window;
  so.metric = wc.metric;
  const std::vector<WalkSummary> summaries = batch_run(mu, wc, so);

  Sink sink(opts.out_path, out);
  sink.record(config_record(cfg));
  const bool free = cfg.group.family == GroupFamily::Free;
  for (const auto& s : summaries) {
    Record r("walk");
    r.add("config_hash", hash)
        .add("seed", static_cast<std::int64_t>(cfg.seed))
        .add("walk", static_cast<std::int64_t>(s.walk_index))
        .add("steps", s.steps)
        .add("final_position", to_string(s.final_position))
        .add("distance", s.distance)
        .add("speed", s.speed)
        .add("support_size", s.support_size)
        .add("settled_count", s.settled_count)
        .add("tail_window", s.tail_window);
    if (free) {
      r.add("stable_prefix", to_string(s.stable_prefix)).add("stable_length", s.stable_prefix.size());
    } else {
      r.add("direction", join_doubles(s.direction));
    }
    r.add("stabilization_time", s.stabilization_time).add("lamp_lower", s.lamp_lower).add("lamp_upper", s.lamp_upper);
    sink.record(r);
  }

  Record agg("aggregate");
  agg.add("config_hash", hash)
      .add("seed", static_cast<std::int64_t>(cfg.seed))
      .add("walks", cfg.walks)
      .add("steps", cfg.steps)
      .add("generates", check_generation(mu).ok());
  if (!free) {
    const auto m = drift(project_measure(mu));
    Rational l1{0};
    for (const auto& x : m) l1 += x < Rational(0) ? -x : x;
    agg.add("drift", join_rationals(m)).add("drift_l1", l1);
  }
  const SpeedEstimate speed = speed_estimate(summaries);
  agg.add("speed_mean", speed.mean)
      .add("speed_se", speed.standard_error)
      .add("lamp_speed_lower", speed.lamp_lower)
      .add("lamp_speed_upper", speed.lamp_upper);
  const EmpiricalBoundaryMeasure hm = harmonic_measure_estimate(summaries, cfg.depth);
  agg.add("harmonic_depth", cfg.depth)
      .add("harmonic_decided", hm.decided)
      .add("harmonic_undecided", hm.undecided)
      .add("harmonic_max", hm.max_frequency())
      .add("harmonic_counts", counts_string(hm));
  const AtomReport atoms = atom_check(summaries, std::max(4, cfg.depth));
  agg.add("atom_max_mass", join_doubles(atoms.max_mass))
      .add("atom_decaying", atoms.decaying)
      .add("atom_atomic", atoms.atomic)
      .add("atom_note", atoms.note)
      .add("atom_shared_pairs", atoms.shared_pairs);
  if (free) {
    // nu(U) from even-indexed walks, preimage masses from odd-indexed ones.
    std::int64_t reach = 0;
    for (const auto& a : project_measure(mu).atoms) reach = std::max(reach, a.element.norm());
    agg.add("stationarity_depth", cfg.depth);
    if (summaries.size() < 2) {
      agg.add("stationarity_status", "skipped: needs at least two walks");
    } else {
      const auto lhs = subset_measure(summaries, 0, cfg.depth);
      const auto rhs = subset_measure(summaries, 1, cfg.depth + static_cast<int>(reach));
      if (lhs.decided == 0 || rhs.decided == 0) {
        agg.add("stationarity_status", "skipped: no walk reached the required prefix length");
      } else {
        const StationarityReport st = stationarity_check(mu, lhs, rhs, cfg.depth);
        agg.add("stationarity_max", st.max_discrepancy)
            .add("stationarity_radius", st.confidence_radius)
            .add("stationarity_status", "ok");
      }
    }
  }
  sink.record(agg);
  return kOk;
}

// ------------------------------------------------------------------ metric

struct MetricOptions {
  std::string lamps;
  std::string pos = "e";
  bool bfs = false;
};

int cmd_metric(const CommonOptions& opts, const MetricOptions& m, std::ostream& out) {
  const ExperimentConfig cfg = resolve_config(opts);
  const LampElement g{parse_lamps(cfg.group, cfg.modulus, m.lamps), parse_element(cfg.group, m.pos)};
  MetricParams params;
  params.c = cfg.c;
  const LampDistance d = lamp_distance_detailed(LampElement::identity(cfg.group, cfg.modulus), g, params);
  if (!d.exact) throw CapExceeded("exact TSP sites", params.exact_tsp_max_lamps, static_cast<long long>(g.config.size()));

  Record r("metric");
  std::string tour;
  for (const auto& site : d.tour) tour += (tour.empty() ? "" : " ") + to_string(site);
  r.add("config_hash", hex_hash(config_hash(cfg)))
      .add("element", to_string(g))
      .add("distance", d.value())
      .add("lower", d.lower)
      .add("upper", d.upper)
      .add("exact", d.exact)
      .add("tour", tour);
  if (m.bfs) {
    if (cfg.c != Rational(1)) throw InvalidInput("the BFS oracle measures word length for c = 1 only");
    const auto need = d.value().numerator();  // integral for c = 1
    if (need > kMaxBfsRadius) throw CapExceeded("BFS radius", kMaxBfsRadius, need);
    const int bfs = bfs_distance_oracle(cfg.group, g, static_cast<int>(need));
    r.add("bfs_distance", bfs).add("bfs_agrees", Rational(bfs) == d.value());
  }
  Sink sink(opts.out_path, out);
  sink.record(r);
  return kOk;
}

// ------------------------------------------------------------------- strip

struct StripOptions {
  std::string u;
  std::string v;
  std::string plus_lamps;
  std::string minus_lamps;
  int n_max = 10;
  int trials = 20;
  int radius = 5;
  std::string csv_path;
  std::string report_path;
};

struct FuzzTally {
  std::size_t trials = 0;
  EquivarianceReport total;
};

FuzzTally equivariance_fuzz(const GroupSpec& group, int modulus, const ExactOmegaPoint& bp, const ExactOmegaPoint& bm,
                            PartitionScheme scheme, const std::vector<Rational>& drift, int trials, int radius,
                            std::uint64_t seed) {
  TestRng rng(seed);
  FuzzTally tally;
  const BaseStrip strip = base_strip(group, bp.point, bm.point);
  for (int t = 0; t < trials; ++t) {
    const LampElement g = random_lamp_element(rng, group, modulus, 4, 3);
    BaseElement x;
    if (strip.kind == StripKind::TreeGeodesic) {
      auto near = strip.points_within(group.identity(), static_cast<int>(strip.confluence) + 4);
      x = near[std::uniform_int_distribution<std::size_t>(0, near.size() - 1)(rng)];
    } else {
      x = random_base_element(rng, group, 3);
    }
    const EquivarianceReport r = check_equivariance(group, g, bp, bm, x, scheme, radius, drift);
    ++tally.trials;
    tally.total.checked += r.checked;
    tally.total.strip_mismatches += r.strip_mismatches;
    tally.total.partition_mismatches += r.partition_mismatches;
    tally.total.lifted_mismatches += r.lifted_mismatches;
    for (const auto& e : r.examples) {
      if (tally.total.examples.size() < 4) tally.total.examples.push_back("g=" + to_string(g) + " x=" + to_string(x) + ": " + e);
    }
  }
  return tally;
}

int cmd_strip(const CommonOptions& opts, const StripOptions& s, std::ostream& out, std::ostream& err) {
  const ExperimentConfig cfg = resolve_config(opts);
  const PartitionScheme scheme = cfg.partition_scheme();
  std::vector<Rational> m;
  std::optional<BoundaryPoint> u, v;
  if (cfg.group.family == GroupFamily::Free) {
    if (s.u.empty() || s.v.empty()) throw InvalidInput("strip on a free group needs --u and --v ends");
    u = parse_end(cfg.group, s.u);
    v = parse_end(cfg.group, s.v);
  } else {
    m = config_drift(cfg);
    const BaseStrip ls = lattice_strip(cfg.group, m);
    u = ls.u;
    v = ls.v;
  }
  const ExactOmegaPoint bp{parse_lamps(cfg.group, cfg.modulus, s.plus_lamps), *u};
  const ExactOmegaPoint bm{parse_lamps(cfg.group, cfg.modulus, s.minus_lamps), *v};
  MetricParams params;
  params.c = cfg.c;
  const auto curve = lifted_strip_curve(cfg.group, bp, bm, scheme, s.n_max, params, m);

  Sink main(opts.out_path, out);  // --out catches whatever --csv/--report don't
  std::size_t violations = 0;
  {
    Sink csv(s.csv_path, *main);
    *csv << "n,count_base,count_G,log_count_G_over_n\n";
    for (const auto& row : curve) {
      if (row.count_g > row.count_base) ++violations;
      *csv << row.n << ',' << row.count_base << ',' << row.count_g << ',';
      if (row.n > 0 && row.count_g > 0) *csv << format_double(std::log(static_cast<double>(row.count_g)) / row.n);
      *csv << '\n';
    }
  }

  const FuzzTally fuzz = equivariance_fuzz(cfg.group, cfg.modulus, bp, bm, scheme, m, s.trials, s.radius, cfg.seed);
  Record r("equivariance");
  r.add("config_hash", hex_hash(config_hash(cfg)))
      .add("seed", static_cast<std::int64_t>(cfg.seed))
      .add("u", to_string(*u))
      .add("v", to_string(*v))
      .add("scheme", to_string(scheme))
      .add("n_max", s.n_max)
      .add("trials", fuzz.trials)
      .add("checked", fuzz.total.checked)
      .add("strip_mismatches", fuzz.total.strip_mismatches)
      .add("partition_mismatches", fuzz.total.partition_mismatches)
      .add("lifted_mismatches", fuzz.total.lifted_mismatches)
      .add("count_violations", violations);
  if (!fuzz.total.examples.empty()) r.add("first_mismatch", fuzz.total.examples.front());
  {
    Sink report(s.report_path, *main);  // after the CSV when both share a stream
    report.record(r);
  }
  if (violations > 0 || !fuzz.total.ok()) {
    err << "lampwalk: strip invariants failed: " << violations << " count violations, " << fuzz.total.mismatches()
        << " equivariance mismatches";
    if (!fuzz.total.examples.empty()) err << " (" << fuzz.total.examples.front() << ")";
    err << '\n';
    return kInvariantViolation;
  }
  return kOk;
}

// ------------------------------------------------------------------ verify

struct CheckResult {
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string detail;

  void fail(std::string what) {
    ++failures;
    if (detail.empty()) detail = std::move(what);
  }
};

CheckResult check_group_law(TestRng& rng) {
  CheckResult res;
  for (const GroupSpec& group : {GroupSpec::free(2), GroupSpec::lattice(3)}) {
    const LampElement id = LampElement::identity(group, 2);
    for (int i = 0; i < 300; ++i) {
      const auto a = random_lamp_element(rng, group, 2, 10, 3);
      const auto b = random_lamp_element(rng, group, 2, 10, 3);
      const auto c = random_lamp_element(rng, group, 2, 10, 3);
      ++res.cases;
      if (!(lamp_multiply(lamp_multiply(a, b), c) == lamp_multiply(a, lamp_multiply(b, c)))) res.fail("associativity at " + to_string(a));
      if (!(lamp_multiply(a, id) == a) || !(lamp_multiply(id, a) == a)) res.fail("identity at " + to_string(a));
      if (!(lamp_multiply(a, lamp_inverse(a)) == id)) res.fail("inverse at " + to_string(a));
    }
  }
  return res;
}

CheckResult check_metric_bfs() {
  CheckResult res;
  const GroupSpec group = GroupSpec::free(2);
  const LampElement id = LampElement::identity(group, 2);
  for (const auto& [g, dist] : lamp_ball_bfs(group, 2, 5)) {
    ++res.cases;
    if (lamp_distance(id, g) != Rational(dist)) res.fail("d_G(" + to_string(g) + ") != " + std::to_string(dist));
  }
  return res;
}

std::int64_t brute_force_tour(const BaseElement& x, const BaseElement& x2, std::vector<BaseElement> sites) {
  std::sort(sites.begin(), sites.end());
  sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
  std::int64_t best = -1;
  do {
    std::int64_t len = 0;
    BaseElement at = x;
    for (const auto& s : sites) {
      len += word_distance(at, s);
      at = s;
    }
    len += word_distance(at, x2);
    if (best < 0 || len < best) best = len;
  } while (std::next_permutation(sites.begin(), sites.end()));
  return best;
}

CheckResult check_tsp(TestRng& rng) {
  CheckResult res;
  for (const GroupSpec& group : {GroupSpec::free(2), GroupSpec::lattice(3)}) {
    for (int i = 0; i < 50; ++i) {
      const BaseElement x = random_base_element(rng, group, 3);
      const BaseElement x2 = random_base_element(rng, group, 3);
      std::vector<BaseElement> sites;
      const int k = std::uniform_int_distribution<int>(0, 6)(rng);
      for (int j = 0; j < k; ++j) sites.push_back(random_base_element(rng, group, 3));
      ++res.cases;
      if (tour_length(x, x2, sites) != brute_force_tour(x, x2, sites)) res.fail("tour from " + to_string(x));
    }
  }
  return res;
}

CheckResult check_busemann(TestRng& rng) {
  CheckResult res;
  const GroupSpec group = GroupSpec::free(2);
  for (int i = 0; i < 200; ++i) {
    const BoundaryPoint u = random_exact_end(rng, group, 3, 3);
    const BaseElement x = random_base_element(rng, group, 6);
    const BaseElement y = random_base_element(rng, group, 6);
    const BaseElement z = random_base_element(rng, group, 6);
    ++res.cases;
    if (busemann(u, x, z) != busemann(u, x, y) + busemann(u, y, z)) res.fail("cocycle for u = " + to_string(u));
    if (busemann(u, x, y) != -busemann(u, y, x)) res.fail("antisymmetry for u = " + to_string(u));
    if (busemann(u, x, x) != 0) res.fail("beta(x, x) != 0");
  }
  return res;
}

CheckResult check_equivariance_suite(TestRng& rng) {
  CheckResult res;
  const GroupSpec tree = GroupSpec::free(2);
  for (int i = 0; i < 20; ++i) {
    const BoundaryPoint u = random_exact_end(rng, tree, 2, 2);
    BoundaryPoint v = random_exact_end(rng, tree, 2, 2);
    while (v == u) v = random_exact_end(rng, tree, 2, 2);
    const ExactOmegaPoint bp{random_configuration(rng, tree, 2, 4, 3), u};
    const ExactOmegaPoint bm{random_configuration(rng, tree, 2, 4, 3), v};
    const FuzzTally t = equivariance_fuzz(tree, 2, bp, bm, PartitionScheme::TreeEdgeCut, {}, 1, 4, rng());
    ++res.cases;
    if (!t.total.ok()) res.fail(t.total.examples.empty() ? "tree mismatch" : t.total.examples.front());
  }
  const GroupSpec lat = GroupSpec::lattice(3);
  const std::vector<Rational> m{Rational(1, 3), Rational(0), Rational(-1, 6)};
  const BaseStrip ls = lattice_strip(lat, m);
  for (int i = 0; i < 20; ++i) {
    const ExactOmegaPoint bp{random_configuration(rng, lat, 2, 4, 3), ls.u};
    const ExactOmegaPoint bm{random_configuration(rng, lat, 2, 4, 3), ls.v};
    const FuzzTally t = equivariance_fuzz(lat, 2, bp, bm, PartitionScheme::Hyperplane, m, 1, 3, rng());
    ++res.cases;
    if (!t.total.ok()) res.fail(t.total.examples.empty() ? "lattice mismatch" : t.total.examples.front());
  }
  return res;
}

CheckResult check_strip_growth() {
  CheckResult res;
  const GroupSpec group = GroupSpec::free(2);
  const BaseStrip strip = base_strip(group, parse_end(group, "a.a"), parse_end(group, "A.A"));
  for (int n = 0; n <= 10; ++n) {
    ++res.cases;
    std::int64_t enumerated = 0;
    for (const auto& y : enumerate_ball(group, group.identity(), n).elements) enumerated += strip.contains(y) ? 1 : 0;
    if (enumerated != 2 * n + 1 || strip_ball_count(strip, n) != 2 * n + 1) res.fail("count at n = " + std::to_string(n));
  }
  return res;
}

CheckResult check_walks(std::uint64_t seed, int threads) {
  CheckResult res;
  const GroupSpec lat = GroupSpec::lattice(3);
  const std::vector<StepMeasure> measures{
      switch_walk(GroupSpec::free(2)),
      drift_walk(lat, 2, {Rational(1, 4), Rational(0), Rational(0)}, true),
  };
  for (const auto& mu : measures) {
    WalkConfig wc;
    wc.steps = 400;
    wc.walks = 5;
    wc.seed = seed;
    wc.threads = threads;
    const auto outcomes = batch_map(mu, wc, [](const Trajectory& t) {
      return std::make_pair(check_support_containment(t), replay(t) == t.final_state());
    });
    for (const auto& [contained, replayed] : outcomes) {
      ++res.cases;
      if (!contained) res.fail("lamp support escapes the increment sites");
      if (!replayed) res.fail("incremental state differs from replay");
    }
  }
  return res;
}

int cmd_verify(const CommonOptions& opts, std::ostream& out, std::ostream& err) {
  const ExperimentConfig cfg = resolve_config(opts);
  const std::string hash = hex_hash(config_hash(cfg));
  TestRng rng(cfg.seed);
  const std::vector<std::pair<std::string, std::function<CheckResult()>>> checks{
      {"group_law", [&] { return check_group_law(rng); }},
      {"metric_bfs", [] { return check_metric_bfs(); }},
      {"tsp_bruteforce", [&] { return check_tsp(rng); }},
      {"busemann", [&] { return check_busemann(rng); }},
      {"equivariance", [&] { return check_equivariance_suite(rng); }},
      {"strip_growth", [] { return check_strip_growth(); }},
      {"walk_bookkeeping", [&] { return check_walks(cfg.seed, opts.threads); }},
  };
  Sink sink(opts.out_path, out);
  std::size_t failed = 0;
  for (const auto& [name, run] : checks) {
    const CheckResult res = run();
    Record r("check");
    r.add("config_hash", hash)
        .add("seed", static_cast<std::int64_t>(cfg.seed))
        .add("name", name)
        .add("ok", res.failures == 0)
        .add("cases", res.cases)
        .add("failures", res.failures);
    if (!res.detail.empty()) r.add("detail", res.detail);
    sink.record(r);
    if (res.failures > 0) {
      ++failed;
      err << "lampwalk: check " << name << " failed: " << res.detail << '\n';
    }
  }
  return failed == 0 ? kOk : kInvariantViolation;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lamplighter random walks over free groups and lattices", "lampwalk"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  CommonOptions sim_opts, metric_opts, strip_opts, verify_opts;
  auto* sim = app.add_subcommand("simulate", "run seeded walks and report boundary estimators");
  add_common(sim, sim_opts);

  MetricOptions m;
  auto* metric = app.add_subcommand("metric", "word length of one lamplighter element");
  add_common(metric, metric_opts);
  metric->add_option("--lamps", m.lamps, "lamp sites, e.g. \"e a=2 ab\"");
  metric->add_option("--pos", m.pos, "lamplighter position");
  metric->add_flag("--bfs", m.bfs, "cross-check against breadth-first search (c = 1)");

  StripOptions s;
  auto* strip = app.add_subcommand("strip", "strip growth curve and equivariance fuzz");
  add_common(strip, strip_opts);
  strip->add_option("--u", s.u, "end u as prefix.period, e.g. a.a");
  strip->add_option("--v", s.v, "end v as prefix.period, e.g. A.A");
  strip->add_option("--plus-lamps", s.plus_lamps, "configuration attached to u");
  strip->add_option("--minus-lamps", s.minus_lamps, "configuration attached to v");
  strip->add_option("--n-max", s.n_max, "largest radius of the growth curve");
  strip->add_option("--trials", s.trials, "random equivariance trials");
  strip->add_option("--radius", s.radius, "radius of the equivariance test balls");
  strip->add_option("--csv", s.csv_path, "write the growth curve here instead of stdout");
  strip->add_option("--report", s.report_path, "write the equivariance record here instead of stdout");

  auto* verify = app.add_subcommand("verify", "run the invariant suite");
  add_common(verify, verify_opts);

  std::vector<std::string> argv(args.rbegin(), args.rend());  // CLI11 consumes from the back
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "lampwalk: " << e.what() << '\n';
    return kInvalidInput;
  }

  try {
    if (*sim) return cmd_simulate(sim_opts, out);
    if (*metric) return cmd_metric(metric_opts, m, out);
    if (*strip) return cmd_strip(strip_opts, s, out, err);
    if (*verify) return cmd_verify(verify_opts, out, err);
  } catch (const CapExceeded& e) {
    err << "lampwalk: " << e.what() << '\n';
    return kCapExceeded;
  } catch (const InvariantViolation& e) {
    err << "lampwalk: " << e.what() << '\n';
    return kInvariantViolation;
  } catch (const Error& e) {
    err << "lampwalk: " << e.what() << '\n';
    return kInvalidInput;
  }
  return kInvalidInput;
}

}  // namespace lampwalk::cli
