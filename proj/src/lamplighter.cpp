#include "lampwalk/lamplighter.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <unordered_map>

#include "lampwalk/error.hpp"

namespace lampwalk {

namespace {

int normalize_state(int state, int modulus) {
  const int s = state % modulus;
  return s < 0 ? s + modulus : s;
}

void require_same_modulus(const Configuration& a, const Configuration& b) {
  if (a.modulus() != b.modulus()) {
    throw VariantMismatch("lamp moduli differ: Z_" + std::to_string(a.modulus()) + " vs Z_" +
                          std::to_string(b.modulus()));
  }
}

std::vector<std::vector<std::int64_t>> distance_matrix(const std::vector<BaseElement>& points) {
  const std::size_t n = points.size();
  std::vector<std::vector<std::int64_t>> d(n, std::vector<std::int64_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      d[i][j] = d[j][i] = word_distance(points[i], points[j]);
    }
  }
  return d;
}

TourResult held_karp(const BaseElement& x, const BaseElement& x2, const std::vector<BaseElement>& sites) {
  const std::size_t m = sites.size();
  TourResult result;
  if (m == 0) {
    result.lower = result.upper = word_distance(x, x2);
    return result;
  }
  // Points: 0..m-1 sites, m = start, m+1 = finish.
  std::vector<BaseElement> points = sites;
  points.push_back(x);
  points.push_back(x2);
  const auto d = distance_matrix(points);

  const std::size_t full = (std::size_t{1} << m) - 1;
  constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
  std::vector<std::int64_t> dp((full + 1) * m, kInf);
  std::vector<std::int8_t> parent((full + 1) * m, -1);
  auto at = [m](std::size_t mask, std::size_t j) { return mask * m + j; };

  for (std::size_t j = 0; j < m; ++j) dp[at(std::size_t{1} << j, j)] = d[m][j];
  for (std::size_t mask = 1; mask <= full; ++mask) {
    for (std::size_t j = 0; j < m; ++j) {
      if (!(mask >> j & 1U)) continue;
      const std::int64_t here = dp[at(mask, j)];
      if (here >= kInf) continue;
      for (std::size_t k = 0; k < m; ++k) {
        if (mask >> k & 1U) continue;
        const std::size_t next = mask | (std::size_t{1} << k);
        const std::int64_t cand = here + d[j][k];
        if (cand < dp[at(next, k)]) {
          dp[at(next, k)] = cand;
          parent[at(next, k)] = static_cast<std::int8_t>(j);
        }
      }
    }
  }

  std::int64_t best = kInf;
  std::size_t last = 0;
  for (std::size_t j = 0; j < m; ++j) {
    const std::int64_t cand = dp[at(full, j)] + d[j][m + 1];
    if (cand < best) {
      best = cand;
      last = j;
    }
  }
  result.lower = result.upper = best;

  std::vector<BaseElement> order;
  std::size_t mask = full;
  std::int64_t j = static_cast<std::int64_t>(last);
  while (j >= 0) {
    order.push_back(sites[static_cast<std::size_t>(j)]);
    const std::int8_t p = parent[at(mask, static_cast<std::size_t>(j))];
    mask &= ~(std::size_t{1} << j);
    j = p;
  }
  std::reverse(order.begin(), order.end());
  result.order = std::move(order);
  return result;
}

std::vector<BaseElement> dedupe(std::vector<BaseElement> sites) {
  std::sort(sites.begin(), sites.end());
  sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
  return sites;
}

}  // namespace

Configuration::Configuration(int modulus) : modulus_(modulus) {
  if (modulus < 2) throw InvalidInput("lamp modulus r must be >= 2");
}

void Configuration::check_variant(const BaseElement& site) const {
  if (states_.empty()) return;
  const BaseElement& first = states_.begin()->first;
  if (first.family() != site.family() || (!site.is_free() && first.size() != site.size())) {
    throw VariantMismatch("configuration sites must share one base group");
  }
}

int Configuration::at(const BaseElement& site) const {
  auto it = states_.find(site);
  return it == states_.end() ? 0 : it->second;
}

void Configuration::set(const BaseElement& site, int state) {
  const int s = normalize_state(state, modulus_);
  if (s == 0) {
    states_.erase(site);
    return;
  }
  check_variant(site);
  states_[site] = s;
}

void Configuration::add(const BaseElement& site, int delta) {
  const int d = normalize_state(delta, modulus_);
  if (d == 0) return;
  auto it = states_.find(site);
  if (it == states_.end()) {
    check_variant(site);
    states_.emplace(site, d);
    return;
  }
  it->second = (it->second + d) % modulus_;
  if (it->second == 0) states_.erase(it);
}

std::vector<BaseElement> Configuration::support() const {
  std::vector<BaseElement> sites;
  sites.reserve(states_.size());
  for (const auto& [site, state] : states_) sites.push_back(site);
  return sites;
}

Configuration& Configuration::operator+=(const Configuration& rhs) {
  require_same_modulus(*this, rhs);
  for (const auto& [site, state] : rhs.states_) add(site, state);
  return *this;
}

Configuration Configuration::delta(const BaseElement& site, int modulus, int state) {
  Configuration c(modulus);
  c.set(site, state);
  return c;
}

std::vector<BaseElement> differing_sites(const Configuration& a, const Configuration& b) {
  require_same_modulus(a, b);
  std::vector<BaseElement> out;
  auto ia = a.states().begin();
  auto ib = b.states().begin();
  while (ia != a.states().end() || ib != b.states().end()) {
    if (ib == b.states().end() || (ia != a.states().end() && ia->first < ib->first)) {
      out.push_back((ia++)->first);
    } else if (ia == a.states().end() || ib->first < ia->first) {
      out.push_back((ib++)->first);
    } else {
      if (ia->second != ib->second) out.push_back(ia->first);
      ++ia;
      ++ib;
    }
  }
  return out;
}

std::string to_string(const LampElement& g) {
  std::string s = "{";
  bool first = true;
  for (const auto& [site, state] : g.config.states()) {
    if (!first) s.push_back(' ');
    first = false;
    s += to_string(site);
    if (state != 1) s += "=" + std::to_string(state);
  }
  return s + "}@" + to_string(g.pos);
}

Configuration translate(const BaseElement& x, const Configuration& eta) {
  Configuration out(eta.modulus());
  for (const auto& [site, state] : eta.states()) out.set(multiply(x, site), state);
  return out;
}

void lamp_multiply_inplace(LampElement& g, const LampElement& h) {
  require_same_modulus(g.config, h.config);
  for (const auto& [site, state] : h.config.states()) g.config.add(multiply(g.pos, site), state);
  g.pos *= h.pos;
}

LampElement lamp_multiply(const LampElement& g, const LampElement& h) {
  LampElement out = g;
  lamp_multiply_inplace(out, h);
  return out;
}

LampElement lamp_inverse(const LampElement& g) {
  const BaseElement inv = g.pos.inverse();
  Configuration negated(g.config.modulus());
  for (const auto& [site, state] : g.config.states()) negated.set(multiply(inv, site), -state);
  return {std::move(negated), inv};
}

TourResult solve_tour(const BaseElement& x, const BaseElement& x2, const std::vector<BaseElement>& sites,
                      const MetricParams& params) {
  std::vector<BaseElement> unique = dedupe(sites);
  const int cap = std::min(params.exact_tsp_max_lamps, 20);
  if (static_cast<int>(unique.size()) <= cap) return held_karp(x, x2, unique);
  if (!params.heuristic) throw CapExceeded("exact TSP sites", cap, static_cast<long long>(unique.size()));
  return tour_bounds(x, x2, unique);
}

std::int64_t tour_length(const BaseElement& x, const BaseElement& x2, const std::vector<BaseElement>& sites,
                         const MetricParams& params) {
  MetricParams strict = params;
  strict.heuristic = false;
  return solve_tour(x, x2, sites, strict).length();
}

std::int64_t tree_tour_length(const BaseElement& x, const BaseElement& x2, const std::vector<BaseElement>& sites) {
  if (!x.is_free() || !x2.is_free()) throw VariantMismatch("tree tour length needs free-group elements");
  // Trie of all prefixes; node 0 is the identity.
  std::vector<std::int32_t> parent{-1};
  std::vector<std::int64_t> count{0};
  std::unordered_map<std::uint64_t, std::int32_t> child;
  auto insert = [&](const BaseElement& w) {
    if (!w.is_free()) throw VariantMismatch("tree tour length needs free-group elements");
    std::int32_t node = 0;
    for (std::int32_t letter : w.letters()) {
      const std::uint64_t key = (static_cast<std::uint64_t>(node) << 32) | static_cast<std::uint32_t>(letter);
      auto [it, inserted] = child.try_emplace(key, static_cast<std::int32_t>(parent.size()));
      if (inserted) {
        parent.push_back(node);
        count.push_back(0);
      }
      node = it->second;
    }
    ++count[static_cast<std::size_t>(node)];
  };
  insert(x);
  insert(x2);
  for (const auto& s : sites) insert(s);
  const std::int64_t total = static_cast<std::int64_t>(sites.size()) + 2;

  // Children always have larger ids than their parents.
  std::int64_t edges = 0;
  for (std::size_t v = parent.size(); v-- > 1;) {
    if (count[v] > 0 && count[v] < total) ++edges;
    count[static_cast<std::size_t>(parent[v])] += count[v];
  }
  return 2 * edges - word_distance(x, x2);
}

TourResult tour_bounds(const BaseElement& x, const BaseElement& x2, const std::vector<BaseElement>& sites) {
  TourResult result;
  result.exact = false;
  const std::size_t m = sites.size();
  if (m == 0) {
    result.lower = result.upper = word_distance(x, x2);
    result.exact = true;
    return result;
  }

  // Nearest-neighbour upper bound.
  std::vector<bool> used(m, false);
  BaseElement here = x;
  std::int64_t upper = 0;
  for (std::size_t step = 0; step < m; ++step) {
    std::size_t best = m;
    std::int64_t best_d = std::numeric_limits<std::int64_t>::max();
    for (std::size_t j = 0; j < m; ++j) {
      if (used[j]) continue;
      const std::int64_t dj = word_distance(here, sites[j]);
      if (dj < best_d) {
        best_d = dj;
        best = j;
      }
    }
    used[best] = true;
    upper += best_d;
    result.order.push_back(sites[best]);
    here = sites[best];
  }
  upper += word_distance(here, x2);

  // Prim over {x, x2, sites}: any x -> x2 path through all sites spans them.
  std::vector<BaseElement> points = sites;
  points.push_back(x);
  points.push_back(x2);
  const std::size_t n = points.size();
  std::vector<std::int64_t> key(n, std::numeric_limits<std::int64_t>::max());
  std::vector<bool> in_tree(n, false);
  key[0] = 0;
  std::int64_t mst = 0;
  for (std::size_t it = 0; it < n; ++it) {
    std::size_t u = n;
    for (std::size_t v = 0; v < n; ++v) {
      if (!in_tree[v] && (u == n || key[v] < key[u])) u = v;
    }
    in_tree[u] = true;
    mst += key[u];
    for (std::size_t v = 0; v < n; ++v) {
      if (!in_tree[v]) key[v] = std::min(key[v], word_distance(points[u], points[v]));
    }
  }
  std::int64_t detour = 0;
  for (const auto& s : sites) detour = std::max(detour, word_distance(x, s) + word_distance(s, x2));

  result.lower = std::max(mst, detour);
  result.upper = upper;
  result.exact = result.lower == result.upper;
  return result;
}

LampDistance lamp_distance_detailed(const LampElement& g, const LampElement& h, const MetricParams& params) {
  if (params.c <= Rational(0)) throw InvalidInput("lamp cost c must be positive");
  const std::vector<BaseElement> sites = differing_sites(g.config, h.config);
  const Rational toggles = params.c * static_cast<std::int64_t>(sites.size());
  LampDistance out;
  if (static_cast<int>(sites.size()) <= std::min(params.exact_tsp_max_lamps, 20)) {
    TourResult tour = held_karp(g.pos, h.pos, sites);
    out.lower = out.upper = Rational(tour.length()) + toggles;
    out.tour = std::move(tour.order);
    return out;
  }
  if (g.pos.is_free()) {
    out.lower = out.upper = Rational(tree_tour_length(g.pos, h.pos, sites)) + toggles;
    return out;
  }
  TourResult tour = solve_tour(g.pos, h.pos, sites, params);
  out.lower = Rational(tour.lower) + toggles;
  out.upper = Rational(tour.upper) + toggles;
  out.exact = tour.exact;
  out.tour = std::move(tour.order);
  return out;
}

Rational lamp_distance(const LampElement& g, const LampElement& h, const MetricParams& params) {
  MetricParams strict = params;
  strict.heuristic = false;
  return lamp_distance_detailed(g, h, strict).value();
}

std::vector<LampElement> lamp_generators(const GroupSpec& group, int modulus) {
  std::vector<LampElement> gens;
  for (int k = 1; k < modulus; ++k) {
    gens.push_back({Configuration::delta(group.identity(), modulus, k), group.identity()});
  }
  for (const auto& s : group.generators()) gens.push_back({Configuration(modulus), s});
  return gens;
}

std::size_t LampElementHash::operator()(const LampElement& g) const noexcept {
  std::size_t h = g.pos.hash();
  for (const auto& [site, state] : g.config.states()) {
    h ^= site.hash() + 0x9e3779b97f4a7c15ULL + static_cast<std::size_t>(state) + (h << 6) + (h >> 2);
  }
  return h;
}

std::unordered_map<LampElement, int, LampElementHash> lamp_ball_bfs(const GroupSpec& group, int modulus,
                                                                    int max_radius) {
  const auto gens = lamp_generators(group, modulus);
  std::unordered_map<LampElement, int, LampElementHash> dist;
  std::deque<LampElement> queue;
  LampElement start = LampElement::identity(group, modulus);
  dist.emplace(start, 0);
  queue.push_back(std::move(start));
  while (!queue.empty()) {
    LampElement g = std::move(queue.front());
    queue.pop_front();
    const int dg = dist.at(g);
    if (dg == max_radius) continue;
    for (const auto& s : gens) {
      LampElement next = lamp_multiply(g, s);
      if (dist.try_emplace(next, dg + 1).second) queue.push_back(std::move(next));
    }
  }
  return dist;
}

int bfs_distance_oracle(const GroupSpec& group, const LampElement& g, int max_radius) {
  if (max_radius > 12) throw CapExceeded("BFS oracle radius", 12, max_radius);
  group.validate(g.pos);
  const LampElement start = LampElement::identity(group, g.config.modulus());
  if (g == start) return 0;
  const auto gens = lamp_generators(group, g.config.modulus());
  std::unordered_map<LampElement, int, LampElementHash> dist{{start, 0}};
  std::deque<LampElement> queue{start};
  while (!queue.empty()) {
    LampElement cur = std::move(queue.front());
    queue.pop_front();
    const int dc = dist.at(cur);
    if (dc == max_radius) continue;
    for (const auto& s : gens) {
      LampElement next = lamp_multiply(cur, s);
      if (!dist.try_emplace(next, dc + 1).second) continue;
      if (next == g) return dc + 1;
      queue.push_back(std::move(next));
    }
  }
  throw InvalidInput("element " + to_string(g) + " not reached within BFS radius " + std::to_string(max_radius));
}

}  // namespace lampwalk
