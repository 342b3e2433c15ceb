#include <doctest.h>

#include "lampwalk/error.hpp"
#include "lampwalk/lamplighter.hpp"
#include "lampwalk/sampling.hpp"
#include "oracles.hpp"

using namespace lampwalk;

namespace {

const GroupSpec F2 = GroupSpec::free(2);
const GroupSpec Z2 = GroupSpec::lattice(2);
const GroupSpec Z3 = GroupSpec::lattice(3);

BaseElement w(std::string_view s) { return parse_element(F2, s); }
BaseElement v(std::vector<std::int32_t> c) { return BaseElement::vector(std::move(c)); }

Configuration lamps(std::initializer_list<BaseElement> sites, int r = 2) {
  Configuration c(r);
  for (const auto& s : sites) c.add(s, 1);
  return c;
}

oracle::PlainLamp plain(const LampElement& g) {
  oracle::PlainLamp p;
  for (const auto& [site, _] : g.config.states()) p.lit.insert(oracle::letters(site));
  p.pos = oracle::letters(g.pos);
  return p;
}

}  // namespace

TEST_CASE("configurations never store zero") {
  Configuration c(3);
  c.set(w("a"), 3);
  CHECK(c.empty());
  c.add(w("a"), 2);
  c.add(w("a"), 1);
  CHECK(c.empty());
  c.set(w("b"), -1);
  CHECK(c.at(w("b")) == 2);
  CHECK_THROWS_AS(c.set(v({1, 0}), 1), VariantMismatch);
  CHECK_THROWS_AS(Configuration(1), InvalidInput);
}

TEST_CASE("translation") {
  const auto eta = lamps({w("e"), w("ab")});
  CHECK(translate(BaseElement(), eta) == eta);
  CHECK(translate(w("a"), Configuration::delta(BaseElement())) == Configuration::delta(w("a")));
  CHECK(translate(v({1, 0}), lamps({v({0, 0}), v({2, 0})})) == lamps({v({1, 0}), v({3, 0})}));
}

TEST_CASE("group law by hand") {
  const LampElement g{Configuration::delta(BaseElement()), w("a")};
  const LampElement h{Configuration::delta(BaseElement()), w("b")};
  CHECK(lamp_multiply(g, h) == LampElement{lamps({w("e"), w("a")}), w("ab")});
  const LampElement toggle{Configuration::delta(BaseElement()), BaseElement()};
  CHECK(lamp_multiply(toggle, toggle) == LampElement::identity(F2));
  CHECK(lamp_inverse(toggle) == toggle);
  CHECK(lamp_inverse(LampElement{Configuration(), w("ab")}) == LampElement{Configuration(), w("BA")});
  const LampElement da{Configuration::delta(w("a")), w("a")};
  CHECK(lamp_inverse(da) == LampElement{Configuration::delta(BaseElement()), w("A")});
  CHECK(lamp_multiply(da, lamp_inverse(da)) == LampElement::identity(F2));
}

TEST_CASE("in-place multiply matches") {
  TestRng rng(3);
  for (int i = 0; i < 200; ++i) {
    auto g = random_lamp_element(rng, F2, 3, 6, 4);
    const auto h = random_lamp_element(rng, F2, 3, 6, 4);
    const auto expect = lamp_multiply(g, h);
    lamp_multiply_inplace(g, h);
    REQUIRE(g == expect);
  }
}

TEST_CASE("group axioms on random elements") {
  TestRng rng(5);
  for (const auto& group : {F2, Z3}) {
    for (int r : {2, 5}) {
      const auto id = LampElement::identity(group, r);
      for (int i = 0; i < 500; ++i) {
        const auto a = random_lamp_element(rng, group, r, 10, 8);
        const auto b = random_lamp_element(rng, group, r, 10, 8);
        const auto c = random_lamp_element(rng, group, r, 10, 8);
        REQUIRE(lamp_multiply(lamp_multiply(a, b), c) == lamp_multiply(a, lamp_multiply(b, c)));
        REQUIRE(lamp_multiply(a, lamp_inverse(a)) == id);
        REQUIRE(lamp_multiply(lamp_inverse(a), a) == id);
        REQUIRE(lamp_multiply(a, id) == a);
        REQUIRE(lamp_multiply(id, a) == a);
      }
    }
  }
}

TEST_CASE("tour examples") {
  CHECK(tour_length(BaseElement(), w("aaa"), {}) == 3);
  CHECK(tour_length(BaseElement(), BaseElement(), {w("a"), w("aa")}) == 4);
  CHECK(tour_length(v({0, 0, 0}), v({0, 0, 0}), {v({1, 0, 0}), v({0, 1, 0})}) == 4);
  const auto r = solve_tour(BaseElement(), BaseElement(), {w("a"), w("b")});
  CHECK(r.exact);
  CHECK(r.length() == 4);
  CHECK(r.order.size() == 2);
}

TEST_CASE("tour matches brute force") {
  TestRng rng(17);
  for (const auto& group : {F2, Z2, Z3}) {
    for (int i = 0; i < 120; ++i) {
      const auto x = random_base_element(rng, group, 3);
      const auto x2 = random_base_element(rng, group, 3);
      std::vector<BaseElement> sites;
      const int m = std::uniform_int_distribution<int>(0, 7)(rng);
      for (int j = 0; j < m; ++j) sites.push_back(random_base_element(rng, group, 4));
      const auto expect = oracle::brute_force_tour(x, x2, sites);
      REQUIRE(tour_length(x, x2, sites) == expect);
      if (group.family == GroupFamily::Free) REQUIRE(tree_tour_length(x, x2, sites) == expect);
      const auto bounds = tour_bounds(x, x2, sites);
      REQUIRE(bounds.lower <= expect);
      REQUIRE(bounds.upper >= expect);
    }
  }
}

TEST_CASE("exact cap and heuristic bounds") {
  std::vector<BaseElement> sites;
  for (int i = 1; i <= 17; ++i) sites.push_back(v({i, i % 3, 0}));
  CHECK_THROWS_AS(tour_length(v({0, 0, 0}), v({0, 0, 0}), sites), CapExceeded);
  MetricParams p;
  p.heuristic = true;
  const auto r = solve_tour(v({0, 0, 0}), v({0, 0, 0}), sites, p);
  CHECK_FALSE(r.exact);
  CHECK(r.lower <= r.upper);
  // Trees never need the heuristic.
  std::vector<BaseElement> tsites;
  for (int i = 0; i < 20; ++i) tsites.push_back(w(std::string(static_cast<std::size_t>(i % 5 + 1), i % 2 ? 'a' : 'b')));
  const auto d = lamp_distance_detailed(LampElement::identity(F2), LampElement{lamps({}), BaseElement()});
  CHECK(d.exact);
  LampElement many{Configuration(), BaseElement()};
  for (const auto& s : tsites) many.config.set(s, 1);
  const auto dm = lamp_distance_detailed(LampElement::identity(F2), many);
  CHECK(dm.exact);
  CHECK(dm.value() == Rational(tree_tour_length(BaseElement(), BaseElement(), many.config.support()) +
                               static_cast<std::int64_t>(many.config.size())));
}

TEST_CASE("lamp distance examples") {
  const auto id = LampElement::identity(F2);
  CHECK(lamp_distance(id, LampElement{Configuration(), w("abA")}) == Rational(3));
  MetricParams half;
  half.c = Rational(1, 2);
  CHECK(lamp_distance(id, LampElement{Configuration::delta(BaseElement()), BaseElement()}, half) == Rational(1, 2));
  CHECK(lamp_distance(id, LampElement{Configuration::delta(w("a")), BaseElement()}) == Rational(3));
  CHECK(lamp_distance(id, LampElement{lamps({w("e"), w("a")}), BaseElement()}) == Rational(4));
  MetricParams bad;
  bad.c = Rational(0);
  CHECK_THROWS_AS(lamp_distance(id, id, bad), InvalidInput);
}

TEST_CASE("BFS oracle examples") {
  CHECK(bfs_distance_oracle(F2, LampElement::identity(F2), 4) == 0);
  CHECK(bfs_distance_oracle(F2, LampElement{Configuration(), w("a")}, 4) == 1);
  CHECK(bfs_distance_oracle(F2, LampElement{lamps({w("e"), w("a")}), BaseElement()}, 6) == 4);
  CHECK_THROWS_AS(bfs_distance_oracle(F2, LampElement{Configuration(), w("aaaaa")}, 3), InvalidInput);
}

TEST_CASE("library BFS ball equals independent BFS") {
  const int radius = 6;
  const auto lib = lamp_ball_bfs(F2, 2, radius);
  const auto ref = oracle::plain_lamp_ball(2, radius);
  REQUIRE(lib.size() == ref.size());
  for (const auto& [g, d] : lib) {
    auto it = ref.find(plain(g));
    REQUIRE(it != ref.end());
    REQUIRE(it->second == d);
    REQUIRE(lamp_distance(LampElement::identity(F2), g) == Rational(d));
  }
}

TEST_CASE("metric properties") {
  TestRng rng(23);
  for (const auto& group : {F2, Z3}) {
    for (int i = 0; i < 300; ++i) {
      const auto a = random_lamp_element(rng, group, 2, 5, 4);
      const auto b = random_lamp_element(rng, group, 2, 5, 4);
      const auto c = random_lamp_element(rng, group, 2, 5, 4);
      const auto k = random_lamp_element(rng, group, 2, 5, 4);
      const auto dab = lamp_distance(a, b);
      REQUIRE(dab == lamp_distance(b, a));
      REQUIRE(lamp_distance(a, c) <= dab + lamp_distance(b, c));
      REQUIRE(lamp_distance(lamp_multiply(k, a), lamp_multiply(k, b)) == dab);
      REQUIRE(Rational(word_distance(a.pos, b.pos)) <= dab);
      REQUIRE(lamp_distance(a, a) == Rational(0));
    }
  }
}

TEST_CASE("larger moduli count differing sites once") {
  const GroupSpec g = F2;
  Configuration c(5);
  c.set(w("a"), 3);
  // Any nonzero state is one toggle away: travel e->a->e plus one change.
  CHECK(lamp_distance(LampElement::identity(g, 5), LampElement{c, BaseElement()}) == Rational(3));
  CHECK(lamp_generators(g, 5).size() == 4 + 4);
}
