#include <cmath>

#include <doctest.h>

#include "lampwalk/error.hpp"
#include "lampwalk/sampling.hpp"
#include "lampwalk/strips.hpp"
#include "oracles.hpp"

using namespace lampwalk;

namespace {

const GroupSpec F2 = GroupSpec::free(2);
const GroupSpec Z3 = GroupSpec::lattice(3);

BaseElement w(std::string_view s) { return parse_element(F2, s); }
BaseElement v(std::vector<std::int32_t> c) { return BaseElement::vector(std::move(c)); }
BoundaryPoint end(std::string_view s) { return parse_end(F2, s); }

Configuration lamps(std::initializer_list<BaseElement> sites) {
  Configuration c;
  for (const auto& s : sites) c.set(s, 1);
  return c;
}

oracle::Word long_word(const BoundaryPoint& u, std::size_t n) {
  const auto& e = u.as_end();
  return oracle::end_letters(oracle::letters(e.prefix), oracle::letters(e.period), n);
}

std::int64_t word_dist(const oracle::Word& a, const oracle::Word& b) {
  return static_cast<std::int64_t>(oracle::concat(oracle::invert(a), b).size());
}

// y lies on the geodesic between u and v iff it lies on the geodesic between
// their long truncations.
bool on_geodesic(const BoundaryPoint& u, const BoundaryPoint& v, const BaseElement& y) {
  const std::size_t j = 40 + y.size();
  const auto uj = long_word(u, j);
  const auto vj = long_word(v, j);
  const auto yw = oracle::letters(y);
  return word_dist(uj, yw) + word_dist(yw, vj) == word_dist(uj, vj);
}

std::int64_t beta(const BoundaryPoint& u, const BaseElement& x, const BaseElement& y) {
  const auto& e = u.as_end();
  return oracle::busemann(oracle::letters(e.prefix), oracle::letters(e.period), x, y);
}

// In a tree, cutting the edge {x, x'} leaves y on the side of x' iff y is
// closer to x' than to x.
Side oracle_cut_side(const BoundaryPoint& u, const BaseElement& x, const BaseElement& y) {
  BaseElement toward;
  for (const auto& s : F2.generators()) {
    const auto n = multiply(x, s);
    if (beta(u, x, n) == 1) toward = n;
  }
  return oracle::distance(y, toward) < oracle::distance(y, x) ? Side::Plus : Side::Minus;
}

ExactOmegaPoint omega(Configuration c, BoundaryPoint p) { return {std::move(c), std::move(p), false}; }

const std::vector<Rational> kDrift{Rational(1, 3), Rational(0), Rational(0)};

}  // namespace

TEST_CASE("tree strips") {
  const auto s = base_strip(F2, end(".a"), end(".A"));
  for (int i = -6; i <= 6; ++i) {
    const std::string word(static_cast<std::size_t>(std::abs(i)), i >= 0 ? 'a' : 'A');
    CHECK(s.contains(w(word)));
  }
  CHECK_FALSE(s.contains(w("b")));
  CHECK_FALSE(s.contains(w("ab")));

  const auto t = base_strip(F2, end(".a"), end(".b"));
  CHECK(t.contains(w("aaa")));
  CHECK(t.contains(w("bb")));
  CHECK(t.contains(BaseElement()));
  CHECK_FALSE(t.contains(w("A")));
  CHECK_FALSE(t.contains(w("ab")));

  CHECK_THROWS_AS(base_strip(F2, end(".a"), end("a.a")), InvalidInput);
  CHECK_THROWS_AS(base_strip(F2, end("aa"), end(".A")), InvalidInput);
  CHECK(base_strip(Z3, BoundaryPoint::direction({1, 0, 0}), BoundaryPoint::direction({-1, 0, 0})).kind ==
        StripKind::FullLattice);
}

TEST_CASE("strip membership agrees with the geodesic oracle") {
  TestRng rng(43);
  const auto ball = enumerate_ball(F2, BaseElement(), 5).elements;
  for (int i = 0; i < 40; ++i) {
    const auto u = random_exact_end(rng, F2, 3, 3);
    auto v = random_exact_end(rng, F2, 3, 3);
    if (u == v) continue;
    const auto s = base_strip(F2, u, v);
    std::int64_t count = 0;
    for (const auto& y : ball) {
      const bool on = on_geodesic(u, v, y);
      REQUIRE(s.contains(y) == on);
      count += on;
      if (on) {
        // Removing y separates the two ends: their truncations reach y from
        // different neighbours (or y is where the rays meet).
        const auto uj = long_word(u, 40), vj = long_word(v, 40);
        const auto yw = oracle::letters(y);
        REQUIRE(word_dist(uj, yw) + word_dist(yw, vj) == word_dist(uj, vj));
      }
    }
    REQUIRE(strip_ball_count(s, 5) == count);
    REQUIRE(count <= 11);
    REQUIRE(static_cast<std::int64_t>(s.points_within(BaseElement(), 5).size()) == count);
  }
}

TEST_CASE("strip ball counts") {
  const auto through_e = base_strip(F2, end(".a"), end(".A"));
  for (int n = 0; n <= 14; ++n) CHECK(strip_ball_count(through_e, n) == 2 * n + 1);
  CHECK(strip_ball_count(through_e, 3) == 7);
  const auto shifted = base_strip(F2, end("bb.a"), end("bb.A"));
  for (int n = 0; n <= 10; ++n) CHECK(strip_ball_count(shifted, n) == (n >= 2 ? 2 * (n - 2) + 1 : 0));
  const auto lattice = lattice_strip(Z3, kDrift);
  CHECK(strip_ball_count(lattice, 2) == 25);
  for (int n = 0; n <= 6; ++n) CHECK(strip_ball_count(lattice, n) == oracle::lattice_ball_count(3, n));
  CHECK_THROWS_AS(strip_ball_count(lattice, 400), CapExceeded);
}

TEST_CASE("busemann examples") {
  const auto u = end(".a");
  CHECK(busemann(u, w("ab"), w("ab")) == 0);
  CHECK(busemann(u, BaseElement(), w("a")) == 1);
  CHECK(busemann(u, w("aa"), w("a")) == -1);
  CHECK(busemann(u, BaseElement(), w("ab")) == 0);
  CHECK(busemann(u, BaseElement(), w("b")) == -1);
}

TEST_CASE("busemann against the limit, cocycle and antisymmetry") {
  TestRng rng(47);
  for (int i = 0; i < 500; ++i) {
    const auto u = random_exact_end(rng, F2, 4, 3);
    const auto x = random_base_element(rng, F2, 6);
    const auto y = random_base_element(rng, F2, 6);
    const auto z = random_base_element(rng, F2, 6);
    REQUIRE(busemann(u, x, y) == beta(u, x, y));
    REQUIRE(busemann(u, x, z) == busemann(u, x, y) + busemann(u, y, z));
    REQUIRE(busemann(u, x, y) == -busemann(u, y, x));
  }
}

TEST_CASE("partition examples") {
  const auto s = base_strip(F2, end(".a"), end(".A"));
  const auto cut = half_space_partition(s, BaseElement(), PartitionScheme::TreeEdgeCut);
  CHECK(cut.classify(w("aaaaab")) == Side::Plus);
  CHECK(cut.classify(w("b")) == Side::Minus);
  CHECK(cut.classify(BaseElement()) == Side::Minus);
  CHECK(cut.classify(w("A")) == Side::Minus);

  const auto lat = lattice_strip(Z3, {Rational(1), Rational(0), Rational(0)} );
  // |m|_1 = 1 is not a valid walk drift but fixes the geometry all the same.
  const auto hyper = half_space_partition(lat, v({2, 0, 0}), PartitionScheme::Hyperplane,
                                          {Rational(1), Rational(0), Rational(0)});
  CHECK(hyper.classify(v({3, 0, 0})) == Side::Plus);
  CHECK(hyper.classify(v({2, 5, 0})) == Side::Minus);
  CHECK(hyper.classify(v({1, 0, 0})) == Side::Minus);

  const auto horo = half_space_partition(s, BaseElement(), PartitionScheme::Horosphere);
  CHECK(horo.classify(BaseElement()) == Side::Plus);
  CHECK(horo.classify(w("ab")) == Side::Plus);
  CHECK(horo.classify(w("Ab")) == Side::Minus);
  CHECK(horo.classify(w("b")) == Side::Neither);

  CHECK_THROWS_AS(half_space_partition(s, w("b"), PartitionScheme::TreeEdgeCut), InvalidInput);
  CHECK_THROWS_AS(half_space_partition(s, BaseElement(), PartitionScheme::Hyperplane), VariantMismatch);
  CHECK_THROWS_AS(half_space_partition(lat, v({0, 0, 0}), PartitionScheme::Horosphere), VariantMismatch);
  CHECK_THROWS_AS(half_space_partition(lattice_strip(Z3, kDrift), v({0, 0, 0}), PartitionScheme::Hyperplane,
                                       {Rational(0), Rational(1, 3), Rational(0)}),
                  InvalidInput);
}

TEST_CASE("partitions agree with the distance oracles") {
  TestRng rng(53);
  const auto ball = enumerate_ball(F2, BaseElement(), 5).elements;
  for (int i = 0; i < 30; ++i) {
    const auto u = random_exact_end(rng, F2, 3, 3);
    const auto vv = random_exact_end(rng, F2, 3, 3);
    if (u == vv) continue;
    const auto s = base_strip(F2, u, vv);
    const auto pts = s.points_within(BaseElement(), 4);
    const auto& x = pts[static_cast<std::size_t>(i) % pts.size()];
    const auto cut = half_space_partition(s, x, PartitionScheme::TreeEdgeCut);
    const auto horo = half_space_partition(s, x, PartitionScheme::Horosphere);
    REQUIRE(horo.classify(x) == Side::Plus);
    for (const auto& y : ball) {
      REQUIRE(cut.classify(y) == oracle_cut_side(u, x, y));
      const Side h = horo.classify(y);
      REQUIRE((h == Side::Plus) == (beta(u, x, y) == 0));
      if (h != Side::Plus) REQUIRE((h == Side::Minus) == (beta(vv, x, y) == 0));
    }
    // Every strip point beyond the cut toward u is Plus.
    for (const auto& y : s.points_within(x, 6)) {
      if (beta(u, x, y) > 0) REQUIRE(cut.classify(y) == Side::Plus);
      if (beta(u, x, y) <= 0) REQUIRE(cut.classify(y) == Side::Minus);
    }
  }
}

TEST_CASE("glue") {
  const auto s = base_strip(F2, end(".a"), end(".A"));
  const auto at_a = half_space_partition(s, w("a"), PartitionScheme::TreeEdgeCut);
  CHECK(glue_configuration(Configuration(), Configuration(), at_a).empty());
  CHECK(glue_configuration(lamps({w("aa"), w("aab")}), lamps({w("A"), w("b")}), at_a).empty());
  CHECK(glue_configuration(lamps({w("e"), w("a")}), lamps({w("aa")}), at_a) == lamps({w("e"), w("a"), w("aa")}));

  // The lattice glue depends on x only through its hyperplane.
  const auto lat = lattice_strip(Z3, kDrift);
  const auto p1 = half_space_partition(lat, v({1, 0, 0}), PartitionScheme::Hyperplane, kDrift);
  const auto p2 = half_space_partition(lat, v({1, 4, -2}), PartitionScheme::Hyperplane, kDrift);
  Configuration plus, minus;
  for (int i = -3; i <= 3; ++i) {
    plus.set(v({i, i, 0}), 1);
    minus.set(v({-i, 0, i}), 1);
  }
  CHECK(glue_configuration(plus, minus, p1) == glue_configuration(plus, minus, p2));
}

TEST_CASE("lifted strip counts") {
  const auto u = omega(Configuration(), end(".a"));
  const auto vv = omega(Configuration(), end(".A"));
  const auto curve = lifted_strip_curve(F2, u, vv, PartitionScheme::TreeEdgeCut, 8);
  for (const auto& row : curve) {
    CHECK(row.count_g == 2 * row.n + 1);
    CHECK(row.count_base == 2 * row.n + 1);
  }
  const auto c0 = lifted_strip_count(F2, omega(lamps({w("A")}), end(".a")), vv, PartitionScheme::TreeEdgeCut, 0);
  CHECK((c0.count_g == 0 || c0.count_g == 1));
  CHECK_THROWS_AS(lifted_strip_curve(F2, omega(Configuration(), end("aa")), vv, PartitionScheme::TreeEdgeCut, 3),
                  InvalidInput);
}

TEST_CASE("lifted strip counts against brute-force tours") {
  TestRng rng(59);
  for (int i = 0; i < 25; ++i) {
    const auto u = random_exact_end(rng, F2, 2, 2);
    const auto vv = random_exact_end(rng, F2, 2, 2);
    if (u == vv) continue;
    const auto bp = omega(random_configuration(rng, F2, 2, 4, 4), u);
    const auto bm = omega(random_configuration(rng, F2, 2, 4, 4), vv);
    const int n_max = 7;
    const auto curve = lifted_strip_curve(F2, bp, bm, PartitionScheme::TreeEdgeCut, n_max);
    const auto s = base_strip(F2, u, vv);
    std::vector<std::int64_t> expect(n_max + 1, 0);
    for (const auto& x : s.points_within(BaseElement(), n_max)) {
      // Phi from the distance oracle for the cut.
      Configuration phi;
      for (const auto& [y, st] : bm.config.states()) {
        if (oracle_cut_side(u, x, y) == Side::Plus) phi.set(y, st);
      }
      for (const auto& [y, st] : bp.config.states()) {
        if (oracle_cut_side(u, x, y) == Side::Minus) phi.set(y, st);
      }
      const auto d = oracle::brute_force_tour(BaseElement(), x, phi.support()) + static_cast<std::int64_t>(phi.size());
      for (std::int64_t n = d; n <= n_max; ++n) ++expect[static_cast<std::size_t>(n)];
    }
    for (const auto& row : curve) {
      REQUIRE(row.count_g == expect[static_cast<std::size_t>(row.n)]);
      REQUIRE(row.count_g <= row.count_base);
    }
  }
}

TEST_CASE("equivariance") {
  const auto bp = omega(lamps({w("aa"), w("aab")}), end(".a"));
  const auto bm = omega(lamps({w("AB"), w("A")}), end(".A"));
  const LampElement trivial = LampElement::identity(F2);
  CHECK(check_equivariance(F2, trivial, bp, bm, BaseElement(), PartitionScheme::TreeEdgeCut).ok());
  const LampElement shift{lamps({w("b"), w("e")}), w("a")};
  const auto rep = check_equivariance(F2, shift, bp, bm, w("A"), PartitionScheme::TreeEdgeCut);
  CHECK(rep.ok());
  CHECK(rep.checked > 0);
  // The strip through a^{+-inf} is invariant under a.
  CHECK(base_strip(F2, act_on_boundary(w("a"), end(".a")), act_on_boundary(w("a"), end(".A"))).u == end(".a"));

  TestRng rng(61);
  for (int i = 0; i < 40; ++i) {
    const auto u = random_exact_end(rng, F2, 3, 3);
    const auto vv = random_exact_end(rng, F2, 3, 3);
    if (u == vv) continue;
    const auto g = random_lamp_element(rng, F2, 2, 4, 4);
    const auto b1 = omega(random_configuration(rng, F2, 2, 4, 4), u);
    const auto b2 = omega(random_configuration(rng, F2, 2, 4, 4), vv);
    const auto pts = base_strip(F2, u, vv).points_within(BaseElement(), 3);
    const auto& x = pts[static_cast<std::size_t>(i) % pts.size()];
    const auto r = check_equivariance(F2, g, b1, b2, x, PartitionScheme::TreeEdgeCut, 4);
    REQUIRE_MESSAGE(r.ok(), (r.examples.empty() ? "" : r.examples.front()));
    const auto h = check_equivariance(F2, g, b1, b2, x, PartitionScheme::Horosphere, 4);
    REQUIRE(h.strip_mismatches == 0);
    REQUIRE(h.partition_mismatches == 0);
  }

  for (int i = 0; i < 20; ++i) {
    const auto g = random_lamp_element(rng, Z3, 2, 4, 3);
    const auto lat = lattice_strip(Z3, kDrift);
    const auto b1 = omega(random_configuration(rng, Z3, 2, 4, 4), lat.u);
    const auto b2 = omega(random_configuration(rng, Z3, 2, 4, 4), lat.v);
    const auto x = random_base_element(rng, Z3, 2);
    const auto r = check_equivariance(Z3, g, b1, b2, x, PartitionScheme::Hyperplane, 4, kDrift);
    REQUIRE(r.ok());
  }
}

TEST_CASE("horosphere glue is not equivariant for lamps off both horospheres") {
  // Phi vanishes on the Neither region, so a lamp that g switches on there is
  // lost on the right-hand side.
  const auto bp = omega(Configuration(), end(".a"));
  const auto bm = omega(Configuration(), end(".A"));
  const LampElement g{lamps({w("b")}), BaseElement()};
  const auto rep = check_equivariance(F2, g, bp, bm, BaseElement(), PartitionScheme::Horosphere, 3);
  CHECK(rep.strip_mismatches == 0);
  CHECK(rep.partition_mismatches == 0);
  CHECK(rep.lifted_mismatches > 0);
  // The same element is fine under the edge cut, which has no Neither region.
  CHECK(check_equivariance(F2, g, bp, bm, BaseElement(), PartitionScheme::TreeEdgeCut, 3).ok());
}

TEST_CASE("omega points") {
  const LampElement g{lamps({w("b")}), w("a")};
  const auto b = omega(lamps({w("e")}), end(".b"));
  const auto gb = act_on_omega(g, b);
  CHECK(gb.config == lamps({w("a"), w("b")}));
  CHECK(gb.point == end("a.b"));
  const auto back = act_on_omega(lamp_inverse(g), gb);
  CHECK(back.config == b.config);
  CHECK(back.point == b.point);

  WalkConfig cfg;
  cfg.steps = 2000;
  const auto t = run_walk(switch_walk(F2), cfg, 0);
  const auto p = promote_omega_point(estimate_omega_point(t, 200));
  CHECK(p.promoted);
  CHECK(p.point.exact());
  CHECK(p.config.size() <= t.final_config().size());
}

TEST_CASE("scheme names") {
  for (auto s : {PartitionScheme::TreeEdgeCut, PartitionScheme::Horosphere, PartitionScheme::Hyperplane}) {
    CHECK(parse_scheme(to_string(s)) == s);
  }
  CHECK(parse_scheme("cut") == PartitionScheme::TreeEdgeCut);
  CHECK_THROWS_AS(parse_scheme("nope"), InvalidInput);
}
