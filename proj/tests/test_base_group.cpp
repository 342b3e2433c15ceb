#include <doctest.h>

#include "lampwalk/base_group.hpp"
#include "lampwalk/boundary_point.hpp"
#include "lampwalk/error.hpp"
#include "lampwalk/sampling.hpp"
#include "oracles.hpp"

using namespace lampwalk;

namespace {

const GroupSpec F2 = GroupSpec::free(2);
const GroupSpec Z2 = GroupSpec::lattice(2);
const GroupSpec Z3 = GroupSpec::lattice(3);

BaseElement w(std::string_view s) { return parse_element(F2, s); }
BaseElement v(std::vector<std::int32_t> c) { return BaseElement::vector(std::move(c)); }

}  // namespace

TEST_CASE("multiply reduces and adds") {
  CHECK(multiply(w("a"), w("A")).is_identity());
  CHECK(multiply(w("ab"), w("Ba")) == w("aa"));
  CHECK(multiply(v({1, 2, 0}), v({0, -2, 3})) == v({1, 0, 3}));
  CHECK_THROWS_AS(multiply(w("a"), v({1, 0})), VariantMismatch);
}

TEST_CASE("word distance") {
  CHECK(word_distance(BaseElement(), w("abab")) == 4);
  CHECK(word_distance(w("a"), w("a")) == 0);
  CHECK(word_distance(v({0, 0, 0}), v({2, -1, 3})) == 6);
  CHECK(word_distance(w("ab"), w("aB")) == 2);
}

TEST_CASE("parse and print elements") {
  CHECK(to_string(w("abBA")) == "e");
  CHECK(to_string(w("aBab")) == "aBab");
  CHECK(to_string(parse_element(GroupSpec::free(3), "aBc")) == "aBc");
  CHECK(to_string(parse_element(Z3, "(1,-2,0)")) == to_string(v({1, -2, 0})));
  CHECK(parse_element(Z3, "1,-2,0") == v({1, -2, 0}));
  CHECK_THROWS_AS(parse_element(F2, "ac"), InvalidInput);  // c is not a generator of F_2
  CHECK_THROWS_AS(parse_element(Z3, "1,2"), InvalidInput);
}

TEST_CASE("balls") {
  auto b1 = enumerate_ball(F2, BaseElement(), 1);
  CHECK(b1.elements.size() == 5);
  CHECK(enumerate_ball(F2, BaseElement(), 2).elements.size() == 17);
  CHECK(enumerate_ball(Z2, Z2.identity(), 2).elements.size() == 13);
  CHECK_THROWS_AS(enumerate_ball(F2, BaseElement(), 15), CapExceeded);
  CHECK(F2.default_ball_cap() == 14);
}

TEST_CASE("ball sizes agree with breadth-first enumeration") {
  for (int k = 1; k <= 3; ++k) {
    for (int n = 0; n <= (k == 3 ? 4 : 6); ++n) {
      const auto oracle_ball = oracle::free_ball(k, n);
      CHECK(GroupSpec::free(k).ball_size(n) == oracle_ball.size());
      const auto ball = enumerate_ball(GroupSpec::free(k), BaseElement(), n);
      REQUIRE(ball.elements.size() == oracle_ball.size());
      for (const auto& x : ball.elements) CHECK(oracle_ball.count(oracle::letters(x)) == 1);
    }
  }
  for (int d = 1; d <= 3; ++d) {
    for (int n = 0; n <= 6; ++n) {
      CHECK(static_cast<std::int64_t>(GroupSpec::lattice(d).ball_size(n)) == oracle::lattice_ball_count(d, n));
      CHECK(static_cast<std::int64_t>(enumerate_ball(GroupSpec::lattice(d), GroupSpec::lattice(d).identity(), n)
                                          .elements.size()) == oracle::lattice_ball_count(d, n));
    }
  }
}

TEST_CASE("off-centre ball") {
  auto ball = enumerate_ball(F2, w("ab"), 2);
  CHECK(ball.elements.size() == 17);
  for (const auto& x : ball.elements) CHECK(word_distance(w("ab"), x) <= 2);
}

TEST_CASE("cp ratio") {
  CHECK(cp_ratio(w("aaaaa"), w("aaaaab")) == Rational(1, 5));
  CHECK(cp_ratio(w("ab"), w("ab")) == Rational(0));
  CHECK(cp_ratio(v({4, 0, 0}), v({4, 2, 0})) == Rational(2, 4));
  CHECK_THROWS_AS(cp_ratio(BaseElement(), w("a")), InvalidInput);
}

TEST_CASE("group law and metric axioms on random triples") {
  TestRng rng(7);
  for (const auto& g : {F2, Z3}) {
    for (int i = 0; i < 1000; ++i) {
      const auto a = random_base_element(rng, g, 8);
      const auto b = random_base_element(rng, g, 8);
      const auto c = random_base_element(rng, g, 8);
      REQUIRE(multiply(multiply(a, b), c) == multiply(a, multiply(b, c)));
      REQUIRE(multiply(a, inverse(a)) == g.identity());
      REQUIRE(multiply(inverse(a), a) == g.identity());
      REQUIRE(word_distance(a, b) == word_distance(b, a));
      REQUIRE(word_distance(a, c) <= word_distance(a, b) + word_distance(b, c));
      REQUIRE(word_distance(a, b) == oracle::distance(a, b));
      if (g.family == GroupFamily::Free) {
        REQUIRE(oracle::letters(multiply(a, b)) == oracle::concat(oracle::letters(a), oracle::letters(b)));
      }
    }
  }
}

TEST_CASE("boundary action") {
  CHECK(act_on_boundary(w("a"), parse_end(F2, ".b")) == parse_end(F2, "a.b"));
  CHECK(act_on_boundary(w("A"), parse_end(F2, ".a")) == parse_end(F2, ".a"));
  CHECK(act_on_boundary(w("A"), parse_end(F2, "a.b")) == parse_end(F2, ".b"));
  const auto dir = BoundaryPoint::direction({1, 0, 0});
  CHECK(act_on_boundary(v({5, 0, 0}), dir) == dir);
}

TEST_CASE("ends are canonical") {
  // a . (ba)^inf == (ab)^inf
  CHECK(parse_end(F2, "a.ba") == parse_end(F2, ".ab"));
  CHECK(parse_end(F2, ".aa") == parse_end(F2, ".a"));
  CHECK(to_string(parse_end(F2, "ba.a")) == "b.a");
  CHECK(to_string(parse_end(F2, "bA.A")) == "b.A");
  CHECK_THROWS_AS(parse_end(F2, "A.a"), InvalidInput);  // not reduced
  CHECK_THROWS_AS(parse_end(F2, "a."), InvalidInput);
  CHECK_FALSE(parse_end(F2, "ab").exact());
  const auto u = parse_end(F2, "b.aB");
  CHECK(u.letter(0) == 2);
  CHECK(u.letter(1) == 1);
  CHECK(u.letter(2) == -2);
  CHECK(u.letter(3) == 1);
  CHECK(u.truncate(3) == w("baB"));
  CHECK(common_prefix_length(parse_end(F2, "ab.a"), parse_end(F2, "a.b")) == 2);
  CHECK(common_prefix_length(parse_end(F2, ".a"), parse_end(F2, ".b")) == 0);
  CHECK(common_prefix_length(parse_end(F2, ".a"), parse_end(F2, "a.a")) == std::size_t(-1));
}

TEST_CASE("boundary action is a group action") {
  TestRng rng(11);
  for (int i = 0; i < 300; ++i) {
    const auto g = random_base_element(rng, F2, 6);
    const auto h = random_base_element(rng, F2, 6);
    const auto u = random_exact_end(rng, F2, 4, 3);
    REQUIRE(act_on_boundary(multiply(g, h), u) == act_on_boundary(g, act_on_boundary(h, u)));
    REQUIRE(act_on_boundary(BaseElement(), u) == u);
    // The letters of g.u are the reduction of g followed by those of u.
    const auto gu = act_on_boundary(g, u);
    const auto& e = u.as_end();
    const oracle::Word long_u =
        oracle::end_letters(oracle::letters(e.prefix), oracle::letters(e.period), 40);
    const oracle::Word expect = oracle::concat(oracle::letters(g), long_u);
    for (std::size_t j = 0; j < 20; ++j) REQUIRE(gu.letter(j) == expect[j]);
  }
}

TEST_CASE("directions") {
  const auto d = BoundaryPoint::direction({3, 0, 4});
  CHECK(d.as_direction().components[0] == doctest::Approx(0.6));
  CHECK(d.as_direction().components[2] == doctest::Approx(0.8));
  CHECK_THROWS_AS(BoundaryPoint::direction({0, 0, 0}), InvalidInput);
}
