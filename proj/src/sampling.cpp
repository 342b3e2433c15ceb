#include "lampwalk/sampling.hpp"

#include "lampwalk/error.hpp"

namespace lampwalk {

namespace {

int uniform(TestRng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

std::int32_t random_letter(TestRng& rng, int rank) {
  const int g = uniform(rng, 1, rank);
  return uniform(rng, 0, 1) ? g : -g;
}

// Reduced word of exactly `length` letters whose first letter differs from
// the inverse of `after` (0: no constraint).
std::vector<std::int32_t> reduced_letters(TestRng& rng, int rank, int length, std::int32_t after) {
  std::vector<std::int32_t> w;
  std::int32_t prev = after;
  while (static_cast<int>(w.size()) < length) {
    const std::int32_t l = random_letter(rng, rank);
    if (prev != 0 && l == -prev) continue;
    w.push_back(l);
    prev = l;
  }
  return w;
}

}  // namespace

BaseElement random_base_element(TestRng& rng, const GroupSpec& group, int max_length) {
  if (max_length < 0) throw InvalidInput("max length must be >= 0");
  if (group.family == GroupFamily::Free) {
    return BaseElement::word(reduced_letters(rng, group.rank, uniform(rng, 0, max_length), 0));
  }
  std::vector<std::int32_t> v(static_cast<std::size_t>(group.rank));
  for (auto& x : v) x = uniform(rng, -max_length, max_length);
  return BaseElement::vector(std::move(v));
}

Configuration random_configuration(TestRng& rng, const GroupSpec& group, int modulus, int max_sites,
                                   int site_radius) {
  Configuration config(modulus);
  const int sites = uniform(rng, 0, max_sites);
  for (int i = 0; i < sites; ++i) {
    BaseElement y = random_base_element(rng, group, site_radius);
    if (group.family == GroupFamily::Lattice) {
      // Shrink into the l1 ball.
      while (y.norm() > site_radius) y = random_base_element(rng, group, site_radius);
    }
    config.set(y, uniform(rng, 1, modulus - 1));
  }
  return config;
}

LampElement random_lamp_element(TestRng& rng, const GroupSpec& group, int modulus, int max_sites, int radius) {
  Configuration config = random_configuration(rng, group, modulus, max_sites, radius);
  return {std::move(config), random_base_element(rng, group, radius)};
}

BoundaryPoint random_exact_end(TestRng& rng, const GroupSpec& group, int max_prefix, int max_period) {
  if (group.family != GroupFamily::Free) throw VariantMismatch("ends are defined for free groups only");
  if (max_period < 1) throw InvalidInput("period length must be >= 1");
  for (;;) {
    const auto prefix = reduced_letters(rng, group.rank, uniform(rng, 0, max_prefix), 0);
    const auto period =
        reduced_letters(rng, group.rank, uniform(rng, 1, max_period), prefix.empty() ? 0 : prefix.back());
    if (period.size() > 1 && period.front() == -period.back()) continue;  // not cyclically reduced
    return BoundaryPoint::end(BaseElement::word(prefix), BaseElement::word(period));
  }
}

}  // namespace lampwalk
