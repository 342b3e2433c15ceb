#include "lampwalk/boundary_point.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "lampwalk/error.hpp"

namespace lampwalk {

namespace {

std::vector<std::int32_t> primitive_root(const std::vector<std::int32_t>& q) {
  const std::size_t n = q.size();
  for (std::size_t p = 1; p < n; ++p) {
    if (n % p != 0) continue;
    bool periodic = true;
    for (std::size_t i = p; i < n && periodic; ++i) periodic = q[i] == q[i - p];
    if (periodic) return {q.begin(), q.begin() + static_cast<std::ptrdiff_t>(p)};
  }
  return q;
}

End canonical_end(const BaseElement& prefix, const BaseElement& period) {
  if (!prefix.is_free() || !period.is_free()) {
    throw VariantMismatch("ends are defined for free groups only");
  }
  if (period.size() == 0) throw InvalidInput("exact end needs a nonempty period");
  auto p = std::vector<std::int32_t>(prefix.letters().begin(), prefix.letters().end());
  auto q = std::vector<std::int32_t>(period.letters().begin(), period.letters().end());
  if (q.front() == -q.back()) {
    throw InvalidInput("end period " + to_string(period) + " is not cyclically reduced");
  }
  if (!p.empty() && p.back() == -q.front()) {
    throw InvalidInput("end " + to_string(prefix) + "." + to_string(period) +
                       " is not reduced at the prefix/period junction");
  }
  q = primitive_root(q);
  while (!p.empty() && p.back() == q.back()) {
    p.pop_back();
    std::rotate(q.rbegin(), q.rbegin() + 1, q.rend());
  }
  return End{BaseElement::word(std::move(p)), BaseElement::word(std::move(q)), true};
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

BoundaryPoint BoundaryPoint::end(const BaseElement& prefix, const BaseElement& period) {
  return BoundaryPoint(canonical_end(prefix, period));
}

BoundaryPoint BoundaryPoint::estimated_end(const BaseElement& prefix) {
  if (!prefix.is_free()) throw VariantMismatch("ends are defined for free groups only");
  return BoundaryPoint(End{prefix, BaseElement::free_identity(), false});
}

BoundaryPoint BoundaryPoint::direction(std::vector<double> v) {
  const double norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
  if (v.empty() || !(norm > 0.0) || !std::isfinite(norm)) {
    throw InvalidInput("direction needs a finite nonzero vector");
  }
  for (double& x : v) x /= norm;
  return BoundaryPoint(Direction{std::move(v)});
}

const End& BoundaryPoint::as_end() const {
  if (!is_end()) throw VariantMismatch("boundary point is a direction, not an end");
  return std::get<End>(data_);
}

const Direction& BoundaryPoint::as_direction() const {
  if (!is_direction()) throw VariantMismatch("boundary point is an end, not a direction");
  return std::get<Direction>(data_);
}

bool BoundaryPoint::exact() const noexcept {
  return is_direction() || std::get<End>(data_).exact;
}

std::int32_t BoundaryPoint::letter(std::size_t i) const {
  const End& u = as_end();
  if (i < u.prefix.size()) return u.prefix.letters()[i];
  if (!u.exact) throw InvalidInput("estimated end is only known to depth " + std::to_string(u.prefix.size()));
  const auto q = u.period.letters();
  return q[(i - u.prefix.size()) % q.size()];
}

BaseElement BoundaryPoint::truncate(std::size_t n) const {
  std::vector<std::int32_t> letters;
  letters.reserve(n);
  for (std::size_t i = 0; i < n; ++i) letters.push_back(letter(i));
  return BaseElement::word(std::move(letters));
}

BoundaryPoint act_on_boundary(const BaseElement& g, const BoundaryPoint& u) {
  if (u.is_direction()) {
    if (g.is_free()) throw VariantMismatch("free-group element cannot act on a lattice direction");
    if (g.size() != u.as_direction().components.size()) {
      throw VariantMismatch("direction dimension does not match the lattice element");
    }
    return u;
  }
  if (!g.is_free()) throw VariantMismatch("lattice element cannot act on an end");
  const End& end = u.as_end();
  if (!end.exact) return BoundaryPoint::estimated_end(multiply(g, end.prefix));

  // Enough period copies that the cancellation against g never reaches the tail.
  const std::size_t copies = g.size() / end.period.size() + 2;
  BaseElement word = end.prefix;
  for (std::size_t i = 0; i < copies; ++i) word *= end.period;
  return BoundaryPoint::end(multiply(g, word), end.period);
}

std::size_t common_prefix_length(const BoundaryPoint& u, const BoundaryPoint& v) {
  const End& a = u.as_end();
  const End& b = v.as_end();
  if (a.exact && b.exact) {
    if (a == b) return static_cast<std::size_t>(-1);
    const std::size_t bound = std::max(a.prefix.size(), b.prefix.size()) +
                              std::lcm(a.period.size(), b.period.size());
    for (std::size_t i = 0; i <= bound; ++i) {
      if (u.letter(i) != v.letter(i)) return i;
    }
    return static_cast<std::size_t>(-1);  // unreachable for canonical distinct ends
  }
  const std::size_t limit = std::min(a.exact ? SIZE_MAX : a.prefix.size(), b.exact ? SIZE_MAX : b.prefix.size());
  std::size_t i = 0;
  while (i < limit && u.letter(i) == v.letter(i)) ++i;
  return i;
}

BoundaryPoint promote_end(const BoundaryPoint& estimate, const BaseElement& period) {
  return BoundaryPoint::end(estimate.as_end().prefix, period);
}

BoundaryPoint promote_end(const BoundaryPoint& estimate) {
  const BaseElement& prefix = estimate.as_end().prefix;
  const std::int32_t last = prefix.size() == 0 ? 1 : prefix.letters().back();
  return BoundaryPoint::end(prefix, BaseElement::word({last}));
}

BoundaryPoint parse_end(const GroupSpec& group, std::string_view text) {
  if (group.family != GroupFamily::Free) throw VariantMismatch("ends are defined for free groups only");
  const std::size_t dot = text.find('.');
  if (dot == std::string_view::npos) return BoundaryPoint::estimated_end(parse_element(group, text));
  const BaseElement prefix = parse_element(group, text.substr(0, dot));
  const std::string_view period_text = text.substr(dot + 1);
  if (period_text.empty() || period_text == "e") throw InvalidInput("end '" + std::string(text) + "' has an empty period");
  return BoundaryPoint::end(prefix, parse_element(group, period_text));
}

std::string to_string(const BoundaryPoint& u) {
  if (u.is_direction()) {
    std::string s = "dir(";
    const auto& c = u.as_direction().components;
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (i) s.push_back(',');
      s += format_double(c[i]);
    }
    return s + ")";
  }
  const End& e = u.as_end();
  const std::string prefix = e.prefix.size() == 0 ? "" : to_string(e.prefix);
  if (!e.exact) return prefix.empty() ? "e" : prefix;
  return prefix + "." + to_string(e.period);
}

}  // namespace lampwalk
