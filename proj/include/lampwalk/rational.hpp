#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace lampwalk {

using Rational = boost::rational<std::int64_t>;

/// "p/q", or "p" when q == 1.
std::string to_string(const Rational& q);

/// Accepts "p", "p/q", with optional leading sign. Throws InvalidInput.
Rational parse_rational(std::string_view text);

inline double to_double(const Rational& q) {
  return static_cast<double>(q.numerator()) / static_cast<double>(q.denominator());
}

}  // namespace lampwalk
