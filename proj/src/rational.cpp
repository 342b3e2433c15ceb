#include "lampwalk/rational.hpp"

#include <charconv>

#include "lampwalk/error.hpp"

namespace lampwalk {

std::string to_string(const Rational& q) {
  if (q.denominator() == 1) return std::to_string(q.numerator());
  return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

namespace {

std::int64_t parse_int(std::string_view text, std::string_view whole) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw InvalidInput("bad rational '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string_view whole = text;
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  const std::size_t slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text, whole));
  const std::int64_t den = parse_int(text.substr(slash + 1), whole);
  if (den == 0) throw InvalidInput("zero denominator in '" + std::string(whole) + "'");
  return Rational(parse_int(text.substr(0, slash), whole), den);
}

}  // namespace lampwalk
