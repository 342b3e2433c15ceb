#include "lampwalk/base_group.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>

#include "lampwalk/error.hpp"

namespace lampwalk {

namespace {

void require_same_variant(const BaseElement& a, const BaseElement& b) {
  if (a.family() != b.family()) {
    throw VariantMismatch("cannot combine a free word with a lattice vector");
  }
  if (!a.is_free() && a.size() != b.size()) {
    throw VariantMismatch("lattice dimensions differ: " + std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()));
  }
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > UINT64_MAX / a) return UINT64_MAX;
  return a * b;
}

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  return (b > UINT64_MAX - a) ? UINT64_MAX : a + b;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = saturating_mul(r, n - k + i);
    if (r == UINT64_MAX) return r;
    r /= i;
  }
  return r;
}

void extend_free_ball(int k, int n, std::vector<std::int32_t>& word,
                      std::vector<std::vector<std::int32_t>>& out) {
  out.push_back(word);
  if (static_cast<int>(word.size()) == n) return;
  for (int g = 1; g <= k; ++g) {
    for (int sign : {1, -1}) {
      const std::int32_t letter = sign * g;
      if (!word.empty() && word.back() == -letter) continue;
      word.push_back(letter);
      extend_free_ball(k, n, word, out);
      word.pop_back();
    }
  }
}

void extend_lattice_ball(std::size_t axis, int budget, std::vector<std::int32_t>& v,
                         std::vector<std::vector<std::int32_t>>& out) {
  if (axis == v.size()) {
    out.push_back(v);
    return;
  }
  for (int x = -budget; x <= budget; ++x) {
    v[axis] = x;
    extend_lattice_ball(axis + 1, budget - std::abs(x), v, out);
  }
  v[axis] = 0;
}

}  // namespace

std::string_view to_string(GroupFamily family) {
  return family == GroupFamily::Free ? "free" : "lattice";
}

BaseElement BaseElement::word(std::vector<std::int32_t> letters) {
  std::vector<std::int32_t> reduced;
  reduced.reserve(letters.size());
  for (std::int32_t letter : letters) {
    if (letter == 0) throw InvalidInput("free-group letter 0 is not a generator");
    if (!reduced.empty() && reduced.back() == -letter) {
      reduced.pop_back();
    } else {
      reduced.push_back(letter);
    }
  }
  return BaseElement(GroupFamily::Free, std::move(reduced));
}

BaseElement BaseElement::vector(std::vector<std::int32_t> coords) {
  if (coords.empty()) throw InvalidInput("lattice vectors need dimension >= 1");
  return BaseElement(GroupFamily::Lattice, std::move(coords));
}

BaseElement BaseElement::zero(std::size_t dimension) {
  return vector(std::vector<std::int32_t>(dimension, 0));
}

std::int64_t BaseElement::norm() const noexcept {
  if (is_free()) return static_cast<std::int64_t>(data_.size());
  std::int64_t total = 0;
  for (std::int32_t x : data_) total += std::abs(static_cast<std::int64_t>(x));
  return total;
}

bool BaseElement::is_identity() const noexcept {
  if (is_free()) return data_.empty();
  return std::all_of(data_.begin(), data_.end(), [](std::int32_t x) { return x == 0; });
}

BaseElement BaseElement::inverse() const {
  std::vector<std::int32_t> out(data_.size());
  if (is_free()) {
    std::transform(data_.rbegin(), data_.rend(), out.begin(), [](std::int32_t l) { return -l; });
  } else {
    std::transform(data_.begin(), data_.end(), out.begin(), [](std::int32_t x) { return -x; });
  }
  return BaseElement(family_, std::move(out));
}

BaseElement& BaseElement::operator*=(const BaseElement& rhs) {
  require_same_variant(*this, rhs);
  if (is_free()) {
    std::size_t i = 0;
    while (i < rhs.data_.size() && !data_.empty() && data_.back() == -rhs.data_[i]) {
      data_.pop_back();
      ++i;
    }
    data_.insert(data_.end(), rhs.data_.begin() + static_cast<std::ptrdiff_t>(i), rhs.data_.end());
  } else {
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
  }
  return *this;
}

std::strong_ordering operator<=>(const BaseElement& a, const BaseElement& b) {
  if (auto c = a.family_ <=> b.family_; c != 0) return c;
  if (a.is_free()) {
    if (auto c = a.data_.size() <=> b.data_.size(); c != 0) return c;
  }
  return a.data_ <=> b.data_;
}

std::size_t BaseElement::hash() const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ static_cast<std::uint64_t>(family_);
  for (std::int32_t x : data_) {
    h ^= static_cast<std::uint32_t>(x);
    h *= 0x100000001b3ULL;
    h ^= h >> 29;
  }
  return static_cast<std::size_t>(h);
}

BaseElement GroupSpec::identity() const {
  return family == GroupFamily::Free ? BaseElement::free_identity()
                                     : BaseElement::zero(static_cast<std::size_t>(rank));
}

std::vector<BaseElement> GroupSpec::generators() const {
  std::vector<BaseElement> gens;
  for (int i = 1; i <= rank; ++i) {
    if (family == GroupFamily::Free) {
      gens.push_back(BaseElement::word({i}));
      gens.push_back(BaseElement::word({-i}));
    } else {
      std::vector<std::int32_t> v(static_cast<std::size_t>(rank), 0);
      v[static_cast<std::size_t>(i - 1)] = 1;
      gens.push_back(BaseElement::vector(v));
      v[static_cast<std::size_t>(i - 1)] = -1;
      gens.push_back(BaseElement::vector(v));
    }
  }
  return gens;
}

void GroupSpec::validate(const BaseElement& x) const {
  if (x.family() != family) {
    throw VariantMismatch("element " + to_string(x) + " does not belong to " + lampwalk::to_string(*this));
  }
  if (family == GroupFamily::Free) {
    for (std::int32_t l : x.letters()) {
      if (std::abs(l) > rank) {
        throw InvalidInput("letter " + std::to_string(l) + " outside F_" + std::to_string(rank));
      }
    }
  } else if (static_cast<int>(x.size()) != rank) {
    throw VariantMismatch("vector " + to_string(x) + " is not in Z^" + std::to_string(rank));
  }
}

std::uint64_t GroupSpec::ball_size(int n) const {
  if (n < 0) return 0;
  const auto un = static_cast<std::uint64_t>(n);
  if (family == GroupFamily::Free) {
    if (rank == 1) return 2 * un + 1;
    // 1 + 2k((2k-1)^n - 1)/(2k-2)
    const std::uint64_t q = 2 * static_cast<std::uint64_t>(rank) - 1;
    std::uint64_t power = 1;
    for (int i = 0; i < n; ++i) power = saturating_mul(power, q);
    if (power == UINT64_MAX) return UINT64_MAX;
    return 1 + saturating_mul(2 * static_cast<std::uint64_t>(rank), (power - 1) / (q - 1));
  }
  // l1 ball: sum_i 2^i C(d,i) C(n,i)
  std::uint64_t total = 0;
  const auto d = static_cast<std::uint64_t>(rank);
  for (std::uint64_t i = 0; i <= std::min(d, un); ++i) {
    std::uint64_t term = saturating_mul(binomial(d, i), binomial(un, i));
    for (std::uint64_t j = 0; j < i; ++j) term = saturating_mul(term, 2);
    total = saturating_add(total, term);
  }
  return total;
}

int GroupSpec::default_ball_cap() const {
  constexpr std::uint64_t kMaxElements = 10'000'000;
  int n = 0;
  while (n < (1 << 20) && ball_size(n + 1) <= kMaxElements) ++n;
  return n;
}

std::string to_string(const GroupSpec& group) {
  return (group.family == GroupFamily::Free ? "F_" : "Z^") + std::to_string(group.rank);
}

BaseElement multiply(const BaseElement& a, const BaseElement& b) {
  BaseElement result = a;
  result *= b;
  return result;
}

BaseElement inverse(const BaseElement& a) { return a.inverse(); }

std::int64_t word_distance(const BaseElement& a, const BaseElement& b) {
  require_same_variant(a, b);
  if (a.is_free()) {
    const std::size_t lcp = common_prefix_length(a.letters(), b.letters());
    return static_cast<std::int64_t>(a.size() + b.size() - 2 * lcp);
  }
  std::int64_t total = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    total += std::abs(static_cast<std::int64_t>(a.coords()[i]) - b.coords()[i]);
  }
  return total;
}

Rational cp_ratio(const BaseElement& x, const BaseElement& y) {
  require_same_variant(x, y);
  if (x.is_identity()) throw InvalidInput("cp_ratio: d(x, e) = 0 for x = e");
  return Rational(word_distance(x, y), x.norm());
}

std::size_t common_prefix_length(std::span<const std::int32_t> a, std::span<const std::int32_t> b) {
  const std::size_t n = std::min(a.size(), b.size());
  std::size_t i = 0;
  while (i < n && a[i] == b[i]) ++i;
  return i;
}

Ball enumerate_ball(const GroupSpec& group, const BaseElement& center, int n, int cap) {
  group.validate(center);
  if (n < 0) throw InvalidInput("ball radius must be nonnegative");
  const int limit = cap < 0 ? group.default_ball_cap() : cap;
  if (n > limit) throw CapExceeded("ball radius", limit, n);

  std::vector<std::vector<std::int32_t>> raw;
  raw.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(group.ball_size(n), 1u << 24)));
  if (group.family == GroupFamily::Free) {
    std::vector<std::int32_t> word;
    extend_free_ball(group.rank, n, word, raw);
  } else {
    std::vector<std::int32_t> v(static_cast<std::size_t>(group.rank), 0);
    extend_lattice_ball(0, n, v, raw);
  }

  Ball ball{center, n, {}};
  ball.elements.reserve(raw.size());
  for (auto& offset : raw) {
    BaseElement g = group.family == GroupFamily::Free ? BaseElement::word(std::move(offset))
                                                      : BaseElement::vector(std::move(offset));
    ball.elements.push_back(multiply(center, g));
  }
  std::sort(ball.elements.begin(), ball.elements.end());
  return ball;
}

char letter_char(std::int32_t letter) {
  const int g = std::abs(letter);
  if (g < 1 || g > 26) throw InvalidInput("no letter for generator " + std::to_string(letter));
  return static_cast<char>((letter > 0 ? 'a' : 'A') + g - 1);
}

std::int32_t letter_from_char(char ch) {
  if (ch >= 'a' && ch <= 'z') return ch - 'a' + 1;
  if (ch >= 'A' && ch <= 'Z') return -(ch - 'A' + 1);
  throw InvalidInput(std::string("not a generator letter: '") + ch + "'");
}

std::string to_string(const BaseElement& x) {
  if (x.is_free()) {
    if (x.size() == 0) return "e";
    std::string s;
    s.reserve(x.size());
    for (std::int32_t l : x.letters()) s.push_back(letter_char(l));
    return s;
  }
  std::string s;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) s.push_back(',');
    s += std::to_string(x.coords()[i]);
  }
  return s;
}

BaseElement parse_element(const GroupSpec& group, std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);

  if (group.family == GroupFamily::Free) {
    if (text.empty() || text == "e") return BaseElement::free_identity();
    std::vector<std::int32_t> letters;
    for (char ch : text) letters.push_back(letter_from_char(ch));
    BaseElement x = BaseElement::word(std::move(letters));
    group.validate(x);
    return x;
  }

  if (!text.empty() && text.front() == '(' && text.back() == ')') {
    text.remove_prefix(1);
    text.remove_suffix(1);
  }
  if (text == "e" || text.empty()) return group.identity();
  std::vector<std::int32_t> coords;
  while (true) {
    const std::size_t comma = text.find(',');
    std::string_view field = text.substr(0, comma);
    while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
    while (!field.empty() && field.back() == ' ') field.remove_suffix(1);
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    std::int32_t value = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
      throw InvalidInput("bad lattice coordinate '" + std::string(field) + "'");
    }
    coords.push_back(value);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  BaseElement x = BaseElement::vector(std::move(coords));
  group.validate(x);
  return x;
}

}  // namespace lampwalk
