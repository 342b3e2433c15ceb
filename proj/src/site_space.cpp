#include "lampwalk/site_space.hpp"

#include <algorithm>
#include <cstdlib>

#include "lampwalk/error.hpp"

namespace lampwalk {

WordTree::WordTree(int rank)
    : rank_(rank), parent_{-1}, letter_{0}, depth_{0},
      children_(2 * static_cast<std::size_t>(rank), -1) {
  if (rank < 1) throw InvalidInput("free group rank must be >= 1");
}

std::size_t WordTree::slot(std::int32_t letter) const {
  const int g = std::abs(letter);
  if (g < 1 || g > rank_) throw InvalidInput("letter " + std::to_string(letter) + " outside F_" + std::to_string(rank_));
  return 2 * static_cast<std::size_t>(g - 1) + (letter < 0 ? 1 : 0);
}

SiteId WordTree::step(SiteId v, std::int32_t letter) {
  const auto uv = static_cast<std::size_t>(v);
  if (v != root() && letter_[uv] == -letter) return parent_[uv];
  const std::size_t idx = uv * 2 * static_cast<std::size_t>(rank_) + slot(letter);
  if (children_[idx] >= 0) return children_[idx];
  const auto id = static_cast<SiteId>(parent_.size());
  parent_.push_back(v);
  letter_.push_back(letter);
  depth_.push_back(depth_[uv] + 1);
  children_.resize(children_.size() + 2 * static_cast<std::size_t>(rank_), -1);
  children_[idx] = id;
  tin_.clear();
  tout_.clear();
  return id;
}

SiteId WordTree::advance(SiteId v, const BaseElement& g) {
  if (!g.is_free()) throw VariantMismatch("word tree needs free-group elements");
  for (std::int32_t letter : g.letters()) v = step(v, letter);
  return v;
}

std::optional<SiteId> WordTree::find(const BaseElement& w) const {
  if (!w.is_free()) throw VariantMismatch("word tree needs free-group elements");
  SiteId v = root();
  for (std::int32_t letter : w.letters()) {
    const std::size_t idx = static_cast<std::size_t>(v) * 2 * static_cast<std::size_t>(rank_) + slot(letter);
    v = children_[idx];
    if (v < 0) return std::nullopt;
  }
  return v;
}

BaseElement WordTree::element(SiteId v) const {
  std::vector<std::int32_t> letters(static_cast<std::size_t>(depth(v)));
  for (auto i = letters.size(); i-- > 0;) {
    letters[i] = letter_[static_cast<std::size_t>(v)];
    v = parent_[static_cast<std::size_t>(v)];
  }
  return BaseElement::word(std::move(letters));
}

SiteId WordTree::ancestor_at_depth(SiteId v, std::int32_t d) const {
  if (d < 0 || d > depth(v)) throw InvalidInput("ancestor depth out of range");
  while (depth(v) > d) v = parent(v);
  return v;
}

SiteId WordTree::lowest_common_ancestor(SiteId a, SiteId b) const {
  while (depth(a) > depth(b)) a = parent(a);
  while (depth(b) > depth(a)) b = parent(b);
  while (a != b) {
    a = parent(a);
    b = parent(b);
  }
  return a;
}

void WordTree::finalize() {
  const std::size_t n = parent_.size();
  tin_.assign(n, 0);
  tout_.assign(n, 0);
  const std::size_t width = 2 * static_cast<std::size_t>(rank_);
  // Iterative DFS: (node, next child slot).
  std::vector<std::pair<SiteId, std::size_t>> stack{{root(), 0}};
  std::int32_t clock = 0;
  tin_[0] = clock++;
  while (!stack.empty()) {
    auto& [v, next] = stack.back();
    if (next == width) {
      tout_[static_cast<std::size_t>(v)] = clock++;
      stack.pop_back();
      continue;
    }
    const SiteId c = children_[static_cast<std::size_t>(v) * width + next++];
    if (c >= 0) {
      tin_[static_cast<std::size_t>(c)] = clock++;
      stack.emplace_back(c, 0);
    }
  }
}

bool WordTree::is_ancestor(SiteId a, SiteId b) const {
  if (!finalized()) throw InvalidInput("word tree must be finalized before ancestor queries");
  const auto ua = static_cast<std::size_t>(a);
  const auto ub = static_cast<std::size_t>(b);
  return tin_[ua] <= tin_[ub] && tout_[ub] <= tout_[ua];
}

std::size_t LatticeIndex::KeyHash::operator()(const std::vector<std::int32_t>& v) const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  for (std::int32_t x : v) {
    h ^= static_cast<std::uint32_t>(x);
    h *= 0xbf58476d1ce4e5b9ULL;
    h ^= h >> 31;
  }
  return static_cast<std::size_t>(h);
}

LatticeIndex::LatticeIndex(int dimension) : dimension_(dimension) {
  if (dimension < 1) throw InvalidInput("lattice dimension must be >= 1");
  intern(std::vector<std::int32_t>(static_cast<std::size_t>(dimension), 0));
}

SiteId LatticeIndex::intern(std::vector<std::int32_t> v) {
  auto it = index_.find(v);
  if (it != index_.end()) return it->second;
  const auto id = static_cast<SiteId>(size());
  coords_.insert(coords_.end(), v.begin(), v.end());
  index_.emplace(std::move(v), id);
  return id;
}

SiteId LatticeIndex::advance(SiteId v, const BaseElement& g) {
  if (g.is_free() || static_cast<int>(g.size()) != dimension_) {
    throw VariantMismatch("lattice index needs Z^" + std::to_string(dimension_) + " elements");
  }
  std::vector<std::int32_t> w(static_cast<std::size_t>(dimension_));
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = coord(v, i) + g.coords()[i];
  return intern(std::move(w));
}

std::optional<SiteId> LatticeIndex::find(const BaseElement& x) const {
  std::vector<std::int32_t> key(x.coords().begin(), x.coords().end());
  auto it = index_.find(key);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

BaseElement LatticeIndex::element(SiteId v) const {
  const auto begin = coords_.begin() + static_cast<std::ptrdiff_t>(v) * dimension_;
  return BaseElement::vector(std::vector<std::int32_t>(begin, begin + dimension_));
}

std::int64_t LatticeIndex::norm(SiteId v) const {
  std::int64_t total = 0;
  for (std::size_t i = 0; i < static_cast<std::size_t>(dimension_); ++i) total += std::abs(coord(v, i));
  return total;
}

SiteSpace::SiteSpace(const GroupSpec& group)
    : group_(group),
      impl_(group.family == GroupFamily::Free ? std::variant<WordTree, LatticeIndex>(WordTree(group.rank))
                                              : std::variant<WordTree, LatticeIndex>(LatticeIndex(group.rank))) {}

std::size_t SiteSpace::size() const {
  return std::visit([](const auto& s) { return s.size(); }, impl_);
}

SiteId SiteSpace::advance(SiteId v, const BaseElement& g) {
  return std::visit([&](auto& s) { return s.advance(v, g); }, impl_);
}

std::optional<SiteId> SiteSpace::find(const BaseElement& x) const {
  return std::visit([&](const auto& s) { return s.find(x); }, impl_);
}

BaseElement SiteSpace::element(SiteId v) const {
  return std::visit([&](const auto& s) { return s.element(v); }, impl_);
}

std::int64_t SiteSpace::norm(SiteId v) const {
  if (is_tree()) return tree().depth(v);
  return lattice().norm(v);
}

void SiteSpace::finalize() {
  if (auto* t = std::get_if<WordTree>(&impl_)) t->finalize();
}

}  // namespace lampwalk
