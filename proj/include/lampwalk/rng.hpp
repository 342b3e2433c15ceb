#pragma once

#include <cstdint>

namespace lampwalk {

/// Stateless counter-based generator: the value at (key, counter) is the
/// SplitMix64 finalizer applied to key + (counter + 1) * golden. Each walk
/// gets its own key derived from (master seed, walk index), so draws depend
/// only on (seed, walk, step) and never on scheduling.
class CounterRng {
 public:
  CounterRng(std::uint64_t master_seed, std::uint64_t stream)
      : key_(mix(mix(master_seed) ^ (stream * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL))) {}

  std::uint64_t operator()(std::uint64_t counter) const noexcept {
    return mix(key_ + (counter + 1) * kGolden);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform(std::uint64_t counter) const noexcept {
    return static_cast<double>((*this)(counter) >> 11) * 0x1.0p-53;
  }

  std::uint64_t key() const noexcept { return key_; }

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  std::uint64_t key_;
};

}  // namespace lampwalk
