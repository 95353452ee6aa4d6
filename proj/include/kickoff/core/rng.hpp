#pragma once

#include <cstddef>
#include <cstdint>

namespace kickoff {

/// SplitMix64 finalizer. Fixed constants; identical on every platform.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed of episode `index` under `master`. Stable across runs and platforms.
constexpr std::uint64_t episode_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(mix64(master) ^ (index * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL));
}

/// Counter-based deterministic stream (SplitMix64). All draws go through the
/// integer core; floating results are derived with fixed arithmetic so that a
/// seed reproduces the same values everywhere we build.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed = 0) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

  std::uint64_t next_u64() {
    ++counter_;
    return mix64(seed_ + counter_ * 0x9e3779b97f4a7c15ULL);
  }

  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  /// Uniform index in [0, n). Precondition: n > 0.
  std::size_t index(std::size_t n);
  bool bernoulli(double p) { return uniform01() < p; }
  /// Box-Muller; consumes exactly two draws.
  double normal(double mean, double stddev);

  /// Independent child stream keyed by `stream`; does not advance this one.
  RngStream split(std::uint64_t stream) const { return RngStream(mix64(seed_ ^ mix64(stream + 0x5851f42d4c957f2dULL))); }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace kickoff
