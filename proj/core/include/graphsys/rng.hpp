#pragma once

#include <cstdint>

namespace graphsys {

/// SplitMix64 stream (Steele, Lea & Flood 2014; reference constants from
/// Vigna's splitmix64.c). Every random quantity in the library is drawn
/// from one of these, so a (seed, substream index) pair pins a result on
/// any platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via the Box-Muller transform. Draws come in pairs; the
  /// second value of a pair is cached for the next call.
  double normal();

 private:
  std::uint64_t state_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

/// SplitMix64 finalizer (a bijective 64-bit mixer).
std::uint64_t mix64(std::uint64_t x);

/// Seed of the independent substream `index` of `seed`. Substreams of the
/// same parent do not depend on how many siblings are used.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index);

inline Rng substream(std::uint64_t seed, std::uint64_t index) {
  return Rng(substream_seed(seed, index));
}

}  // namespace graphsys
