#pragma once

#include <cstdint>

namespace prl {

/// SplitMix64 bit stream. Small state, full 64-bit avalanche per step, and
/// hash-derived sub-seeds (see derive_seed) give non-overlapping streams for
/// deterministic parallel trials.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~std::uint64_t{0}; }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1), 53 random bits.
  double uniform01() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform double in (0, 1]; safe as a log() argument.
  double uniform01_open_low() {
    return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller. Consumes exactly two words per draw, so
  /// the stream position is input-independent.
  double normal();

 private:
  std::uint64_t state_;
};

/// Hash-combines a base seed with up to three indices (trial, grid cell, ...)
/// into an independent sub-seed. Distinct index tuples map to distinct hash
/// inputs, so derived streams do not overlap.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0,
                          std::uint64_t c = 0);

}  // namespace prl
