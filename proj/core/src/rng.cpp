#include "prl/rng.hpp"

#include <cmath>
#include <numbers>

namespace prl {
namespace {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

double SplitMix64::normal() {
  const double u1 = uniform01_open_low();
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b,
                          std::uint64_t c) {
  std::uint64_t h = base;
  h = mix64(h + 0x9e3779b97f4a7c15ULL * (a + 1));
  h = mix64(h + 0x9e3779b97f4a7c15ULL * (b + 1));
  h = mix64(h + 0x9e3779b97f4a7c15ULL * (c + 1));
  return h;
}

}  // namespace prl
