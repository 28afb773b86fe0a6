#pragma once

#include <cstdint>
#include <random>

namespace rssi {

using Rng = std::mt19937_64;
using Seed = std::uint64_t;

/// splitmix64 finalizer; used to derive independent streams from one seed.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed for sub-stream `stream` of `master`. Streams with different indices
/// are independent, so per-tree or per-trial RNGs do not depend on the order
/// in which workers pick them up.
constexpr Seed derive_seed(Seed master, std::uint64_t stream) noexcept {
  return mix64(mix64(master) ^ mix64(stream + 0x5851f42d4c957f2dULL));
}

}  // namespace rssi
