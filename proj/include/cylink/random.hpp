#pragma once

#include <cstdint>

#include "cylink/algebra/weights.hpp"

namespace cylink {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// Seed for work on one weight tuple, independent of scheduling order.
inline std::uint64_t task_seed(std::uint64_t seed, const Weights& w) {
  std::uint64_t h = 0x243f6a8885a308d3ull;
  for (long x : w) h = splitmix64(h ^ std::uint64_t(x));
  return splitmix64(seed ^ h);
}

}  // namespace cylink
