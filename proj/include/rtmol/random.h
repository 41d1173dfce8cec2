//
// rtmol - Copyright 2026 The rtmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RTMOL_RANDOM_H_
#define RTMOL_RANDOM_H_

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace rtmol {

// The standard distributions are implementation-defined; these helpers only
// use the engine's raw output so seeded results match across toolchains.

inline double uniform01(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, n), n > 0, by rejection.
inline std::uint64_t uniform_below(std::mt19937_64 &rng, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

template <class T>
void seeded_shuffle(std::vector<T> &v, std::mt19937_64 &rng) {
  for (std::size_t i = v.size(); i > 1; --i)
    std::swap(v[i - 1], v[uniform_below(rng, i)]);
}

}  // namespace rtmol

#endif  // RTMOL_RANDOM_H_
