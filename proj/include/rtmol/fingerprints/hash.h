//
// rtmol - Copyright 2026 The rtmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RTMOL_FINGERPRINTS_HASH_H_
#define RTMOL_FINGERPRINTS_HASH_H_

#include <cstdint>
#include <initializer_list>
#include <span>

namespace rtmol {

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Order-sensitive 64-bit hash over a word sequence. The constants are part
/// of the on-disk contract: golden files pin feature identifiers, so any
/// change here changes every fingerprint.
///
///   h0 = mix64(0x5254'4d4f'4c46'5031 ^ domain)
///   h  = mix64(h ^ (w + 0x9e3779b97f4a7c15 + (h << 6) + (h >> 2)))
class FeatureHasher {
public:
  explicit FeatureHasher(std::uint64_t domain) noexcept;

  FeatureHasher &add(std::uint64_t word) noexcept;
  FeatureHasher &add(std::span<const std::uint64_t> words) noexcept;

  std::uint64_t value() const noexcept { return h_; }

private:
  std::uint64_t h_;
};

std::uint64_t hash_words(std::uint64_t domain,
                         std::initializer_list<std::uint64_t> words) noexcept;

}  // namespace rtmol

#endif  // RTMOL_FINGERPRINTS_HASH_H_
