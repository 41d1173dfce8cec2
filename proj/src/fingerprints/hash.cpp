//
// rtmol - Copyright 2026 The rtmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "rtmol/fingerprints/hash.h"

namespace rtmol {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

FeatureHasher::FeatureHasher(std::uint64_t domain) noexcept
    : h_(mix64(0x52544d4f4c465031ULL ^ domain)) { }

FeatureHasher &FeatureHasher::add(std::uint64_t word) noexcept {
  h_ = mix64(h_ ^ (word + 0x9e3779b97f4a7c15ULL + (h_ << 6) + (h_ >> 2)));
  return *this;
}

FeatureHasher &FeatureHasher::add(std::span<const std::uint64_t> words) noexcept {
  for (std::uint64_t w: words)
    add(w);
  return *this;
}

std::uint64_t hash_words(std::uint64_t domain,
                         std::initializer_list<std::uint64_t> words) noexcept {
  FeatureHasher h(domain);
  for (std::uint64_t w: words)
    h.add(w);
  return h.value();
}

}  // namespace rtmol
