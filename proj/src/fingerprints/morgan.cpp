//
// rtmol - Copyright 2026 The rtmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <utility>
#include <vector>

#include "rtmol/fingerprints/fingerprints.h"
#include "rtmol/fingerprints/hash.h"

namespace rtmol {
namespace {

constexpr std::uint64_t kMorganInit = 0x4d30;
constexpr std::uint64_t kMorganStep = 0x4d31;

using BondSet = std::vector<std::uint64_t>;

void set_bit(BondSet &s, int i) {
  s[i / 64] |= std::uint64_t { 1 } << (i % 64);
}

void or_into(BondSet &dst, const BondSet &src) {
  for (std::size_t w = 0; w < dst.size(); ++w)
    dst[w] |= src[w];
}

std::uint64_t encode_charge(int q) {
  return static_cast<std::uint64_t>(static_cast<std::int64_t>(q));
}

}  // namespace

FeatureSet morgan_features(const Molecule &mol, int radius) {
  const int n = mol.num_atoms();
  radius = std::max(radius, 0);
  std::vector<std::uint64_t> ids(n);
  std::vector<std::uint64_t> out;
  out.reserve(static_cast<std::size_t>(n) * (radius + 1));

  for (int a = 0; a < n; ++a) {
    const Atom &atom = mol.atom(a);
    ids[a] = hash_words(kMorganInit,
                        { static_cast<std::uint64_t>(atom.atomic_number),
                          static_cast<std::uint64_t>(mol.degree(a)),
                          static_cast<std::uint64_t>(atom.total_h()),
                          encode_charge(atom.formal_charge),
                          mol.atom_in_ring(a) ? 1u : 0u });
    out.push_back(ids[a]);
  }

  // Bonds covered by each atom's environment; an identifier is only
  // emitted when its environment grew since the previous radius.
  const std::size_t words = (mol.num_bonds() + 63) / 64;
  std::vector<BondSet> env(n, BondSet(words, 0));

  for (int r = 1; r <= radius; ++r) {
    std::vector<std::uint64_t> next(n);
    std::vector<BondSet> next_env = env;
    for (int a = 0; a < n; ++a) {
      std::vector<std::pair<std::uint64_t, std::uint64_t>> nbs;
      for (const Neighbor &nb: mol.neighbors(a)) {
        nbs.emplace_back(static_cast<std::uint64_t>(mol.bond(nb.bond).order),
                         ids[nb.atom]);
        set_bit(next_env[a], nb.bond);
        or_into(next_env[a], env[nb.atom]);
      }
      std::sort(nbs.begin(), nbs.end());
      FeatureHasher h(kMorganStep);
      h.add(static_cast<std::uint64_t>(r)).add(ids[a]);
      for (auto [order, id]: nbs)
        h.add(order).add(id);
      next[a] = h.value();
      if (next_env[a] != env[a])
        out.push_back(next[a]);
    }
    ids = std::move(next);
    env = std::move(next_env);
  }
  return FeatureSet(FingerprintFamily::kMorgan, radius, std::move(out));
}

}  // namespace rtmol
