//
// rtmol - Copyright 2026 The rtmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <vector>

#include "rtmol/fingerprints/fingerprints.h"
#include "rtmol/fingerprints/hash.h"

namespace rtmol {
namespace {

constexpr std::uint64_t kPathDomain = 0x5031;

std::uint64_t atom_token(const Atom &atom) {
  return static_cast<std::uint64_t>(atom.atomic_number) * 2
         + (atom.is_aromatic ? 1 : 0);
}

class PathWalker {
public:
  PathWalker(const Molecule &mol, int max_len, std::vector<std::uint64_t> &out)
      : mol_(mol), max_len_(max_len), out_(out), on_path_(mol.num_atoms()) { }

  void from(int start) {
    tokens_ = { atom_token(mol_.atom(start)) };
    on_path_[start] = true;
    extend(start, 0);
    on_path_[start] = false;
  }

private:
  void extend(int u, int len) {
    if (len > 0)
      emit();
    if (len == max_len_)
      return;
    for (const Neighbor &nb: mol_.neighbors(u)) {
      if (on_path_[nb.atom])
        continue;
      on_path_[nb.atom] = true;
      tokens_.push_back(static_cast<std::uint64_t>(mol_.bond(nb.bond).order));
      tokens_.push_back(atom_token(mol_.atom(nb.atom)));
      extend(nb.atom, len + 1);
      tokens_.resize(tokens_.size() - 2);
      on_path_[nb.atom] = false;
    }
  }

  void emit() {
    std::vector<std::uint64_t> rev(tokens_.rbegin(), tokens_.rend());
    const auto &key = std::min(tokens_, rev);
    out_.push_back(FeatureHasher(kPathDomain).add(key).value());
  }

  const Molecule &mol_;
  int max_len_;
  std::vector<std::uint64_t> &out_;
  std::vector<bool> on_path_;
  std::vector<std::uint64_t> tokens_;
};

}  // namespace

FeatureSet path_features(const Molecule &mol, int max_len) {
  max_len = std::max(max_len, 1);
  std::vector<std::uint64_t> out;
  PathWalker walker(mol, max_len, out);
  for (int a = 0; a < mol.num_atoms(); ++a)
    walker.from(a);
  return FeatureSet(FingerprintFamily::kPath, max_len, std::move(out));
}

}  // namespace rtmol
