//
// rtmol - Copyright 2026 The rtmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RTMOL_FINGERPRINTS_FINGERPRINTS_H_
#define RTMOL_FINGERPRINTS_FINGERPRINTS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rtmol/chem/molecule.h"

namespace rtmol {

enum class FingerprintFamily { kStructuralKeys, kPath, kMorgan };

std::string_view family_name(FingerprintFamily family) noexcept;
std::optional<FingerprintFamily> parse_family(std::string_view name) noexcept;

constexpr int kDefaultMorganRadius = 2;
constexpr int kDefaultMaxPathLength = 7;

/// Unfolded set of 64-bit feature identifiers, kept sorted and unique.
/// `param` is the Morgan radius or maximum path length (0 for keys).
class FeatureSet {
public:
  FeatureSet() = default;
  FeatureSet(FingerprintFamily family, int param,
             std::vector<std::uint64_t> features);

  FingerprintFamily family() const noexcept { return family_; }
  int param() const noexcept { return param_; }
  const std::vector<std::uint64_t> &features() const noexcept {
    return features_;
  }
  std::size_t size() const noexcept { return features_.size(); }
  bool empty() const noexcept { return features_.empty(); }
  bool contains(std::uint64_t id) const;

  friend bool operator==(const FeatureSet &, const FeatureSet &) = default;

private:
  FingerprintFamily family_ = FingerprintFamily::kStructuralKeys;
  int param_ = 0;
  std::vector<std::uint64_t> features_;
};

/// |a & b| / |a | b|. Both empty gives 1, one empty gives 0.
/// Throws FamilyMismatch when family or param differ.
double tanimoto(const FeatureSet &a, const FeatureSet &b);

/// Text dump used by golden files:
///   family <name>
///   param <n>
///   <16-digit hex id>   one per line, ascending
std::string dump_feature_set(const FeatureSet &fs);
FeatureSet parse_feature_dump(std::string_view text);

FeatureSet morgan_features(const Molecule &mol,
                           int radius = kDefaultMorganRadius);
FeatureSet path_features(const Molecule &mol,
                         int max_len = kDefaultMaxPathLength);
FeatureSet structural_keys(const Molecule &mol);

struct StructuralKey {
  int id;
  std::string_view name;
  std::string_view description;
};

constexpr int kNumStructuralKeys = 64;
const std::vector<StructuralKey> &structural_key_catalog();

/// Catalog rendered as tab-separated id, name, description with a header row.
std::string structural_key_table();

/// All three families at default parameters.
struct FingerprintTriple {
  FeatureSet keys;
  FeatureSet path;
  FeatureSet morgan;
};
FingerprintTriple default_fingerprints(const Molecule &mol);

}  // namespace rtmol

#endif  // RTMOL_FINGERPRINTS_FINGERPRINTS_H_
