//
// rtmol - Copyright 2026 The rtmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "rtmol/error.h"
#include "rtmol/fingerprints/fingerprints.h"

namespace rtmol {

std::string_view family_name(FingerprintFamily family) noexcept {
  switch (family) {
  case FingerprintFamily::kStructuralKeys:
    return "structural_keys";
  case FingerprintFamily::kPath:
    return "path";
  case FingerprintFamily::kMorgan:
    return "morgan";
  }
  return "unknown";
}

std::optional<FingerprintFamily> parse_family(std::string_view name) noexcept {
  if (name == "structural_keys" || name == "keys" || name == "maccs")
    return FingerprintFamily::kStructuralKeys;
  if (name == "path" || name == "rdk")
    return FingerprintFamily::kPath;
  if (name == "morgan")
    return FingerprintFamily::kMorgan;
  return std::nullopt;
}

FeatureSet::FeatureSet(FingerprintFamily family, int param,
                       std::vector<std::uint64_t> features)
    : family_(family), param_(param), features_(std::move(features)) {
  std::sort(features_.begin(), features_.end());
  features_.erase(std::unique(features_.begin(), features_.end()),
                  features_.end());
}

bool FeatureSet::contains(std::uint64_t id) const {
  return std::binary_search(features_.begin(), features_.end(), id);
}

double tanimoto(const FeatureSet &a, const FeatureSet &b) {
  if (a.family() != b.family() || a.param() != b.param()) {
    throw Error(ErrorCode::kFamilyMismatch,
                "FamilyMismatch: " + std::string(family_name(a.family())) + "/"
                    + std::to_string(a.param()) + " vs "
                    + std::string(family_name(b.family())) + "/"
                    + std::to_string(b.param()));
  }
  if (a.empty() && b.empty())
    return 1.0;
  const auto &x = a.features();
  const auto &y = b.features();
  std::size_t common = 0;
  std::size_t i = 0, j = 0;
  while (i < x.size() && j < y.size()) {
    if (x[i] < y[j]) {
      ++i;
    } else if (y[j] < x[i]) {
      ++j;
    } else {
      ++common;
      ++i;
      ++j;
    }
  }
  std::size_t uni = x.size() + y.size() - common;
  return static_cast<double>(common) / static_cast<double>(uni);
}

std::string dump_feature_set(const FeatureSet &fs) {
  std::string out = "family " + std::string(family_name(fs.family())) + "\n";
  out += "param " + std::to_string(fs.param()) + "\n";
  char buf[24];
  for (std::uint64_t id: fs.features()) {
    std::snprintf(buf, sizeof buf, "%016llx\n",
                  static_cast<unsigned long long>(id));
    out += buf;
  }
  return out;
}

FeatureSet parse_feature_dump(std::string_view text) {
  std::istringstream in { std::string(text) };
  std::string key, value;
  auto bad = [](const std::string &why) {
    return Error(ErrorCode::kFormatUnknown, "FormatUnknown: " + why);
  };
  if (!(in >> key >> value) || key != "family")
    throw bad("missing family line");
  auto family = parse_family(value);
  if (!family)
    throw bad("unknown family " + value);
  int param = 0;
  if (!(in >> key >> param) || key != "param")
    throw bad("missing param line");
  std::vector<std::uint64_t> ids;
  std::string word;
  while (in >> word) {
    try {
      std::size_t used = 0;
      ids.push_back(std::stoull(word, &used, 16));
      if (used != word.size())
        throw bad("bad feature " + word);
    } catch (const std::logic_error &) {
      throw bad("bad feature " + word);
    }
  }
  return FeatureSet(*family, param, std::move(ids));
}

FingerprintTriple default_fingerprints(const Molecule &mol) {
  return { structural_keys(mol), path_features(mol), morgan_features(mol) };
}

}  // namespace rtmol
