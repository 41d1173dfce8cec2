//
// rtmol - Copyright 2026 The rtmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "rtmol/chem/smiles.h"
#include "rtmol/chem/validity.h"
#include "rtmol/error.h"
#include "rtmol/metrics/metrics.h"

namespace rtmol {
namespace {

Molecule checked_reference(std::string_view smiles) {
  CheckedMolecule c = parse_and_check(smiles);
  if (!c.report.is_valid) {
    std::string why = c.report.failures.empty()
                          ? std::string("invalid")
                          : c.report.failures.front().reason;
    throw Error(ErrorCode::kInvalidReference,
                "InvalidReference: \"" + std::string(smiles) + "\": " + why);
  }
  return std::move(*c.molecule);
}

}  // namespace

ReferenceProfile::ReferenceProfile(std::string_view smiles) {
  Molecule mol = checked_reference(smiles);
  canonical_ = canonical_smiles(mol);
  fps_ = default_fingerprints(mol);
}

ScoreBreakdown ReferenceProfile::score(const Molecule &candidate) const {
  ScoreBreakdown s;
  if (!check_validity(candidate).is_valid)
    return s;
  s.valid = true;
  s.exact = canonical_smiles(candidate) == canonical_;
  FingerprintTriple fp = default_fingerprints(candidate);
  s.t_keys = tanimoto(fps_.keys, fp.keys);
  s.t_path = tanimoto(fps_.path, fp.path);
  s.t_morgan = tanimoto(fps_.morgan, fp.morgan);
  s.s_sim = s.t_keys + s.t_path + s.t_morgan;
  s.total = s.s_sim + (s.exact ? 1.0 : 0.0);
  return s;
}

ScoreBreakdown ReferenceProfile::score(std::string_view candidate) const {
  CheckedMolecule c = parse_and_check(candidate);
  if (!c.report.is_valid)
    return {};
  return score(*c.molecule);
}

ScoreBreakdown reconstruction_score(std::string_view x,
                                    std::string_view x_prime) {
  return ReferenceProfile(x).score(x_prime);
}

RoundTripSample make_sample(std::string original, std::string caption,
                            std::string reconstruction,
                            std::optional<std::string> reference_caption) {
  RoundTripSample s;
  s.score = reconstruction_score(original, reconstruction);
  s.original = std::move(original);
  s.caption = std::move(caption);
  s.reconstruction = std::move(reconstruction);
  s.reference_caption = std::move(reference_caption);
  return s;
}

double round_trip_rate(std::span<const RoundTripSample> samples) {
  if (samples.empty())
    throw Error(ErrorCode::kEmptyCollection,
                "EmptyCollection: round_trip_rate needs at least one sample");
  std::size_t hits = 0;
  for (const RoundTripSample &s: samples) {
    if (!s.score.valid)
      continue;
    // Re-derive the d = 0 event from the strings rather than trusting the
    // stored flag.
    hits += canonical_smiles(s.original) == canonical_smiles(s.reconstruction);
  }
  return static_cast<double>(hits) / static_cast<double>(samples.size());
}

}  // namespace rtmol
