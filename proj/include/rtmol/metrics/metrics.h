//
// rtmol - Copyright 2026 The rtmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RTMOL_METRICS_METRICS_H_
#define RTMOL_METRICS_METRICS_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rtmol/chem/molecule.h"
#include "rtmol/fingerprints/fingerprints.h"

namespace rtmol {

struct ScoreBreakdown {
  bool valid = false;
  bool exact = false;
  double t_keys = 0.0;
  double t_path = 0.0;
  double t_morgan = 0.0;
  double s_sim = 0.0;
  double total = 0.0;
};

/// Canonical form and default fingerprints of a valid reference molecule,
/// computed once and reused across many candidates.
class ReferenceProfile {
public:
  /// Throws InvalidReference when `smiles` fails validity.
  explicit ReferenceProfile(std::string_view smiles);

  const std::string &canonical() const noexcept { return canonical_; }
  const FingerprintTriple &fingerprints() const noexcept { return fps_; }

  ScoreBreakdown score(std::string_view candidate) const;
  ScoreBreakdown score(const Molecule &candidate) const;

private:
  std::string canonical_;
  FingerprintTriple fps_;
};

/// Validity-gated score in [0, 4]: zero when the candidate is invalid,
/// otherwise three Tanimoto similarities plus one for an exact match.
ScoreBreakdown reconstruction_score(std::string_view x, std::string_view x_prime);

struct RoundTripSample {
  std::string original;
  std::string caption;
  std::string reconstruction;
  ScoreBreakdown score;
  // Ground-truth caption, when the dataset has one; feeds BLEU / METEOR.
  std::optional<std::string> reference_caption;
};

RoundTripSample make_sample(std::string original, std::string caption,
                            std::string reconstruction,
                            std::optional<std::string> reference_caption = {});

/// Fraction of samples whose reconstruction is canonically equal to the
/// original. Throws EmptyCollection.
double round_trip_rate(std::span<const RoundTripSample> samples);

struct EvalReport {
  std::size_t count = 0;
  double exact_pct = 0.0;
  double validity_pct = 0.0;
  // Means over valid reconstructions only.
  double maccs = 0.0;
  double rdk = 0.0;
  double morgan = 0.0;
  double mean_score = 0.0;
  std::optional<double> bleu;
  std::optional<double> meteor;
};

EvalReport aggregate_report(std::span<const RoundTripSample> samples);

/// One "key value" pair per line: count, exact, validity, similarities,
/// text metrics, mean score.
std::string report_text(const EvalReport &report);
/// Single JSON object with the same fields in the same order.
std::string report_json(const EvalReport &report);

std::vector<std::string> tokenize_text(std::string_view text);

/// Corpus BLEU, n = 1..4, uniform weights, brevity penalty, precisions
/// smoothed as (m + 1e-9) / (c + 1e-9). Throws LengthMismatch or
/// EmptyCollection.
double bleu(std::span<const std::string> candidates,
            std::span<const std::string> references);

/// Exact-unigram METEOR without stemming or synonyms. The fragmentation
/// penalty is 0 when all matches form one chunk.
double meteor_lite(std::string_view candidate, std::string_view reference);

constexpr double kBleuEpsilon = 1e-9;

}  // namespace rtmol

#endif  // RTMOL_METRICS_METRICS_H_
