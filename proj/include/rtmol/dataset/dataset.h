//
// rtmol - Copyright 2026 The rtmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RTMOL_DATASET_DATASET_H_
#define RTMOL_DATASET_DATASET_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rtmol/metrics/metrics.h"

namespace rtmol {

class PolicyAdapter;

struct PairRecord {
  std::optional<std::string> id;
  std::string smiles;
  std::string caption;
  std::string provenance;

  friend bool operator==(const PairRecord &, const PairRecord &) = default;
};

enum class PairFormat { kJsonl, kTsv, kSmi };

/// From the file extension: .jsonl/.json, .tsv/.txt, .smi.
/// Throws FormatUnknown.
PairFormat format_for(const std::filesystem::path &path);

struct SidecarEntry {
  std::size_t line = 0;  // 1-based
  std::string reason;
  std::string text;
};

struct LoadResult {
  std::vector<PairRecord> records;
  std::vector<SidecarEntry> rejected;
};

/// JSONL records carry smiles, caption and optional id / provenance.
/// TSV rows are smiles, caption[, id] with backslash escapes (\t \n \\) and
/// an optional "smiles<TAB>caption" header. .smi lines are smiles[ name].
/// Malformed lines go to `rejected`. Throws IoFailure, FormatUnknown.
LoadResult load_pairs(const std::filesystem::path &path);
LoadResult load_pairs(const std::filesystem::path &path, PairFormat format);

/// Write-then-rename. Throws IoFailure.
void write_pairs(const std::filesystem::path &path,
                 std::span<const PairRecord> records);
void write_pairs(const std::filesystem::path &path,
                 std::span<const PairRecord> records, PairFormat format);
/// line<TAB>reason<TAB>text
void write_sidecar(const std::filesystem::path &path,
                   std::span<const SidecarEntry> entries);

/// Atomically replaces `path` with `content`. Throws IoFailure.
void write_file_atomic(const std::filesystem::path &path,
                       std::string_view content);

struct SplitSpec {
  std::array<double, 3> ratios { 0.8, 0.1, 0.1 };
  std::uint64_t seed = 0;
};

struct Splits {
  std::vector<PairRecord> train;
  std::vector<PairRecord> valid;
  std::vector<PairRecord> test;
};

/// Seeded shuffle; valid and test get floor(N * r) records, train the rest.
/// Throws EmptyInput, InvalidArgument.
Splits split(std::span<const PairRecord> pairs, const SplitSpec &spec);

enum class OnParseError { kKeep, kDrop };

struct DedupeResult {
  std::vector<PairRecord> kept;
  std::size_t removed = 0;
  double overlap_fraction = 0.0;
  std::vector<SidecarEntry> errors;
};

/// Drops target records whose canonical SMILES appears in the reference.
/// Records that fail to canonicalize are reported in `errors` (line = index
/// + 1) and kept or dropped per `on_error`.
DedupeResult dedupe_overlap(std::span<const PairRecord> target,
                            std::span<const PairRecord> reference,
                            OnParseError on_error = OnParseError::kKeep);

struct PairScore {
  std::size_t index = 0;
  std::string id;
  double mean_total = 0.0;
  double mean_keys = 0.0;
  double mean_path = 0.0;
  double mean_morgan = 0.0;
  double exact_rate = 0.0;
  int valid_samples = 0;
  int samples = 0;
  bool kept = false;
  std::string reason;
};

struct FilterResult {
  std::vector<PairRecord> kept;
  std::vector<PairRecord> rejected;
  std::vector<PairScore> scores;
};

/// Scores each pair by the mean reconstruction score of m generations from
/// its caption. Kept iff the mean reaches tau and at least one
/// reconstruction is valid; adapter or reference failures are rejected
/// with the error as reason.
FilterResult diagnostic_filter(std::span<const PairRecord> pairs,
                               PolicyAdapter &generator, double tau, int m,
                               std::uint64_t seed = 0,
                               double temperature = 1.0);

/// Header plus one tab-separated row per pair.
std::string score_table(std::span<const PairScore> scores);

}  // namespace rtmol

#endif  // RTMOL_DATASET_DATASET_H_
