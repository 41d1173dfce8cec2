//
// rtmol - Copyright 2026 The rtmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RTMOL_HARNESS_HARNESS_H_
#define RTMOL_HARNESS_HARNESS_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "rtmol/dataset/dataset.h"
#include "rtmol/grpo/grpo.h"
#include "rtmol/metrics/metrics.h"
#include "rtmol/policy/adapters.h"

namespace rtmol {

enum class RewardMode {
  kShaped,     // full validity-gated score in [0, 4]
  kExactOnly,  // 1 for a canonical match, else 0
};

enum class CaptionerGrouping {
  // G sampled captions per molecule, each scored by the mean over m
  // reconstructions from the frozen generator.
  kSampledCaptions,
  // One caption per molecule and n reconstructions as the group.
  kLiteralN,
};

struct HarnessConfig {
  int batch_size = 128;
  int mini_batch = 64;
  int steps_per_phase = 1;     // k
  int rollouts = 32;           // n, generator group size
  int group_size = 32;         // G, captioner group size
  int recon_samples = 1;       // m
  GrpoConfig grpo;
  double learning_rate = 1e-6;
  std::uint64_t seed = 0;
  int max_steps = 100;
  int convergence_window = 10;  // 0 disables early stopping
  double convergence_tol = 1e-3;
  double temperature = 1.0;
  int eval_samples = 1;         // round trips per held-out molecule
  double eval_temperature = 1.0;
  RewardMode reward = RewardMode::kShaped;
  CaptionerGrouping grouping = CaptionerGrouping::kSampledCaptions;
};

/// Throws InvalidArgument for counts below 1 or an invalid GRPO setup.
void validate_config(const HarnessConfig &cfg);

double reward_from(const ScoreBreakdown &s, RewardMode mode);

/// Memoized reconstruction scores keyed by (reference, candidate).
/// Safe for concurrent use.
class ScoreCache {
public:
  ScoreBreakdown score(const std::string &reference,
                       const std::string &candidate);
  std::size_t size() const;

private:
  mutable std::mutex mu_;
  std::unordered_map<std::string, std::shared_ptr<const ReferenceProfile>> refs_;
  std::unordered_map<std::string, ScoreBreakdown> scores_;
};

struct PhaseStats {
  std::string phase;
  double mean_reward = 0;
  double validity_rate = 0;
  double exact_rate = 0;
  double degenerate_fraction = 0;
  std::uint64_t snapshot_id = 0;          // policy the groups were drawn from
  std::uint64_t frozen_snapshot_id = 0;   // generator used to score captions
  std::vector<RolloutGroup> groups;
};

struct StepRecord {
  std::string phase;
  int step = 0;
  double mean_reward = 0;
  double validity_rate = 0;
  double exact_rate = 0;
  double degenerate_fraction = 0;
  std::uint64_t snapshot_id = 0;
  std::uint64_t frozen_snapshot_id = 0;
};

struct TrainingLog {
  std::vector<StepRecord> steps;
  EvalReport initial_eval;
  EvalReport final_eval;
  double initial_round_trip = 0;
  double final_round_trip = 0;
  bool converged = false;
  std::string to_json() const;
};

/// Receives every rollout group a phase produces (for external trainers).
class RolloutSink {
public:
  virtual ~RolloutSink() = default;
  virtual void write(std::span<const RolloutGroup> groups) = 0;
};

/// Appends JSONL records to a file as groups arrive.
class RolloutFileSink: public RolloutSink {
public:
  explicit RolloutFileSink(std::filesystem::path path, bool append = true);
  void write(std::span<const RolloutGroup> groups) override;

private:
  std::filesystem::path path_;
};

/// Samples n reconstructions per pair from its reference caption, scores
/// them, forms one group per pair and, when the adapter trains, applies
/// GRPO over mini-batches before refreshing its snapshot. Adapter errors are
/// rethrown as AdapterFailure naming the pair.
PhaseStats generator_phase(PolicyAdapter &generator,
                           std::span<const PairRecord> batch,
                           const HarnessConfig &cfg, std::uint64_t seed,
                           ScoreCache &cache, RolloutSink *sink = nullptr);

/// Caption groups scored against a frozen generator.
PhaseStats captioner_phase(PolicyAdapter &captioner,
                           PolicyAdapter &frozen_generator,
                           std::span<const PairRecord> batch,
                           const HarnessConfig &cfg, std::uint64_t seed,
                           ScoreCache &cache, RolloutSink *sink = nullptr);

/// samples_per_pair caption -> reconstruction round trips per pair, in
/// input order. `jobs` > 1 spreads pairs over worker threads; adapters must
/// then be safe for concurrent calls. Output does not depend on `jobs`.
std::vector<RoundTripSample>
evaluate_round_trip(PolicyAdapter &captioner, PolicyAdapter &generator,
                    std::span<const PairRecord> pairs, int samples_per_pair,
                    double temperature, std::uint64_t seed, ScoreCache &cache,
                    int jobs = 1);

/// Alternates k generator steps and k captioner steps until max_steps or a
/// reward plateau in both phases. The frozen generator is re-copied before
/// every captioner step.
TrainingLog run_training(PolicyAdapter &captioner, PolicyAdapter &generator,
                         std::span<const PairRecord> train,
                         std::span<const PairRecord> heldout,
                         const HarnessConfig &cfg, RolloutSink *sink = nullptr);

/// One JSON object per completion: group_id, phase, snapshot_id, prompt,
/// reference, completion, reward, advantage, degenerate, plus tokens and
/// log-probabilities when present. Empty input writes an empty file.
void export_rollouts(std::span<const RolloutGroup> groups,
                     const std::filesystem::path &path, bool append = false);
std::string rollouts_to_jsonl(std::span<const RolloutGroup> groups);
/// Consecutive lines with the same group_id form one group. Throws
/// IoFailure, FormatUnknown.
std::vector<RolloutGroup> read_rollouts(const std::filesystem::path &path);

/// Bundled desk-scale configuration: tabular captioner over molecules x
/// captions and a fragment-sequence tabular generator.
struct ToySetup {
  std::vector<PairRecord> pairs;
  std::vector<std::string> captions;
  std::vector<std::string> fragments;
  int fragment_slots = 4;
  HarnessConfig config;
};

/// Reads pairs.tsv, captions.txt, fragments.txt and toy.json from `dir`.
ToySetup load_toy(const std::filesystem::path &dir);

struct ToyPolicies {
  std::shared_ptr<TabularAdapter> captioner;
  std::shared_ptr<TabularAdapter> generator;
};
/// Uniform-initialized policies with reference snapshots set.
ToyPolicies make_toy_policies(const ToySetup &toy);

std::filesystem::path default_data_dir();

}  // namespace rtmol

#endif  // RTMOL_HARNESS_HARNESS_H_
