//
// rtmol - Copyright 2026 The rtmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RTMOL_GRPO_GRPO_H_
#define RTMOL_GRPO_GRPO_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace rtmol {

struct GrpoConfig {
  double epsilon = 0.2;
  double beta = 1e-3;
  int group_size = 32;
};

struct Completion {
  std::string text;
  std::vector<std::string> tokens;
  double reward = 0.0;
  std::vector<double> logp_cur;
  std::vector<double> logp_old;
  std::vector<double> logp_ref;
};

struct RolloutGroup {
  std::string prompt_id;
  std::string phase;
  std::string prompt;
  // Ground-truth target the rewards were computed against, when known.
  std::string reference;
  std::vector<Completion> completions;
  std::vector<double> advantages;
  bool degenerate = false;
  // Snapshot of the sampling policy; used to detect stale groups.
  std::uint64_t snapshot_id = 0;
};

struct Advantages {
  std::vector<double> values;
  bool degenerate = false;
};

/// (r - mean) / population std; all zeros and degenerate when std is 0.
/// Throws GroupTooSmall for fewer than two rewards.
Advantages group_advantages(std::span<const double> rewards);

/// Fills group.advantages and group.degenerate from the completion rewards.
void fill_advantages(RolloutGroup &group);

/// min{r*A, max{min{r, 1+eps}, 1-eps}*A}
double ppo_clip(double ratio, double advantage, double epsilon);

/// Mean over tokens of exp(t) - t - 1 with t = logp_ref - logp_cur.
/// Throws LengthMismatch.
double kl_estimate(std::span<const double> logp_ref,
                   std::span<const double> logp_cur);

/// Sum over completions of the token-averaged clipped term minus beta times
/// the per-token KL estimate. Throws MissingLogProbs when any completion
/// lacks cur/old/ref log-probabilities of a common length.
double group_objective(const RolloutGroup &group, const GrpoConfig &cfg);

}  // namespace rtmol

#endif  // RTMOL_GRPO_GRPO_H_
