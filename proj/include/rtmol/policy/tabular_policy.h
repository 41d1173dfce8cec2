//
// rtmol - Copyright 2026 The rtmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RTMOL_POLICY_TABULAR_POLICY_H_
#define RTMOL_POLICY_TABULAR_POLICY_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "rtmol/grpo/grpo.h"

namespace rtmol {

/// Softmax policy over a finite action set. A completion is `length` tokens;
/// token t for prompt p is drawn from its own logit row (p, t), so a
/// length-1 policy is a plain state x action table.
///
/// Three logit copies are held: current (trained), old (the sampling
/// snapshot, identified by snapshot_id) and reference (KL anchor).
class TabularPolicy {
public:
  enum class Slot { kCurrent, kOld, kReference };

  struct Draw {
    std::vector<int> actions;
    std::vector<double> logps;
    std::string text;
  };

  TabularPolicy(std::vector<std::string> prompts,
                std::vector<std::string> actions, int length = 1,
                std::string separator = "");

  int num_prompts() const noexcept { return static_cast<int>(prompts_.size()); }
  int num_actions() const noexcept { return static_cast<int>(actions_.size()); }
  int length() const noexcept { return length_; }
  int num_rows() const noexcept { return num_prompts() * length_; }
  const std::vector<std::string> &prompts() const noexcept { return prompts_; }
  const std::vector<std::string> &actions() const noexcept { return actions_; }

  /// Throws UnknownState.
  int prompt_index(std::string_view prompt) const;
  std::optional<int> find_prompt(std::string_view prompt) const;
  /// Throws UnknownState for an action outside the action set.
  int action_index(std::string_view action) const;
  int row(int prompt, int position) const { return prompt * length_ + position; }

  Eigen::MatrixXd &logits() noexcept { return current_; }
  const Eigen::MatrixXd &logits() const noexcept { return current_; }
  const Eigen::MatrixXd &logits(Slot slot) const noexcept;

  Eigen::VectorXd probabilities(int row, Slot slot = Slot::kCurrent,
                                double temperature = 1.0) const;
  Eigen::VectorXd log_probabilities(int row, Slot slot = Slot::kCurrent,
                                    double temperature = 1.0) const;

  /// n independent completions for `prompt` from the old snapshot. Draw d
  /// depends only on (seed, prompt, d). temperature 0 is greedy.
  std::vector<Draw> sample(int prompt, int n, std::uint64_t seed,
                           double temperature = 1.0,
                           Slot slot = Slot::kOld) const;

  std::string render(std::span<const int> actions) const;

  std::uint64_t snapshot_id() const noexcept { return snapshot_id_; }
  /// old <- current, new snapshot id.
  void refresh_old();
  /// reference <- current.
  void set_reference();

  /// Mean over groups of the per-group objective, evaluated with the
  /// current logits against the stored old and reference snapshots.
  double objective(std::span<const RolloutGroup> groups,
                   const GrpoConfig &cfg) const;
  /// Closed-form gradient of objective() with respect to current logits.
  Eigen::MatrixXd gradient(std::span<const RolloutGroup> groups,
                           const GrpoConfig &cfg) const;
  /// current += lr * gradient. Throws StaleSnapshot when a group was not
  /// sampled from the held old snapshot.
  void grpo_step(std::span<const RolloutGroup> groups, const GrpoConfig &cfg,
                 double lr);

  /// Completion with tokens and log-probs (cur/old/ref) of a draw.
  Completion to_completion(int prompt, const Draw &draw) const;

private:
  struct TokenRef {
    int row;
    int action;
  };
  std::vector<TokenRef> resolve(const RolloutGroup &group,
                                const Completion &c) const;
  void check_fresh(std::span<const RolloutGroup> groups) const;

  std::vector<std::string> prompts_;
  std::vector<std::string> actions_;
  std::unordered_map<std::string, int> prompt_ids_;
  std::unordered_map<std::string, int> action_ids_;
  int length_;
  std::string separator_;
  Eigen::MatrixXd current_;
  Eigen::MatrixXd old_;
  Eigen::MatrixXd reference_;
  std::uint64_t snapshot_id_ = 1;
};

}  // namespace rtmol

#endif  // RTMOL_POLICY_TABULAR_POLICY_H_
