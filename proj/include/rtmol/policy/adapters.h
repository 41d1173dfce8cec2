//
// rtmol - Copyright 2026 The rtmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RTMOL_POLICY_ADAPTERS_H_
#define RTMOL_POLICY_ADAPTERS_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <regex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rtmol/grpo/grpo.h"
#include "rtmol/policy/tabular_policy.h"

namespace rtmol {

struct Generation {
  std::string text;
  // Present only for adapters that expose token-level probabilities.
  std::vector<std::string> tokens;
  std::vector<double> token_logps;
};

/// One contract for both roles: caption() is p(y|x), generate() is q(x'|y).
/// Implementations return exactly `n` items or throw.
class PolicyAdapter {
public:
  virtual ~PolicyAdapter() = default;

  virtual std::string name() const = 0;

  virtual std::vector<Generation> caption(std::string_view smiles, int n,
                                          double temperature,
                                          std::uint64_t seed);
  virtual std::vector<Generation> generate(std::string_view caption, int n,
                                           double temperature,
                                           std::uint64_t seed);

  virtual bool supports_training() const { return false; }
  /// Identifier of the weights samples are currently drawn from.
  virtual std::uint64_t snapshot_id() const { return 0; }
  /// Converts a sampled generation into a completion carrying current, old
  /// and reference log-probabilities. Default copies text and tokens only.
  virtual Completion completion_for(std::string_view prompt,
                                    const Generation &g) const;
  /// One GRPO update; throws AdapterFailure unless training is supported.
  virtual void grpo_update(std::span<const RolloutGroup> groups,
                           const GrpoConfig &cfg, double lr);
  /// Advances the sampling snapshot to the current weights.
  virtual void refresh_snapshot() { }
  /// Independent copy whose sampling weights no longer follow this adapter.
  virtual std::shared_ptr<PolicyAdapter> frozen_copy() const = 0;
};

enum class PolicyRole { kCaptioner, kGenerator };

/// Trainable adapter around a TabularPolicy in one role. Captioner prompts
/// may also be matched by canonical SMILES.
class TabularAdapter: public PolicyAdapter {
public:
  TabularAdapter(std::shared_ptr<TabularPolicy> policy, PolicyRole role,
                 std::string label = "tabular");

  std::string name() const override { return label_; }
  std::vector<Generation> caption(std::string_view smiles, int n,
                                  double temperature,
                                  std::uint64_t seed) override;
  std::vector<Generation> generate(std::string_view caption, int n,
                                   double temperature,
                                   std::uint64_t seed) override;
  bool supports_training() const override { return true; }
  std::uint64_t snapshot_id() const override { return policy_->snapshot_id(); }
  Completion completion_for(std::string_view prompt,
                            const Generation &g) const override;
  void grpo_update(std::span<const RolloutGroup> groups, const GrpoConfig &cfg,
                   double lr) override;
  void refresh_snapshot() override { policy_->refresh_old(); }
  std::shared_ptr<PolicyAdapter> frozen_copy() const override;

  /// Prompt name the policy uses for `input` (exact or canonical match).
  std::string resolve_prompt(std::string_view input) const;

  TabularPolicy &policy() noexcept { return *policy_; }
  const TabularPolicy &policy() const noexcept { return *policy_; }

private:
  std::vector<Generation> draw(std::string_view prompt, int n,
                               double temperature, std::uint64_t seed) const;

  std::shared_ptr<TabularPolicy> policy_;
  PolicyRole role_;
  std::string label_;
  std::unordered_map<std::string, std::string> canonical_prompts_;
};

/// Perfect round trip: caption() returns the canonical SMILES, generate()
/// extracts a SMILES from the caption (or returns the caption unchanged).
class EchoAdapter: public PolicyAdapter {
public:
  std::string name() const override { return "echo"; }
  std::vector<Generation> caption(std::string_view smiles, int n,
                                  double temperature,
                                  std::uint64_t seed) override;
  std::vector<Generation> generate(std::string_view caption, int n,
                                   double temperature,
                                   std::uint64_t seed) override;
  std::shared_ptr<PolicyAdapter> frozen_copy() const override;
};

/// Test double driven by callbacks; unset roles throw AdapterFailure.
class ScriptedAdapter: public PolicyAdapter {
public:
  using Script = std::function<std::vector<std::string>(
      std::string_view input, int n, std::uint64_t seed)>;

  ScriptedAdapter(Script caption_script, Script generate_script,
                  std::string label = "scripted");

  /// Replays recorded outputs keyed by input; missing keys throw
  /// AdapterFailure. Outputs cycle when n exceeds the recording.
  static std::shared_ptr<ScriptedAdapter>
  playback(std::unordered_map<std::string, std::vector<std::string>> captions,
           std::unordered_map<std::string, std::vector<std::string>> smiles);

  std::string name() const override { return label_; }
  std::vector<Generation> caption(std::string_view smiles, int n,
                                  double temperature,
                                  std::uint64_t seed) override;
  std::vector<Generation> generate(std::string_view caption, int n,
                                   double temperature,
                                   std::uint64_t seed) override;
  std::shared_ptr<PolicyAdapter> frozen_copy() const override;

private:
  Script caption_script_;
  Script generate_script_;
  std::string label_;
};

/// Picks the SMILES in free text: the longest whitespace-delimited token
/// (quotes and backticks stripped) that is a valid SMILES, else the whole
/// trimmed text when valid. With `pattern`, the first match (group 1 when
/// present) is returned instead, valid or not.
std::optional<std::string>
extract_smiles(std::string_view text,
               const std::optional<std::regex> &pattern = std::nullopt);

}  // namespace rtmol

#endif  // RTMOL_POLICY_ADAPTERS_H_
