//
// rtmol - Copyright 2026 The rtmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cmath>

#include "rtmol/error.h"
#include "rtmol/grpo/grpo.h"

namespace rtmol {

Advantages group_advantages(std::span<const double> rewards) {
  if (rewards.size() < 2)
    throw Error(ErrorCode::kGroupTooSmall,
                "GroupTooSmall: group of " + std::to_string(rewards.size())
                    + " rewards");
  const double n = static_cast<double>(rewards.size());
  double mean = 0;
  for (double r: rewards)
    mean += r;
  mean /= n;
  double var = 0;
  for (double r: rewards)
    var += (r - mean) * (r - mean);
  var /= n;

  Advantages out;
  out.values.assign(rewards.size(), 0.0);
  const double sd = std::sqrt(var);
  // Tiny spreads are rounding noise around a constant group.
  if (!(sd > 1e-12 * std::max(1.0, std::abs(mean)))) {
    out.degenerate = true;
    return out;
  }
  for (std::size_t i = 0; i < rewards.size(); ++i)
    out.values[i] = (rewards[i] - mean) / sd;
  return out;
}

void fill_advantages(RolloutGroup &group) {
  std::vector<double> rewards;
  rewards.reserve(group.completions.size());
  for (const Completion &c: group.completions)
    rewards.push_back(c.reward);
  Advantages a = group_advantages(rewards);
  group.advantages = std::move(a.values);
  group.degenerate = a.degenerate;
}

double ppo_clip(double ratio, double advantage, double epsilon) {
  double clipped = std::max(std::min(ratio, 1.0 + epsilon), 1.0 - epsilon);
  return std::min(ratio * advantage, clipped * advantage);
}

double kl_estimate(std::span<const double> logp_ref,
                   std::span<const double> logp_cur) {
  if (logp_ref.size() != logp_cur.size())
    throw Error(ErrorCode::kLengthMismatch,
                "LengthMismatch: " + std::to_string(logp_ref.size())
                    + " reference vs " + std::to_string(logp_cur.size())
                    + " current log-probabilities");
  if (logp_ref.empty())
    return 0.0;
  double sum = 0;
  for (std::size_t t = 0; t < logp_ref.size(); ++t) {
    double d = logp_ref[t] - logp_cur[t];
    sum += std::expm1(d) - d;
  }
  return sum / static_cast<double>(logp_ref.size());
}

double group_objective(const RolloutGroup &group, const GrpoConfig &cfg) {
  if (group.advantages.size() != group.completions.size())
    throw Error(ErrorCode::kMissingLogProbs,
                "MissingLogProbs: advantages not filled for group "
                    + group.prompt_id);
  double j = 0;
  for (std::size_t i = 0; i < group.completions.size(); ++i) {
    const Completion &c = group.completions[i];
    const std::size_t len = c.logp_cur.size();
    if (len == 0 || c.logp_old.size() != len || c.logp_ref.size() != len)
      throw Error(ErrorCode::kMissingLogProbs,
                  "MissingLogProbs: completion " + std::to_string(i)
                      + " of group " + group.prompt_id);
    double sum = 0;
    for (std::size_t t = 0; t < len; ++t) {
      double ratio = std::exp(c.logp_cur[t] - c.logp_old[t]);
      double d = c.logp_ref[t] - c.logp_cur[t];
      sum += ppo_clip(ratio, group.advantages[i], cfg.epsilon)
             - cfg.beta * (std::expm1(d) - d);
    }
    j += sum / static_cast<double>(len);
  }
  return j;
}

}  // namespace rtmol
