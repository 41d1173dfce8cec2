//
// rtmol - Copyright 2026 The rtmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <cmath>

#include "rtmol/error.h"
#include "rtmol/fingerprints/hash.h"
#include "rtmol/policy/tabular_policy.h"

namespace rtmol {
namespace {

constexpr std::uint64_t kSampleDomain = 0x5350;

double uniform_from(std::uint64_t h) {
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

Error unknown_state(std::string_view what, std::string_view name) {
  return Error(ErrorCode::kUnknownState,
               "UnknownState: " + std::string(what) + " \"" + std::string(name)
                   + "\"");
}

}  // namespace

TabularPolicy::TabularPolicy(std::vector<std::string> prompts,
                             std::vector<std::string> actions, int length,
                             std::string separator)
    : prompts_(std::move(prompts)), actions_(std::move(actions)),
      length_(length), separator_(std::move(separator)) {
  if (prompts_.empty() || actions_.empty() || length_ < 1)
    throw Error(ErrorCode::kInvalidArgument,
                "InvalidArgument: tabular policy needs prompts, actions and "
                "length >= 1");
  for (int i = 0; i < num_prompts(); ++i) {
    if (!prompt_ids_.emplace(prompts_[i], i).second)
      throw Error(ErrorCode::kInvalidArgument,
                  "InvalidArgument: duplicate prompt \"" + prompts_[i] + "\"");
  }
  for (int i = 0; i < num_actions(); ++i) {
    if (!action_ids_.emplace(actions_[i], i).second)
      throw Error(ErrorCode::kInvalidArgument,
                  "InvalidArgument: duplicate action \"" + actions_[i] + "\"");
  }
  current_ = Eigen::MatrixXd::Zero(num_rows(), num_actions());
  old_ = current_;
  reference_ = current_;
}

std::optional<int> TabularPolicy::find_prompt(std::string_view prompt) const {
  auto it = prompt_ids_.find(std::string(prompt));
  if (it == prompt_ids_.end())
    return std::nullopt;
  return it->second;
}

int TabularPolicy::prompt_index(std::string_view prompt) const {
  auto p = find_prompt(prompt);
  if (!p)
    throw unknown_state("prompt", prompt);
  return *p;
}

int TabularPolicy::action_index(std::string_view action) const {
  auto it = action_ids_.find(std::string(action));
  if (it == action_ids_.end())
    throw unknown_state("action", action);
  return it->second;
}

const Eigen::MatrixXd &TabularPolicy::logits(Slot slot) const noexcept {
  switch (slot) {
  case Slot::kOld:
    return old_;
  case Slot::kReference:
    return reference_;
  default:
    return current_;
  }
}

Eigen::VectorXd TabularPolicy::log_probabilities(int r, Slot slot,
                                                 double temperature) const {
  Eigen::VectorXd z = logits(slot).row(r).transpose();
  if (temperature <= 0) {
    // Greedy: all mass on the first maximal action.
    Eigen::Index best;
    z.maxCoeff(&best);
    Eigen::VectorXd out = Eigen::VectorXd::Constant(
        z.size(), -std::numeric_limits<double>::infinity());
    out[best] = 0.0;
    return out;
  }
  z /= temperature;
  const double m = z.maxCoeff();
  const double lse = m + std::log((z.array() - m).exp().sum());
  return z.array() - lse;
}

Eigen::VectorXd TabularPolicy::probabilities(int r, Slot slot,
                                             double temperature) const {
  return log_probabilities(r, slot, temperature).array().exp();
}

std::vector<TabularPolicy::Draw>
TabularPolicy::sample(int prompt, int n, std::uint64_t seed,
                      double temperature, Slot slot) const {
  if (prompt < 0 || prompt >= num_prompts())
    throw unknown_state("prompt index", std::to_string(prompt));
  std::vector<Eigen::VectorXd> logp(length_);
  for (int t = 0; t < length_; ++t)
    logp[t] = log_probabilities(row(prompt, t), slot, temperature);

  std::vector<Draw> out(n);
  for (int d = 0; d < n; ++d) {
    Draw &draw = out[d];
    for (int t = 0; t < length_; ++t) {
      double u = uniform_from(hash_words(
          kSampleDomain, { seed, static_cast<std::uint64_t>(prompt),
                           static_cast<std::uint64_t>(d),
                           static_cast<std::uint64_t>(t) }));
      int a = num_actions() - 1;
      double acc = 0;
      for (int k = 0; k < num_actions(); ++k) {
        acc += std::exp(logp[t][k]);
        if (u < acc) {
          a = k;
          break;
        }
      }
      // Never return a zero-probability action from rounding at the tail.
      while (a > 0 && std::isinf(logp[t][a]))
        --a;
      draw.actions.push_back(a);
      draw.logps.push_back(logp[t][a]);
    }
    draw.text = render(draw.actions);
  }
  return out;
}

std::string TabularPolicy::render(std::span<const int> actions) const {
  std::string out;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (i > 0)
      out += separator_;
    out += actions_[actions[i]];
  }
  return out;
}

void TabularPolicy::refresh_old() {
  old_ = current_;
  ++snapshot_id_;
}

void TabularPolicy::set_reference() {
  reference_ = current_;
}

Completion TabularPolicy::to_completion(int prompt, const Draw &draw) const {
  Completion c;
  c.text = draw.text;
  for (int t = 0; t < static_cast<int>(draw.actions.size()); ++t) {
    int r = row(prompt, t);
    int a = draw.actions[t];
    c.tokens.push_back(actions_[a]);
    c.logp_cur.push_back(log_probabilities(r, Slot::kCurrent)[a]);
    c.logp_old.push_back(log_probabilities(r, Slot::kOld)[a]);
    c.logp_ref.push_back(log_probabilities(r, Slot::kReference)[a]);
  }
  return c;
}

std::vector<TabularPolicy::TokenRef>
TabularPolicy::resolve(const RolloutGroup &group, const Completion &c) const {
  const int p = prompt_index(group.prompt);
  if (c.tokens.empty() || static_cast<int>(c.tokens.size()) > length_)
    throw Error(ErrorCode::kMissingLogProbs,
                "MissingLogProbs: completion of group " + group.prompt_id
                    + " has no tabular tokens");
  std::vector<TokenRef> out;
  for (int t = 0; t < static_cast<int>(c.tokens.size()); ++t)
    out.push_back({ row(p, t), action_index(c.tokens[t]) });
  return out;
}

void TabularPolicy::check_fresh(std::span<const RolloutGroup> groups) const {
  for (const RolloutGroup &g: groups) {
    if (g.snapshot_id != snapshot_id_)
      throw Error(ErrorCode::kStaleSnapshot,
                  "StaleSnapshot: group " + g.prompt_id + " sampled from "
                      + std::to_string(g.snapshot_id) + ", policy holds "
                      + std::to_string(snapshot_id_));
    if (g.advantages.size() != g.completions.size())
      throw Error(ErrorCode::kMissingLogProbs,
                  "MissingLogProbs: advantages not filled for group "
                      + g.prompt_id);
  }
}

double TabularPolicy::objective(std::span<const RolloutGroup> groups,
                                const GrpoConfig &cfg) const {
  if (groups.empty())
    return 0.0;
  double total = 0;
  for (const RolloutGroup &g: groups) {
    if (g.advantages.size() != g.completions.size())
      throw Error(ErrorCode::kMissingLogProbs,
                  "MissingLogProbs: advantages not filled for group "
                      + g.prompt_id);
    for (std::size_t i = 0; i < g.completions.size(); ++i) {
      auto toks = resolve(g, g.completions[i]);
      double sum = 0;
      for (const TokenRef &tk: toks) {
        double lc = log_probabilities(tk.row, Slot::kCurrent)[tk.action];
        double lo = log_probabilities(tk.row, Slot::kOld)[tk.action];
        double lr = log_probabilities(tk.row, Slot::kReference)[tk.action];
        double d = lr - lc;
        sum += ppo_clip(std::exp(lc - lo), g.advantages[i], cfg.epsilon)
               - cfg.beta * (std::expm1(d) - d);
      }
      total += sum / static_cast<double>(toks.size());
    }
  }
  return total / static_cast<double>(groups.size());
}

Eigen::MatrixXd TabularPolicy::gradient(std::span<const RolloutGroup> groups,
                                        const GrpoConfig &cfg) const {
  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(num_rows(), num_actions());
  if (groups.empty())
    return grad;
  for (const RolloutGroup &g: groups) {
    for (std::size_t i = 0; i < g.completions.size(); ++i) {
      const double adv = g.advantages.at(i);
      auto toks = resolve(g, g.completions[i]);
      const double scale = 1.0 / static_cast<double>(toks.size());
      for (const TokenRef &tk: toks) {
        Eigen::VectorXd lp = log_probabilities(tk.row, Slot::kCurrent);
        Eigen::VectorXd pi = lp.array().exp();
        double lc = lp[tk.action];
        double lo = log_probabilities(tk.row, Slot::kOld)[tk.action];
        double lr = log_probabilities(tk.row, Slot::kReference)[tk.action];
        double ratio = std::exp(lc - lo);
        double clipped =
            std::max(std::min(ratio, 1.0 + cfg.epsilon), 1.0 - cfg.epsilon);
        // d(clip term)/d(log pi(a)); zero on the clipped branch.
        double dclip = ratio * adv <= clipped * adv ? adv * ratio : 0.0;
        double dkl = cfg.beta * std::expm1(lr - lc);
        double coeff = scale * (dclip + dkl);
        // d log pi(a) / d z_b = 1{a = b} - pi_b
        Eigen::VectorXd dlog = -pi;
        dlog[tk.action] += 1.0;
        grad.row(tk.row) += coeff * dlog.transpose();
      }
    }
  }
  return grad / static_cast<double>(groups.size());
}

void TabularPolicy::grpo_step(std::span<const RolloutGroup> groups,
                              const GrpoConfig &cfg, double lr) {
  check_fresh(groups);
  current_ += lr * gradient(groups, cfg);
}

}  // namespace rtmol
