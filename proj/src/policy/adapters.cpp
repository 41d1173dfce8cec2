//
// rtmol - Copyright 2026 The rtmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "rtmol/chem/smiles.h"
#include "rtmol/chem/validity.h"
#include "rtmol/error.h"
#include "rtmol/policy/adapters.h"

namespace rtmol {
namespace {

Error unsupported(const std::string &adapter, const char *what) {
  return Error(ErrorCode::kAdapterFailure,
               "AdapterFailure: " + adapter + " does not support " + what);
}

std::vector<Generation> as_generations(std::vector<std::string> texts) {
  std::vector<Generation> out;
  out.reserve(texts.size());
  for (std::string &t: texts)
    out.push_back({ std::move(t), {}, {} });
  return out;
}

void check_count(const std::string &adapter, std::size_t got, int n) {
  if (got != static_cast<std::size_t>(n))
    throw Error(ErrorCode::kAdapterFailure,
                "AdapterFailure: " + adapter + " returned " + std::to_string(got)
                    + " of " + std::to_string(n) + " samples");
}

}  // namespace

std::vector<Generation> PolicyAdapter::caption(std::string_view, int, double,
                                               std::uint64_t) {
  throw unsupported(name(), "the captioner role");
}

std::vector<Generation> PolicyAdapter::generate(std::string_view, int, double,
                                                std::uint64_t) {
  throw unsupported(name(), "the generator role");
}

Completion PolicyAdapter::completion_for(std::string_view,
                                         const Generation &g) const {
  Completion c;
  c.text = g.text;
  c.tokens = g.tokens;
  c.logp_old = g.token_logps;
  return c;
}

void PolicyAdapter::grpo_update(std::span<const RolloutGroup>,
                                const GrpoConfig &, double) {
  throw unsupported(name(), "in-process training");
}

// --- tabular ---------------------------------------------------------------

TabularAdapter::TabularAdapter(std::shared_ptr<TabularPolicy> policy,
                               PolicyRole role, std::string label)
    : policy_(std::move(policy)), role_(role), label_(std::move(label)) {
  if (role_ == PolicyRole::kCaptioner) {
    for (const std::string &p: policy_->prompts()) {
      CheckedMolecule c = parse_and_check(p);
      if (c.molecule)
        canonical_prompts_.emplace(canonical_smiles(*c.molecule), p);
    }
  }
}

std::string TabularAdapter::resolve_prompt(std::string_view input) const {
  if (policy_->find_prompt(input))
    return std::string(input);
  if (role_ == PolicyRole::kCaptioner) {
    CheckedMolecule c = parse_and_check(input);
    if (c.molecule) {
      auto it = canonical_prompts_.find(canonical_smiles(*c.molecule));
      if (it != canonical_prompts_.end())
        return it->second;
    }
  }
  throw Error(ErrorCode::kUnknownState,
              "UnknownState: prompt \"" + std::string(input) + "\"");
}

std::vector<Generation> TabularAdapter::draw(std::string_view prompt, int n,
                                             double temperature,
                                             std::uint64_t seed) const {
  int p = policy_->prompt_index(resolve_prompt(prompt));
  std::vector<Generation> out;
  for (const auto &d: policy_->sample(p, n, seed, temperature)) {
    Generation g;
    g.text = d.text;
    for (int a: d.actions)
      g.tokens.push_back(policy_->actions()[a]);
    g.token_logps = d.logps;
    out.push_back(std::move(g));
  }
  return out;
}

std::vector<Generation> TabularAdapter::caption(std::string_view smiles, int n,
                                                double temperature,
                                                std::uint64_t seed) {
  if (role_ != PolicyRole::kCaptioner)
    return PolicyAdapter::caption(smiles, n, temperature, seed);
  return draw(smiles, n, temperature, seed);
}

std::vector<Generation> TabularAdapter::generate(std::string_view caption,
                                                 int n, double temperature,
                                                 std::uint64_t seed) {
  if (role_ != PolicyRole::kGenerator)
    return PolicyAdapter::generate(caption, n, temperature, seed);
  return draw(caption, n, temperature, seed);
}

Completion TabularAdapter::completion_for(std::string_view prompt,
                                          const Generation &g) const {
  int p = policy_->prompt_index(resolve_prompt(prompt));
  TabularPolicy::Draw d;
  for (const std::string &t: g.tokens)
    d.actions.push_back(policy_->action_index(t));
  d.text = g.text;
  return policy_->to_completion(p, d);
}

void TabularAdapter::grpo_update(std::span<const RolloutGroup> groups,
                                 const GrpoConfig &cfg, double lr) {
  policy_->grpo_step(groups, cfg, lr);
}

std::shared_ptr<PolicyAdapter> TabularAdapter::frozen_copy() const {
  auto copy = std::make_shared<TabularPolicy>(*policy_);
  // In sync with its sampling snapshot, the copy keeps that id so logs can
  // name the generator snapshot a captioner step was scored against.
  if (copy->logits(TabularPolicy::Slot::kOld) != copy->logits())
    copy->refresh_old();
  return std::make_shared<TabularAdapter>(copy, role_, label_ + "-frozen");
}

// --- echo ------------------------------------------------------------------

std::vector<Generation> EchoAdapter::caption(std::string_view smiles, int n,
                                             double, std::uint64_t) {
  std::string canon;
  try {
    canon = canonical_smiles(smiles);
  } catch (const Error &e) {
    throw Error(ErrorCode::kAdapterFailure,
                std::string("AdapterFailure: echo cannot caption: ") + e.what());
  }
  return as_generations(std::vector<std::string>(n, canon));
}

std::vector<Generation> EchoAdapter::generate(std::string_view caption, int n,
                                              double, std::uint64_t) {
  std::string out = extract_smiles(caption).value_or(std::string(caption));
  return as_generations(std::vector<std::string>(n, out));
}

std::shared_ptr<PolicyAdapter> EchoAdapter::frozen_copy() const {
  return std::make_shared<EchoAdapter>();
}

// --- scripted --------------------------------------------------------------

ScriptedAdapter::ScriptedAdapter(Script caption_script, Script generate_script,
                                 std::string label)
    : caption_script_(std::move(caption_script)),
      generate_script_(std::move(generate_script)), label_(std::move(label)) { }

std::shared_ptr<ScriptedAdapter> ScriptedAdapter::playback(
    std::unordered_map<std::string, std::vector<std::string>> captions,
    std::unordered_map<std::string, std::vector<std::string>> smiles) {
  auto replay = [](std::unordered_map<std::string, std::vector<std::string>> m) {
    return [m = std::move(m)](std::string_view input, int n, std::uint64_t) {
      auto it = m.find(std::string(input));
      if (it == m.end() || it->second.empty())
        throw Error(ErrorCode::kAdapterFailure,
                    "AdapterFailure: no recording for \"" + std::string(input)
                        + "\"");
      std::vector<std::string> out;
      for (int i = 0; i < n; ++i)
        out.push_back(it->second[i % it->second.size()]);
      return out;
    };
  };
  return std::make_shared<ScriptedAdapter>(replay(std::move(captions)),
                                           replay(std::move(smiles)),
                                           "playback");
}

std::vector<Generation> ScriptedAdapter::caption(std::string_view smiles, int n,
                                                 double temperature,
                                                 std::uint64_t seed) {
  if (!caption_script_)
    return PolicyAdapter::caption(smiles, n, temperature, seed);
  auto out = caption_script_(smiles, n, seed);
  check_count(label_, out.size(), n);
  return as_generations(std::move(out));
}

std::vector<Generation> ScriptedAdapter::generate(std::string_view caption,
                                                  int n, double temperature,
                                                  std::uint64_t seed) {
  if (!generate_script_)
    return PolicyAdapter::generate(caption, n, temperature, seed);
  auto out = generate_script_(caption, n, seed);
  check_count(label_, out.size(), n);
  return as_generations(std::move(out));
}

std::shared_ptr<PolicyAdapter> ScriptedAdapter::frozen_copy() const {
  return std::make_shared<ScriptedAdapter>(caption_script_, generate_script_,
                                           label_);
}

}  // namespace rtmol
