//
// rtmol - Copyright 2026 The rtmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <cstdlib>
#include <fstream>

#include "json.hpp"

#include "rtmol/dataset/dataset.h"
#include "rtmol/error.h"
#include "rtmol/harness/harness.h"

#ifndef RTMOL_DATA_DIR
#define RTMOL_DATA_DIR "data"
#endif

namespace rtmol {
namespace {

// fragments.txt spells the empty fragment this way.
constexpr std::string_view kEmptyFragment = "<none>";

std::vector<std::string> read_lines(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::kIoFailure, "IoFailure: cannot open " + path.string());
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty() || line.front() == '#')
      continue;
    out.push_back(line);
  }
  return out;
}

template <typename T>
void take(const nlohmann::json &j, const char *key, T &dst) {
  if (auto it = j.find(key); it != j.end())
    dst = it->get<T>();
}

HarnessConfig parse_toy_config(const std::filesystem::path &path,
                               int &fragment_slots) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::kIoFailure, "IoFailure: cannot open " + path.string());
  HarnessConfig c;
  try {
    nlohmann::json j = nlohmann::json::parse(in);
    take(j, "fragment_slots", fragment_slots);
    take(j, "batch_size", c.batch_size);
    take(j, "mini_batch", c.mini_batch);
    take(j, "steps_per_phase", c.steps_per_phase);
    take(j, "rollouts", c.rollouts);
    take(j, "group_size", c.group_size);
    take(j, "recon_samples", c.recon_samples);
    take(j, "epsilon", c.grpo.epsilon);
    take(j, "beta", c.grpo.beta);
    take(j, "learning_rate", c.learning_rate);
    take(j, "seed", c.seed);
    take(j, "max_steps", c.max_steps);
    take(j, "convergence_window", c.convergence_window);
    take(j, "convergence_tol", c.convergence_tol);
    take(j, "temperature", c.temperature);
    take(j, "eval_samples", c.eval_samples);
    take(j, "eval_temperature", c.eval_temperature);
    if (auto it = j.find("reward"); it != j.end())
      c.reward = it->get<std::string>() == "exact" ? RewardMode::kExactOnly
                                                   : RewardMode::kShaped;
    if (auto it = j.find("grouping"); it != j.end())
      c.grouping = it->get<std::string>() == "literal"
                       ? CaptionerGrouping::kLiteralN
                       : CaptionerGrouping::kSampledCaptions;
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::kFormatUnknown,
                "FormatUnknown: " + path.string() + ": " + e.what());
  }
  c.grpo.group_size = c.rollouts;
  validate_config(c);
  return c;
}

}  // namespace

ToySetup load_toy(const std::filesystem::path &dir) {
  ToySetup toy;
  LoadResult pairs = load_pairs(dir / "pairs.tsv");
  if (!pairs.rejected.empty())
    throw Error(ErrorCode::kFormatUnknown,
                "FormatUnknown: " + (dir / "pairs.tsv").string() + ":"
                    + std::to_string(pairs.rejected.front().line) + ": "
                    + pairs.rejected.front().reason);
  toy.pairs = std::move(pairs.records);
  toy.captions = read_lines(dir / "captions.txt");
  for (std::string &f: read_lines(dir / "fragments.txt"))
    toy.fragments.push_back(f == kEmptyFragment ? std::string() : std::move(f));
  toy.config = parse_toy_config(dir / "toy.json", toy.fragment_slots);
  if (toy.pairs.empty() || toy.captions.empty() || toy.fragments.empty())
    throw Error(ErrorCode::kEmptyCollection,
                "EmptyCollection: toy setup in " + dir.string() + " is incomplete");
  return toy;
}

ToyPolicies make_toy_policies(const ToySetup &toy) {
  std::vector<std::string> molecules;
  for (const PairRecord &p: toy.pairs)
    molecules.push_back(p.smiles);
  auto cap = std::make_shared<TabularPolicy>(molecules, toy.captions, 1);
  auto gen = std::make_shared<TabularPolicy>(toy.captions, toy.fragments,
                                             toy.fragment_slots);
  cap->set_reference();
  gen->set_reference();
  return { std::make_shared<TabularAdapter>(cap, PolicyRole::kCaptioner,
                                            "toy-captioner"),
           std::make_shared<TabularAdapter>(gen, PolicyRole::kGenerator,
                                            "toy-generator") };
}

std::filesystem::path default_data_dir() {
  if (const char *env = std::getenv("RTMOL_DATA_DIR"); env && *env)
    return env;
  return RTMOL_DATA_DIR;
}

}  // namespace rtmol
