//
// rtmol - Copyright 2026 The rtmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <fstream>
#include <memory>
#include <set>

#include "doctest.h"
#include "json.hpp"

#include "rtmol/chem/smiles.h"
#include "rtmol/harness/harness.h"
#include "rtmol/metrics/metrics.h"
#include "test_util.h"

using namespace rtmol;
using rtmol::test::error_of;

namespace {

PairRecord pair(std::string smiles, std::string caption, std::string id) {
  PairRecord r;
  r.smiles = std::move(smiles);
  r.caption = std::move(caption);
  r.id = std::move(id);
  return r;
}

std::vector<PairRecord> small_set() {
  return {
    pair("CCO", "ethanol", "a"),
    pair("c1ccccc1", "benzene", "b"),
    pair("CC(=O)O", "acetic acid", "c"),
    pair("CCN", "ethylamine", "d"),
  };
}

HarnessConfig small_config() {
  HarnessConfig cfg;
  cfg.batch_size = 4;
  cfg.mini_batch = 2;
  cfg.rollouts = 6;
  cfg.group_size = 4;
  cfg.grpo.group_size = 6;
  cfg.recon_samples = 2;
  cfg.learning_rate = 0.5;
  cfg.max_steps = 6;
  cfg.steps_per_phase = 2;
  cfg.convergence_window = 0;
  cfg.seed = 3;
  return cfg;
}

std::vector<RolloutGroup> synthetic_groups(int count) {
  std::vector<RolloutGroup> out;
  for (int g = 0; g < count; ++g) {
    RolloutGroup grp;
    grp.prompt_id = "p" + std::to_string(g);
    grp.phase = g % 2 ? "captioner" : "generator";
    grp.prompt = "prompt \"" + std::to_string(g) + "\"\twith\nspecials";
    grp.reference = "CCO";
    grp.snapshot_id = 100 + g;
    for (int i = 0; i < 3; ++i) {
      Completion c;
      c.text = "C" + std::string(i, 'C');
      c.reward = 0.25 * (g % 5) + i;
      if (g % 3 == 0) {
        c.tokens = { "C", "O" };
        c.logp_cur = { -0.1 * i, -0.2 };
        c.logp_old = { -0.1, -0.3 };
        c.logp_ref = { -0.5, -0.5 };
      }
      grp.completions.push_back(std::move(c));
    }
    fill_advantages(grp);
    out.push_back(std::move(grp));
  }
  return out;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("rollout export round trip") {
  auto dir = test::scratch("rollouts");
  auto groups = synthetic_groups(100);
  export_rollouts(groups, dir / "r.jsonl");
  auto back = read_rollouts(dir / "r.jsonl");
  REQUIRE(back.size() == groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const auto &a = groups[g], &b = back[g];
    CHECK(b.prompt_id == a.prompt_id);
    CHECK(b.phase == a.phase);
    CHECK(b.prompt == a.prompt);
    CHECK(b.reference == a.reference);
    CHECK(b.snapshot_id == a.snapshot_id);
    CHECK(b.degenerate == a.degenerate);
    REQUIRE(b.completions.size() == a.completions.size());
    for (std::size_t i = 0; i < a.completions.size(); ++i) {
      CHECK(b.completions[i].text == a.completions[i].text);
      CHECK(b.completions[i].reward == a.completions[i].reward);
      CHECK(b.completions[i].tokens == a.completions[i].tokens);
      CHECK(b.completions[i].logp_cur == a.completions[i].logp_cur);
      CHECK(b.completions[i].logp_ref == a.completions[i].logp_ref);
      CHECK(b.advantages[i] == a.advantages[i]);
    }
  }

  export_rollouts({}, dir / "empty.jsonl");
  CHECK(test::slurp(dir / "empty.jsonl").empty());
  CHECK(read_rollouts(dir / "empty.jsonl").empty());

  export_rollouts(std::span(groups).subspan(0, 2), dir / "app.jsonl");
  export_rollouts(std::span(groups).subspan(2, 3), dir / "app.jsonl", true);
  CHECK(read_rollouts(dir / "app.jsonl").size() == 5);

  {
    std::ofstream bad(dir / "bad.jsonl");
    bad << "{\"group_id\": 1}\n";
  }
  CHECK(error_of([&] { read_rollouts(dir / "bad.jsonl"); })
        == ErrorCode::kFormatUnknown);
  CHECK(error_of([&] { read_rollouts(dir / "missing.jsonl"); })
        == ErrorCode::kIoFailure);
}

TEST_CASE("generator phase in export mode") {
  EchoAdapter echo;
  auto pairs = small_set();
  pairs[1].caption = "the ring c1ccccc1";
  HarnessConfig cfg = small_config();
  ScoreCache cache;
  auto dir = test::scratch("sink");
  RolloutFileSink sink(dir / "s.jsonl", false);
  PhaseStats st = generator_phase(echo, pairs, cfg, 11, cache, &sink);

  REQUIRE(st.groups.size() == pairs.size());
  for (const auto &g: st.groups) {
    CHECK(g.completions.size() == static_cast<std::size_t>(cfg.rollouts));
    for (const auto &c: g.completions) {
      double expected = ReferenceProfile(g.reference).score(c.text).total;
      CHECK(c.reward == expected);
      CHECK(c.reward >= 0.0);
      CHECK(c.reward <= 4.0);
    }
  }
  // Only the benzene caption holds a parseable structure.
  CHECK(st.groups[1].completions[0].reward == 4.0);
  CHECK(st.exact_rate == doctest::Approx(0.25));
  CHECK(read_rollouts(dir / "s.jsonl").size() == pairs.size());
}

TEST_CASE("always-invalid generator leaves logits unchanged without KL") {
  auto pol = std::make_shared<TabularPolicy>(
      std::vector<std::string> { "ethanol", "benzene", "acetic acid",
                                 "ethylamine" },
      std::vector<std::string> { "((", "C1", "c", "X" });
  pol->set_reference();
  TabularAdapter gen(pol, PolicyRole::kGenerator);
  HarnessConfig cfg = small_config();
  cfg.grpo.beta = 0.0;
  Eigen::MatrixXd before = pol->logits();
  ScoreCache cache;
  PhaseStats st = generator_phase(gen, small_set(), cfg, 5, cache);
  CHECK(st.mean_reward == 0.0);
  CHECK(st.validity_rate == 0.0);
  CHECK(st.degenerate_fraction == 1.0);
  for (const auto &g: st.groups) {
    CHECK(g.degenerate);
    for (double a: g.advantages)
      CHECK(a == 0.0);
  }
  CHECK((pol->logits() - before).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("captioner concentrates on the canonical answer under echo") {
  std::vector<PairRecord> pairs = {
    pair("OCC", "ethanol", "a"),
    pair("c1ccccc1", "benzene", "b"),
  };
  std::vector<std::string> captions = { "a liquid", "CCO", "c1ccccc1",
                                        "CCCC", "C1CCCCC1", "an aromatic" };
  auto pol = std::make_shared<TabularPolicy>(
      std::vector<std::string> { "OCC", "c1ccccc1" }, captions);
  pol->set_reference();
  TabularAdapter cap(pol, PolicyRole::kCaptioner);
  EchoAdapter echo;
  HarnessConfig cfg = small_config();
  cfg.batch_size = 2;
  cfg.mini_batch = 2;
  cfg.group_size = 8;
  cfg.recon_samples = 1;
  cfg.learning_rate = 1.0;
  cfg.grpo.beta = 0.01;
  cfg.grpo.group_size = 8;
  ScoreCache cache;
  for (int step = 0; step < 60; ++step)
    captioner_phase(cap, echo, pairs, cfg, 1000 + step, cache);

  auto p_ethanol = pol->probabilities(pol->row(0, 0));
  auto p_benzene = pol->probabilities(pol->row(1, 0));
  CHECK(p_ethanol[pol->action_index("CCO")] >= 0.9);
  CHECK(p_benzene[pol->action_index("c1ccccc1")] >= 0.9);
}

TEST_CASE("single reconstruction scores a caption directly") {
  auto gen = std::make_shared<ScriptedAdapter>(
      nullptr,
      [](std::string_view caption, int n, std::uint64_t) {
        std::string out = caption == "ethanol" ? "CCO" : "CCCl";
        return std::vector<std::string>(static_cast<std::size_t>(n), out);
      });
  auto cap = std::make_shared<ScriptedAdapter>(
      [](std::string_view, int n, std::uint64_t seed) {
        std::vector<std::string> out;
        for (int i = 0; i < n; ++i)
          out.push_back((seed + i) % 2 ? "ethanol" : "chloro");
        return out;
      },
      nullptr);
  HarnessConfig cfg = small_config();
  cfg.recon_samples = 1;
  ScoreCache cache;
  auto pairs = small_set();
  PhaseStats st = captioner_phase(*cap, *gen, pairs, cfg, 9, cache);
  for (const auto &g: st.groups) {
    for (const auto &c: g.completions) {
      std::string recon = c.text == "ethanol" ? "CCO" : "CCCl";
      CHECK(c.reward == ReferenceProfile(g.reference).score(recon).total);
    }
  }
}

TEST_CASE("adapter errors name the pair") {
  auto broken = std::make_shared<ScriptedAdapter>(nullptr, nullptr);
  ScoreCache cache;
  auto pairs = small_set();
  try {
    generator_phase(*broken, pairs, small_config(), 1, cache);
    FAIL("expected AdapterFailure");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::kAdapterFailure);
    CHECK(std::string(e.what()).find("a") != std::string::npos);
  }
  EchoAdapter echo;
  pairs[0].smiles = "C((";
  CHECK(error_of([&] { generator_phase(echo, pairs, small_config(), 1, cache); })
        == ErrorCode::kInvalidReference);
}

TEST_CASE("config validation") {
  HarnessConfig cfg = small_config();
  cfg.rollouts = 1;
  CHECK(error_of([&] { validate_config(cfg); }) == ErrorCode::kInvalidArgument);
  cfg = small_config();
  cfg.batch_size = 0;
  CHECK(error_of([&] { validate_config(cfg); }) == ErrorCode::kInvalidArgument);
  CHECK_NOTHROW(validate_config(small_config()));
}

TEST_CASE("evaluation does not depend on worker count") {
  EchoAdapter echo;
  auto pairs = small_set();
  ScoreCache cache;
  auto one = evaluate_round_trip(echo, echo, pairs, 3, 1.0, 4, cache, 1);
  auto four = evaluate_round_trip(echo, echo, pairs, 3, 1.0, 4, cache, 4);
  REQUIRE(one.size() == 12);
  REQUIRE(four.size() == one.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    CHECK(one[i].original == four[i].original);
    CHECK(one[i].reconstruction == four[i].reconstruction);
  }
  CHECK(round_trip_rate(one) == 1.0);
}

TEST_CASE("toy training is reproducible and logged consistently") {
  ToySetup toy = load_toy(default_data_dir() / "toy");
  toy.config.max_steps = 40;
  auto run = [&] {
    ToyPolicies p = make_toy_policies(toy);
    return run_training(*p.captioner, *p.generator, toy.pairs, toy.pairs,
                        toy.config);
  };
  TrainingLog a = run();
  TrainingLog b = run();
  CHECK(a.to_json() == b.to_json());
  REQUIRE(a.steps.size() == 40);

  std::vector<const StepRecord *> gen_steps;
  for (const auto &s: a.steps) {
    CHECK(s.mean_reward >= 0.0);
    CHECK(s.mean_reward <= 4.0);
    if (s.phase == "generator")
      gen_steps.push_back(&s);
  }
  REQUIRE(gen_steps.size() == 20);
  CHECK(gen_steps[19]->mean_reward > gen_steps[0]->mean_reward);

  // Each captioner step is scored by the generator as it stood after the
  // preceding generator block: that snapshot is the one the next generator
  // step samples from.
  for (std::size_t i = 0; i < a.steps.size(); ++i) {
    const auto &s = a.steps[i];
    if (s.phase != "captioner")
      continue;
    CHECK(s.frozen_snapshot_id != 0);
    auto next = std::find_if(a.steps.begin() + static_cast<long>(i),
                             a.steps.end(),
                             [](const StepRecord &r) { return r.phase == "generator"; });
    if (next != a.steps.end())
      CHECK(s.frozen_snapshot_id == next->snapshot_id);
  }
  // Generator snapshots advance every step.
  std::set<std::uint64_t> ids;
  for (const auto *s: gen_steps)
    CHECK(ids.insert(s->snapshot_id).second);

  auto j = nlohmann::json::parse(a.to_json());
  CHECK(j["steps"].size() == 40);
  CHECK(j["steps"][0].count("frozen_snapshot_id") == 0);
  CHECK(j["steps"][10].count("frozen_snapshot_id") == 1);
}

TEST_CASE("zero steps runs only the evaluations") {
  ToySetup toy = load_toy(default_data_dir() / "toy");
  toy.config.max_steps = 0;
  ToyPolicies p = make_toy_policies(toy);
  TrainingLog log = run_training(*p.captioner, *p.generator, toy.pairs,
                                 toy.pairs, toy.config);
  CHECK(log.steps.empty());
  CHECK(log.final_round_trip == log.initial_round_trip);
  CHECK(report_json(log.final_eval) == report_json(log.initial_eval));
}

TEST_CASE("score cache memoizes") {
  ScoreCache cache;
  auto a = cache.score("CCO", "OCC");
  auto b = cache.score("CCO", "OCC");
  CHECK(a.total == 4.0);
  CHECK(b.total == a.total);
  CHECK(cache.size() == 1);
  cache.score("CCO", "CC");
  CHECK(cache.size() == 2);
  CHECK(reward_from(a, RewardMode::kExactOnly) == 1.0);
  CHECK(reward_from(cache.score("CCO", "CC"), RewardMode::kExactOnly) == 0.0);
}

}  // TEST_SUITE
