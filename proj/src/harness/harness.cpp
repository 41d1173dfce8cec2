//
// rtmol - Copyright 2026 The rtmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <atomic>
#include <exception>
#include <iterator>
#include <thread>
#include <cmath>
#include <numeric>
#include <random>

#include "json.hpp"

#include "rtmol/error.h"
#include "rtmol/fingerprints/hash.h"
#include "rtmol/harness/harness.h"
#include "rtmol/random.h"

namespace rtmol {
namespace {

constexpr std::uint64_t kGeneratorTag = 0x47454e;
constexpr std::uint64_t kCaptionerTag = 0x434150;
constexpr std::uint64_t kEvalTag = 0x4556414c;
constexpr std::uint64_t kBatchTag = 0x42415443;

std::string pair_name(const PairRecord &p, std::size_t j) {
  return p.id.value_or("pair-" + std::to_string(j));
}

[[noreturn]] void rethrow_adapter(const PairRecord &p, std::size_t j,
                                  const std::exception &e) {
  throw Error(ErrorCode::kAdapterFailure,
              "AdapterFailure: pair " + pair_name(p, j) + ": " + e.what());
}

void apply_updates(PolicyAdapter &adapter, std::span<const RolloutGroup> groups,
                   const HarnessConfig &cfg) {
  const std::size_t mb = static_cast<std::size_t>(cfg.mini_batch);
  for (std::size_t start = 0; start < groups.size(); start += mb) {
    std::size_t len = std::min(mb, groups.size() - start);
    adapter.grpo_update(groups.subspan(start, len), cfg.grpo,
                        cfg.learning_rate);
  }
  adapter.refresh_snapshot();
}

void finish_stats(PhaseStats &st, std::size_t scored, std::size_t valid,
                  std::size_t exact) {
  double reward_sum = 0;
  std::size_t completions = 0, degenerate = 0;
  for (const RolloutGroup &g: st.groups) {
    for (const Completion &c: g.completions)
      reward_sum += c.reward;
    completions += g.completions.size();
    degenerate += g.degenerate;
  }
  if (completions)
    st.mean_reward = reward_sum / static_cast<double>(completions);
  if (scored) {
    st.validity_rate = static_cast<double>(valid) / static_cast<double>(scored);
    st.exact_rate = static_cast<double>(exact) / static_cast<double>(scored);
  }
  if (!st.groups.empty())
    st.degenerate_fraction =
        static_cast<double>(degenerate) / static_cast<double>(st.groups.size());
}

std::vector<std::size_t> sample_batch(std::size_t n, int size,
                                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  seeded_shuffle(perm, rng);
  std::vector<std::size_t> out;
  for (int i = 0; i < size; ++i) {
    if (i > 0 && static_cast<std::size_t>(i) % n == 0)
      seeded_shuffle(perm, rng);
    out.push_back(perm[static_cast<std::size_t>(i) % n]);
  }
  return out;
}

nlohmann::ordered_json report_to_json(const EvalReport &r) {
  return nlohmann::ordered_json::parse(report_json(r));
}

bool plateau(const std::vector<StepRecord> &steps, const std::string &phase,
             int window, double tol) {
  std::vector<double> r;
  for (const StepRecord &s: steps) {
    if (s.phase == phase)
      r.push_back(s.mean_reward);
  }
  const std::size_t w = static_cast<std::size_t>(window);
  if (r.size() < 2 * w)
    return false;
  double recent = 0, before = 0;
  for (std::size_t i = 0; i < w; ++i) {
    recent += r[r.size() - 1 - i];
    before += r[r.size() - 1 - w - i];
  }
  return (recent - before) / static_cast<double>(w) < tol;
}

}  // namespace

void validate_config(const HarnessConfig &cfg) {
  auto bad = [](const std::string &why) {
    return Error(ErrorCode::kInvalidArgument, "InvalidArgument: " + why);
  };
  if (cfg.batch_size < 1 || cfg.mini_batch < 1 || cfg.steps_per_phase < 1
      || cfg.recon_samples < 1 || cfg.eval_samples < 1)
    throw bad("batch size, mini-batch, k, m and eval samples must be >= 1");
  if (cfg.rollouts < 2 || cfg.group_size < 2)
    throw bad("rollout count and group size must be >= 2");
  if (!(cfg.grpo.epsilon > 0) || cfg.grpo.beta < 0)
    throw bad("epsilon must be positive and beta non-negative");
  if (cfg.max_steps < 0 || cfg.convergence_window < 0)
    throw bad("max steps and convergence window must be non-negative");
}

double reward_from(const ScoreBreakdown &s, RewardMode mode) {
  if (mode == RewardMode::kExactOnly)
    return s.exact ? 1.0 : 0.0;
  return s.total;
}

ScoreBreakdown ScoreCache::score(const std::string &reference,
                                 const std::string &candidate) {
  std::string key = reference;
  key += '\x1f';
  key += candidate;
  std::shared_ptr<const ReferenceProfile> ref;
  {
    std::lock_guard lock(mu_);
    if (auto it = scores_.find(key); it != scores_.end())
      return it->second;
    if (auto it = refs_.find(reference); it != refs_.end())
      ref = it->second;
  }
  if (!ref) {
    ref = std::make_shared<const ReferenceProfile>(reference);
    std::lock_guard lock(mu_);
    refs_.emplace(reference, ref);
  }
  ScoreBreakdown s = ref->score(candidate);
  std::lock_guard lock(mu_);
  scores_.emplace(std::move(key), s);
  return s;
}

std::size_t ScoreCache::size() const {
  std::lock_guard lock(mu_);
  return scores_.size();
}

PhaseStats generator_phase(PolicyAdapter &generator,
                           std::span<const PairRecord> batch,
                           const HarnessConfig &cfg, std::uint64_t seed,
                           ScoreCache &cache, RolloutSink *sink) {
  validate_config(cfg);
  PhaseStats st;
  st.phase = "generator";
  st.snapshot_id = generator.snapshot_id();
  std::size_t scored = 0, valid = 0, exact = 0;

  for (std::size_t j = 0; j < batch.size(); ++j) {
    const PairRecord &p = batch[j];
    RolloutGroup g;
    g.prompt_id = pair_name(p, j);
    g.phase = st.phase;
    g.prompt = p.caption;
    g.reference = p.smiles;
    g.snapshot_id = st.snapshot_id;
    try {
      auto gens = generator.generate(p.caption, cfg.rollouts, cfg.temperature,
                                     hash_words(seed, { kGeneratorTag, j }));
      for (const Generation &gen: gens) {
        Completion c = generator.completion_for(p.caption, gen);
        ScoreBreakdown s = cache.score(p.smiles, gen.text);
        c.reward = reward_from(s, cfg.reward);
        ++scored;
        valid += s.valid;
        exact += s.exact;
        g.completions.push_back(std::move(c));
      }
    } catch (const Error &e) {
      if (e.code() == ErrorCode::kInvalidReference)
        throw;
      rethrow_adapter(p, j, e);
    }
    fill_advantages(g);
    st.groups.push_back(std::move(g));
  }
  finish_stats(st, scored, valid, exact);
  if (sink)
    sink->write(st.groups);
  if (generator.supports_training())
    apply_updates(generator, st.groups, cfg);
  return st;
}

PhaseStats captioner_phase(PolicyAdapter &captioner,
                           PolicyAdapter &frozen_generator,
                           std::span<const PairRecord> batch,
                           const HarnessConfig &cfg, std::uint64_t seed,
                           ScoreCache &cache, RolloutSink *sink) {
  validate_config(cfg);
  PhaseStats st;
  st.phase = "captioner";
  st.snapshot_id = captioner.snapshot_id();
  st.frozen_snapshot_id = frozen_generator.snapshot_id();
  std::size_t scored = 0, valid = 0, exact = 0;
  const bool literal = cfg.grouping == CaptionerGrouping::kLiteralN;

  for (std::size_t j = 0; j < batch.size(); ++j) {
    const PairRecord &p = batch[j];
    RolloutGroup g;
    g.prompt_id = pair_name(p, j);
    g.phase = st.phase;
    g.prompt = p.smiles;
    g.reference = p.smiles;
    g.snapshot_id = st.snapshot_id;
    try {
      const int num_captions = literal ? 1 : cfg.group_size;
      const int recon = literal ? cfg.rollouts : cfg.recon_samples;
      auto caps = captioner.caption(p.smiles, num_captions, cfg.temperature,
                                    hash_words(seed, { kCaptionerTag, j }));
      for (std::size_t i = 0; i < caps.size(); ++i) {
        Completion base = captioner.completion_for(p.smiles, caps[i]);
        auto recons = frozen_generator.generate(
            caps[i].text, recon, cfg.temperature,
            hash_words(seed, { kCaptionerTag, j, i + 1 }));
        double sum = 0;
        for (const Generation &r: recons) {
          ScoreBreakdown s = cache.score(p.smiles, r.text);
          ++scored;
          valid += s.valid;
          exact += s.exact;
          double rw = reward_from(s, cfg.reward);
          if (literal) {
            Completion c = base;
            c.reward = rw;
            g.completions.push_back(std::move(c));
          }
          sum += rw;
        }
        if (!literal) {
          base.reward = sum / static_cast<double>(recons.size());
          g.completions.push_back(std::move(base));
        }
      }
    } catch (const Error &e) {
      if (e.code() == ErrorCode::kInvalidReference)
        throw;
      rethrow_adapter(p, j, e);
    }
    fill_advantages(g);
    st.groups.push_back(std::move(g));
  }
  finish_stats(st, scored, valid, exact);
  if (sink)
    sink->write(st.groups);
  if (captioner.supports_training())
    apply_updates(captioner, st.groups, cfg);
  return st;
}

std::vector<RoundTripSample>
evaluate_round_trip(PolicyAdapter &captioner, PolicyAdapter &generator,
                    std::span<const PairRecord> pairs, int samples_per_pair,
                    double temperature, std::uint64_t seed, ScoreCache &cache,
                    int jobs) {
  std::vector<std::vector<RoundTripSample>> per_pair(pairs.size());
  std::vector<std::exception_ptr> errors(pairs.size());

  auto run_one = [&](std::size_t j) {
    const PairRecord &p = pairs[j];
    try {
      auto caps = captioner.caption(p.smiles, samples_per_pair, temperature,
                                    hash_words(seed, { kEvalTag, j }));
      for (std::size_t i = 0; i < caps.size(); ++i) {
        auto rec = generator.generate(caps[i].text, 1, temperature,
                                      hash_words(seed, { kEvalTag, j, i + 1 }));
        RoundTripSample s;
        s.original = p.smiles;
        s.caption = caps[i].text;
        s.reconstruction = rec.front().text;
        s.score = cache.score(p.smiles, s.reconstruction);
        if (!p.caption.empty())
          s.reference_caption = p.caption;
        per_pair[j].push_back(std::move(s));
      }
    } catch (const Error &e) {
      if (e.code() == ErrorCode::kInvalidReference) {
        errors[j] = std::current_exception();
        return;
      }
      try {
        rethrow_adapter(p, j, e);
      } catch (...) {
        errors[j] = std::current_exception();
      }
    } catch (...) {
      errors[j] = std::current_exception();
    }
  };

  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)),
                            pairs.size());
  if (workers <= 1) {
    for (std::size_t j = 0; j < pairs.size(); ++j)
      run_one(j);
  } else {
    std::atomic<std::size_t> next{ 0 };
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t j = next++; j < pairs.size(); j = next++)
          run_one(j);
      });
  }
  // Report the first failing pair in input order, whatever the scheduling.
  for (const std::exception_ptr &e: errors) {
    if (e)
      std::rethrow_exception(e);
  }
  std::vector<RoundTripSample> out;
  for (auto &v: per_pair)
    std::move(v.begin(), v.end(), std::back_inserter(out));
  return out;
}

TrainingLog run_training(PolicyAdapter &captioner, PolicyAdapter &generator,
                         std::span<const PairRecord> train,
                         std::span<const PairRecord> heldout,
                         const HarnessConfig &cfg, RolloutSink *sink) {
  validate_config(cfg);
  if (train.empty() || heldout.empty())
    throw Error(ErrorCode::kEmptyCollection,
                "EmptyCollection: training and held-out sets must be non-empty");
  ScoreCache cache;
  TrainingLog log;

  auto evaluate = [&](EvalReport &report, double &rate) {
    auto samples = evaluate_round_trip(
        captioner, generator, heldout, cfg.eval_samples, cfg.eval_temperature,
        hash_words(cfg.seed, { kEvalTag }), cache);
    report = aggregate_report(samples);
    rate = round_trip_rate(samples);
  };
  evaluate(log.initial_eval, log.initial_round_trip);

  int step = 0;
  auto record = [&](const PhaseStats &st) {
    StepRecord r;
    r.phase = st.phase;
    r.step = ++step;
    r.mean_reward = st.mean_reward;
    r.validity_rate = st.validity_rate;
    r.exact_rate = st.exact_rate;
    r.degenerate_fraction = st.degenerate_fraction;
    r.snapshot_id = st.snapshot_id;
    r.frozen_snapshot_id = st.frozen_snapshot_id;
    log.steps.push_back(r);
  };
  auto batch_for = [&](std::uint64_t tag) {
    std::vector<PairRecord> batch;
    for (std::size_t i: sample_batch(train.size(), cfg.batch_size,
                                     hash_words(cfg.seed, { kBatchTag, tag })))
      batch.push_back(train[i]);
    return batch;
  };

  while (step < cfg.max_steps && !log.converged) {
    for (int i = 0; i < cfg.steps_per_phase && step < cfg.max_steps; ++i) {
      auto batch = batch_for(static_cast<std::uint64_t>(step));
      record(generator_phase(generator, batch, cfg,
                             hash_words(cfg.seed, { kGeneratorTag,
                                                    static_cast<std::uint64_t>(step) }),
                             cache, sink));
    }
    for (int i = 0; i < cfg.steps_per_phase && step < cfg.max_steps; ++i) {
      auto batch = batch_for(static_cast<std::uint64_t>(step));
      // The evaluator tracks the live generator: re-copied every step.
      auto frozen = generator.frozen_copy();
      record(captioner_phase(captioner, *frozen, batch, cfg,
                             hash_words(cfg.seed, { kCaptionerTag,
                                                    static_cast<std::uint64_t>(step) }),
                             cache, sink));
    }
    if (cfg.convergence_window > 0)
      log.converged =
          plateau(log.steps, "generator", cfg.convergence_window,
                  cfg.convergence_tol)
          && plateau(log.steps, "captioner", cfg.convergence_window,
                     cfg.convergence_tol);
  }

  evaluate(log.final_eval, log.final_round_trip);
  return log;
}

std::string TrainingLog::to_json() const {
  nlohmann::ordered_json j;
  j["initial_round_trip"] = initial_round_trip;
  j["initial_eval"] = report_to_json(initial_eval);
  auto &arr = j["steps"] = nlohmann::ordered_json::array();
  for (const StepRecord &s: steps) {
    nlohmann::ordered_json r;
    r["phase"] = s.phase;
    r["step"] = s.step;
    r["mean_reward"] = s.mean_reward;
    r["validity_rate"] = s.validity_rate;
    r["exact_rate"] = s.exact_rate;
    r["degenerate_fraction"] = s.degenerate_fraction;
    r["snapshot_id"] = s.snapshot_id;
    if (s.phase == "captioner")
      r["frozen_snapshot_id"] = s.frozen_snapshot_id;
    arr.push_back(std::move(r));
  }
  j["converged"] = converged;
  j["final_round_trip"] = final_round_trip;
  j["final_eval"] = report_to_json(final_eval);
  return j.dump(2);
}

}  // namespace rtmol
