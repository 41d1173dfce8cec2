//
// rtmol - Copyright 2026 The rtmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Tolerances are fixed below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "rtmol/chem/smiles.h"
#include "rtmol/chem/validity.h"
#include "rtmol/dataset/dataset.h"
#include "rtmol/error.h"
#include "rtmol/fingerprints/fingerprints.h"
#include "rtmol/grpo/grpo.h"
#include "rtmol/harness/harness.h"
#include "rtmol/metrics/metrics.h"
#include "rtmol/random.h"
#include "rtmol/theory/theory.h"
#include "support/oracles.h"

using namespace rtmol;

namespace {

constexpr double kSimTol = 1e-12;
constexpr double kGroupTol = 1e-9;
constexpr double kGradTol = 1e-6;
constexpr double kBleuTol = 1e-9;
constexpr double kCanonSeconds = 5.0;
constexpr double kTheorySeconds = 10.0;
constexpr double kToySeconds = 60.0;
constexpr double kToyTarget = 0.9;
constexpr double kExactOnlyCeiling = 0.5;

std::filesystem::path source_dir() { return RTMOL_SOURCE_DIR; }

std::vector<std::string> corpus() {
  std::vector<std::string> out;
  for (const auto &r: load_pairs(source_dir() / "data" / "corpus200.smi").records)
    out.push_back(r.smiles);
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char *f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

Outcome canonicalization() {
  auto mols = corpus();
  if (mols.size() != 200)
    return { false, "corpus has " + std::to_string(mols.size()) + " molecules" };
  auto t0 = std::chrono::steady_clock::now();
  int bad = 0;
  for (const std::string &s: mols) {
    std::string c = canonical_smiles(s);
    if (canonical_smiles(c) != c)
      ++bad;
    Molecule m = parse_smiles(s);
    for (std::uint64_t k = 0; k < 20; ++k)
      if (canonical_smiles(random_smiles(m, k)) != c)
        ++bad;
  }
  double dt = seconds_since(t0);
  return { bad == 0 && dt < kCanonSeconds,
           std::to_string(bad) + " mismatches over 200 x 21 renderings, "
               + fmt("%.2f s", dt) };
}

// Corruptions that are malformed whatever the input.
std::string corrupt(const std::string &s, int kind) {
  switch (kind % 5) {
  case 0: return s + "(";
  case 1: return ")" + s;
  case 2: return s + "%99";
  case 3: return s + "[Xx]";
  default: return "C(=O)(=O)(=O)" + s;
  }
}

Outcome score_gating() {
  auto mols = corpus();
  mols.resize(100);
  std::vector<std::string> malformed;
  for (int i = 0; i < 100; ++i)
    malformed.push_back(corrupt(mols[static_cast<std::size_t>(i)], i));
  int nonzero = 0, not_invalid = 0, self_bad = 0;
  for (const std::string &m: malformed)
    not_invalid += check_validity(m).is_valid;
  for (const std::string &x: mols) {
    ReferenceProfile ref(x);
    if (ref.score(x).total != 4.0)
      ++self_bad;
    for (const std::string &m: malformed)
      nonzero += ref.score(m).total != 0.0;
  }
  return { nonzero == 0 && not_invalid == 0 && self_bad == 0,
           std::to_string(nonzero) + "/10000 malformed pairs scored above 0, "
               + std::to_string(self_bad) + " self scores differ from 4" };
}

Outcome tanimoto_properties() {
  std::mt19937_64 rng(3);
  auto random_set = [&] {
    std::vector<std::uint64_t> ids;
    std::size_t n = uniform_below(rng, 12);
    for (std::size_t i = 0; i < n; ++i)
      ids.push_back(uniform_below(rng, 24));
    return FeatureSet(FingerprintFamily::kMorgan, 2, ids);
  };
  double worst_sym = 0, worst_self = 0;
  int out_of_range = 0;
  for (int i = 0; i < 1000; ++i) {
    FeatureSet a = random_set(), b = random_set();
    double ab = tanimoto(a, b), ba = tanimoto(b, a);
    out_of_range += !(ab >= 0.0 && ab <= 1.0);
    worst_sym = std::max(worst_sym, std::abs(ab - ba));
    worst_self = std::max(worst_self, std::abs(tanimoto(a, a) - 1.0));
  }
  return { out_of_range == 0 && worst_sym <= kSimTol && worst_self <= kSimTol,
           fmt("max asymmetry %.1e, max |T(a,a)-1| %.1e", worst_sym, worst_self)
               + ", " + std::to_string(out_of_range) + " out of range" };
}

Outcome advantages() {
  std::mt19937_64 rng(4);
  double worst_mean = 0, worst_sd = 0;
  for (int g = 0; g < 1000; ++g) {
    std::vector<double> r(32);
    for (double &x: r)
      x = 4.0 * uniform01(rng());
    Advantages a = group_advantages(r);
    double mean = 0, sq = 0;
    for (double v: a.values)
      mean += v;
    mean /= 32;
    for (double v: a.values)
      sq += (v - mean) * (v - mean);
    worst_mean = std::max(worst_mean, std::abs(mean));
    worst_sd = std::max(worst_sd, std::abs(std::sqrt(sq / 32) - 1.0));
  }
  std::vector<double> flat(32, 2.5);
  Advantages z = group_advantages(flat);
  bool zeros = z.degenerate;
  for (double v: z.values)
    zeros = zeros && v == 0.0;
  return { worst_mean < kGroupTol && worst_sd < kGroupTol && zeros,
           fmt("max |mean| %.1e, max |std-1| %.1e", worst_mean, worst_sd)
               + (zeros ? ", constant group gives zeros" : ", constant group not zero") };
}

Outcome gradient() {
  double worst = 0;
  for (std::uint64_t seed: { 1u, 2u, 3u }) {
    TabularPolicy pol = oracle::perturbed_policy(seed);
    auto groups = oracle::sampled_groups(pol, 8, seed);
    GrpoConfig cfg;
    cfg.beta = 0.05;
    worst = std::max(worst, oracle::gradient_check(pol, groups, cfg));
  }
  return { worst < kGradTol, fmt("max |analytic - finite difference| %.2e", worst) };
}

Outcome theory() {
  auto t0 = std::chrono::steady_clock::now();
  int holding = 0, control_holding = 0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    DiscreteSystem sys = random_system(7 + i);
    holding += check_mi_bound(sys).holds;
    // Negative control: an overstated bound must be caught.
    BoundReport r = check_mi_bound(with_posterior_generator(sys));
    r.mi -= 1.0;
    control_holding += bound_holds(r);
  }
  double dt = seconds_since(t0);
  return { holding == 100 && control_holding == 0 && dt < kTheorySeconds,
           std::to_string(holding) + "/100 hold, negative control "
               + std::to_string(control_holding) + "/100, " + fmt("%.2f s", dt) };
}

Outcome toy() {
  ToySetup setup = load_toy(source_dir() / "data" / "toy");
  auto run = [&](RewardMode mode) {
    ToySetup s = setup;
    s.config.reward = mode;
    ToyPolicies p = make_toy_policies(s);
    return run_training(*p.captioner, *p.generator, s.pairs, s.pairs, s.config);
  };
  auto t0 = std::chrono::steady_clock::now();
  TrainingLog shaped = run(RewardMode::kShaped);
  double dt = seconds_since(t0);
  TrainingLog exact = run(RewardMode::kExactOnly);
  bool ok = shaped.final_round_trip >= kToyTarget
            && static_cast<int>(shaped.steps.size()) <= 200 && dt < kToySeconds
            && exact.final_round_trip < kExactOnlyCeiling;
  return { ok, fmt("shaped %.3f (initial %.3f), exact-only %.3f", shaped.final_round_trip,
                   shaped.initial_round_trip, exact.final_round_trip)
                   + ", " + std::to_string(shaped.steps.size()) + " steps, "
                   + fmt("%.2f s", dt) };
}

Outcome echo_eval() {
  std::vector<PairRecord> pairs;
  for (const std::string &s: corpus()) {
    PairRecord r;
    r.smiles = s;
    r.caption = s;
    pairs.push_back(r);
  }
  EchoAdapter echo;
  ScoreCache cache;
  EvalReport rep = aggregate_report(evaluate_round_trip(echo, echo, pairs, 1, 1.0, 0, cache));
  bool ok = rep.exact_pct == 100.0 && rep.validity_pct == 100.0
            && std::round(rep.maccs * 1000) == 1000 && std::round(rep.rdk * 1000) == 1000
            && std::round(rep.morgan * 1000) == 1000;
  return { ok, fmt("exact %.2f, validity %.2f, ", rep.exact_pct, rep.validity_pct)
                   + fmt("similarities %.3f/%.3f/%.3f", rep.maccs, rep.rdk, rep.morgan) };
}

Outcome dataset_ops() {
  std::vector<PairRecord> many(33010);
  for (std::size_t i = 0; i < many.size(); ++i) {
    many[i].id = std::to_string(i);
    many[i].smiles = "C";
  }
  Splits s = split(many, { { 0.8, 0.1, 0.1 }, 0 });
  std::set<std::string> seen;
  for (const auto *part: { &s.train, &s.valid, &s.test })
    for (const auto &r: *part)
      seen.insert(*r.id);
  bool split_ok = s.train.size() == 26408 && s.valid.size() == 3301
                  && s.test.size() == 3301 && seen.size() == many.size();

  PairRecord a, b;
  a.smiles = "OCC";
  b.smiles = "CCO";
  std::vector<PairRecord> target { a }, reference { b };
  bool dedupe_ok = dedupe_overlap(target, reference).kept.empty();

  auto noisy = load_pairs(source_dir() / "tests" / "fixtures" / "noisy_pairs.tsv").records;
  EchoAdapter echo;
  FilterResult f = diagnostic_filter(noisy, echo, 2.0, 1, 7);
  std::set<std::string> kept, expected;
  for (const auto &r: f.kept)
    kept.insert(*r.id);
  std::ifstream in(source_dir() / "tests" / "fixtures" / "noisy_clean_ids.txt");
  for (std::string line; std::getline(in, line);)
    if (!line.empty())
      expected.insert(line);
  bool filter_ok = kept == expected && f.kept.size() + f.rejected.size() == noisy.size();

  return { split_ok && dedupe_ok && filter_ok,
           "split " + std::to_string(s.train.size()) + "/" + std::to_string(s.valid.size())
               + "/" + std::to_string(s.test.size()) + ", dedupe "
               + (dedupe_ok ? "canonical" : "missed OCC/CCO") + ", filter kept "
               + std::to_string(kept.size()) + " (" + (filter_ok ? "clean set" : "mismatch")
               + ")" };
}

Outcome text_metrics() {
  std::mt19937_64 rng(10);
  double worst = 0;
  for (int i = 0; i < 50; ++i) {
    std::vector<std::string> c { oracle::random_sentence(rng, 14) },
        r { oracle::random_sentence(rng, 14) };
    worst = std::max(worst, std::abs(bleu(c, r) - oracle::bleu(c, r)));
  }
  std::string s = "the molecule is an acid with a ring";
  std::vector<std::string> same { s };
  double self_bleu = bleu(same, same), self_meteor = meteor_lite(s, s);
  return { worst < kBleuTol && std::abs(self_bleu - 1) < kBleuTol
               && std::abs(self_meteor - 1) < kBleuTol,
           fmt("max |bleu - oracle| %.1e, self bleu %.6f, self meteor %.6f", worst,
               self_bleu, self_meteor) };
}

}  // namespace

int main() {
  const std::vector<std::pair<const char *, std::function<Outcome()>>> criteria = {
    { "canonical SMILES idempotent and rendering invariant", canonicalization },
    { "invalid candidates score 0, self score is 4", score_gating },
    { "Tanimoto range, symmetry and identity", tanimoto_properties },
    { "group advantages standardized", advantages },
    { "GRPO gradient matches finite differences", gradient },
    { "mutual information bound on random systems", theory },
    { "toy round trip learned from shaped reward", toy },
    { "echo round trip on the corpus", echo_eval },
    { "split, dedupe and diagnostic filter", dataset_ops },
    { "BLEU and METEOR", text_metrics },
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception &e) {
      o = { false, std::string("exception: ") + e.what() };
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << ": "
              << criteria[i].first << " (" << o.detail << ")" << std::endl;
  }
  return failed ? 1 : 0;
}
