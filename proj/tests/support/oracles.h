//
// rtmol - Copyright 2026 The rtmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

// Independent reference computations shared by unit and acceptance tests.

#ifndef RTMOL_TESTS_ORACLES_H_
#define RTMOL_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rtmol/grpo/grpo.h"
#include "rtmol/policy/tabular_policy.h"
#include "rtmol/random.h"

namespace rtmol::oracle {

inline std::vector<std::string> words(const std::string &s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;)
    out.push_back(w);
  return out;
}

// Corpus BLEU by direct scanning: for every candidate n-gram position,
// count its occurrences in both texts and credit min(c_ref / c_cand, 1).
inline double bleu(const std::vector<std::string> &cands,
                   const std::vector<std::string> &refs) {
  double match[4] = {}, total[4] = {}, clen = 0, rlen = 0;
  for (std::size_t k = 0; k < cands.size(); ++k) {
    auto c = words(cands[k]), r = words(refs[k]);
    clen += static_cast<double>(c.size());
    rlen += static_cast<double>(r.size());
    for (std::size_t n = 1; n <= 4; ++n) {
      if (c.size() < n)
        continue;
      auto count_in = [n](const std::vector<std::string> &t,
                          const std::vector<std::string> &src, std::size_t at) {
        double cnt = 0;
        for (std::size_t i = 0; i + n <= t.size(); ++i)
          cnt += std::equal(t.begin() + static_cast<long>(i),
                            t.begin() + static_cast<long>(i + n),
                            src.begin() + static_cast<long>(at));
        return cnt;
      };
      for (std::size_t i = 0; i + n <= c.size(); ++i) {
        double in_c = count_in(c, c, i), in_r = count_in(r, c, i);
        match[n - 1] += std::min(in_r / in_c, 1.0);
        total[n - 1] += 1;
      }
    }
  }
  if (clen == 0)
    return rlen == 0 ? 1.0 : 0.0;
  double prod = 1;
  for (int n = 0; n < 4; ++n)
    prod *= (match[n] + 1e-9) / (total[n] + 1e-9);
  double bp = clen > rlen ? 1.0 : std::exp(1.0 - rlen / clen);
  return bp * std::pow(prod, 0.25);
}

inline std::string random_sentence(std::mt19937_64 &rng, std::size_t max_len) {
  static const char *vocab[] = { "the", "molecule", "is", "an", "acid", "with",
                                 "a", "ring", "and", "two", "methyl", "groups" };
  std::size_t len = 1 + uniform_below(rng, max_len);
  std::string s;
  for (std::size_t i = 0; i < len; ++i) {
    if (i)
      s += ' ';
    s += vocab[uniform_below(rng, std::size(vocab))];
  }
  return s;
}

// Groups for a tabular policy with completions sampled from the old slot.
inline std::vector<RolloutGroup> sampled_groups(const TabularPolicy &pol, int group,
                                                std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<RolloutGroup> out;
  for (int p = 0; p < pol.num_prompts(); ++p) {
    RolloutGroup g;
    g.prompt_id = "p" + std::to_string(p);
    g.prompt = pol.prompts()[static_cast<std::size_t>(p)];
    g.snapshot_id = pol.snapshot_id();
    for (const auto &d: pol.sample(p, group, seed + static_cast<std::uint64_t>(p))) {
      Completion c = pol.to_completion(p, d);
      c.reward = 4.0 * uniform01(rng());
      g.completions.push_back(std::move(c));
    }
    fill_advantages(g);
    out.push_back(std::move(g));
  }
  return out;
}

// Largest |analytic - central difference| over all current logits.
inline double gradient_check(TabularPolicy &pol, const std::vector<RolloutGroup> &groups,
                             const GrpoConfig &cfg, double h = 1e-5) {
  Eigen::MatrixXd g = pol.gradient(groups, cfg);
  double worst = 0;
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
      double keep = pol.logits()(i, j);
      pol.logits()(i, j) = keep + h;
      double up = pol.objective(groups, cfg);
      pol.logits()(i, j) = keep - h;
      double down = pol.objective(groups, cfg);
      pol.logits()(i, j) = keep;
      worst = std::max(worst, std::abs((up - down) / (2 * h) - g(i, j)));
    }
  }
  return worst;
}

// A 3-state / 4-action policy whose current, old and reference logits all
// differ, so the clip and KL terms are both active.
inline TabularPolicy perturbed_policy(std::uint64_t seed, int length = 1) {
  TabularPolicy pol({ "s0", "s1", "s2" }, { "a", "b", "c", "d" }, length);
  std::mt19937_64 rng(seed);
  auto fill = [&](double scale) {
    for (Eigen::Index i = 0; i < pol.logits().rows(); ++i)
      for (Eigen::Index j = 0; j < pol.logits().cols(); ++j)
        pol.logits()(i, j) = scale * (2 * uniform01(rng()) - 1);
  };
  fill(1.0);
  pol.set_reference();
  fill(1.0);
  pol.refresh_old();
  for (Eigen::Index i = 0; i < pol.logits().rows(); ++i)
    for (Eigen::Index j = 0; j < pol.logits().cols(); ++j)
      pol.logits()(i, j) += 0.3 * (2 * uniform01(rng()) - 1);
  return pol;
}

}  // namespace rtmol::oracle

#endif  // RTMOL_TESTS_ORACLES_H_
