//
// rtmol - Copyright 2026 The rtmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>

#include "rtmol/error.h"
#include "rtmol/metrics/metrics.h"

namespace rtmol {
namespace {

using NgramCounts = std::map<std::vector<std::string>, int>;

NgramCounts ngrams(const std::vector<std::string> &tokens, std::size_t n) {
  NgramCounts out;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i)
    ++out[std::vector<std::string>(tokens.begin() + i, tokens.begin() + i + n)];
  return out;
}

}  // namespace

std::vector<std::string> tokenize_text(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty())
      out.push_back(std::move(cur));
    cur.clear();
  };
  for (char ch: text) {
    auto c = static_cast<unsigned char>(ch);
    if (std::isspace(c)) {
      flush();
    } else if (std::ispunct(c)) {
      flush();
      out.emplace_back(1, ch);
    } else {
      cur += static_cast<char>(std::tolower(c));
    }
  }
  flush();
  return out;
}

double bleu(std::span<const std::string> candidates,
            std::span<const std::string> references) {
  if (candidates.size() != references.size())
    throw Error(ErrorCode::kLengthMismatch,
                "LengthMismatch: " + std::to_string(candidates.size())
                    + " candidates vs " + std::to_string(references.size())
                    + " references");
  if (candidates.empty())
    throw Error(ErrorCode::kEmptyCollection,
                "EmptyCollection: bleu needs at least one pair");

  double matches[4] = {}, totals[4] = {};
  double cand_len = 0, ref_len = 0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    auto c = tokenize_text(candidates[i]);
    auto r = tokenize_text(references[i]);
    cand_len += static_cast<double>(c.size());
    ref_len += static_cast<double>(r.size());
    for (std::size_t n = 1; n <= 4; ++n) {
      NgramCounts cc = ngrams(c, n), rc = ngrams(r, n);
      for (const auto &[g, count]: cc) {
        auto it = rc.find(g);
        matches[n - 1] += std::min(count, it == rc.end() ? 0 : it->second);
        totals[n - 1] += count;
      }
    }
  }
  if (cand_len == 0)
    return ref_len == 0 ? 1.0 : 0.0;

  double log_sum = 0;
  for (int n = 0; n < 4; ++n)
    log_sum += std::log((matches[n] + kBleuEpsilon) / (totals[n] + kBleuEpsilon));
  double bp = cand_len > ref_len ? 1.0 : std::exp(1.0 - ref_len / cand_len);
  return bp * std::exp(log_sum / 4.0);
}

double meteor_lite(std::string_view candidate, std::string_view reference) {
  auto c = tokenize_text(candidate);
  auto r = tokenize_text(reference);
  if (c.empty() || r.empty())
    return 0.0;

  std::vector<bool> used(r.size(), false);
  std::vector<int> align(c.size(), -1);
  int m = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (std::size_t j = 0; j < r.size(); ++j) {
      if (!used[j] && r[j] == c[i]) {
        used[j] = true;
        align[i] = static_cast<int>(j);
        ++m;
        break;
      }
    }
  }
  if (m == 0)
    return 0.0;

  int chunks = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (align[i] < 0)
      continue;
    bool continues = i > 0 && align[i - 1] >= 0 && align[i] == align[i - 1] + 1;
    if (!continues)
      ++chunks;
  }
  const double p = static_cast<double>(m) / static_cast<double>(c.size());
  const double rec = static_cast<double>(m) / static_cast<double>(r.size());
  const double fmean = 10.0 * p * rec / (rec + 9.0 * p);
  const double frag = static_cast<double>(chunks) / static_cast<double>(m);
  const double penalty = chunks == 1 ? 0.0 : 0.5 * frag * frag * frag;
  return fmean * (1.0 - penalty);
}

}  // namespace rtmol
