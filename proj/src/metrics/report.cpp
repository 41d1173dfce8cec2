//
// rtmol - Copyright 2026 The rtmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <cstdio>

#include "json.hpp"

#include "rtmol/error.h"
#include "rtmol/metrics/metrics.h"

namespace rtmol {

EvalReport aggregate_report(std::span<const RoundTripSample> samples) {
  if (samples.empty())
    throw Error(ErrorCode::kEmptyCollection,
                "EmptyCollection: aggregate_report needs at least one sample");
  EvalReport r;
  r.count = samples.size();
  std::size_t valid = 0, exact = 0;
  double keys = 0, path = 0, morgan = 0, total = 0;
  std::vector<std::string> cands, refs;
  double meteor_sum = 0;
  for (const RoundTripSample &s: samples) {
    total += s.score.total;
    if (s.score.valid) {
      ++valid;
      keys += s.score.t_keys;
      path += s.score.t_path;
      morgan += s.score.t_morgan;
    }
    exact += s.score.exact;
    if (s.reference_caption) {
      cands.push_back(s.caption);
      refs.push_back(*s.reference_caption);
      meteor_sum += meteor_lite(s.caption, *s.reference_caption);
    }
  }
  const double n = static_cast<double>(samples.size());
  r.exact_pct = 100.0 * static_cast<double>(exact) / n;
  r.validity_pct = 100.0 * static_cast<double>(valid) / n;
  if (valid > 0) {
    r.maccs = keys / static_cast<double>(valid);
    r.rdk = path / static_cast<double>(valid);
    r.morgan = morgan / static_cast<double>(valid);
  }
  r.mean_score = total / n;
  if (!cands.empty()) {
    r.bleu = bleu(cands, refs);
    r.meteor = meteor_sum / static_cast<double>(cands.size());
  }
  return r;
}

std::string report_text(const EvalReport &r) {
  std::string out;
  char buf[96];
  auto line = [&](const char *key, double v, const char *fmt) {
    std::snprintf(buf, sizeof buf, fmt, key, v);
    out += buf;
  };
  out += "count " + std::to_string(r.count) + "\n";
  line("exact_pct", r.exact_pct, "%s %.2f\n");
  line("validity_pct", r.validity_pct, "%s %.2f\n");
  line("maccs", r.maccs, "%s %.3f\n");
  line("rdk", r.rdk, "%s %.3f\n");
  line("morgan", r.morgan, "%s %.3f\n");
  if (r.bleu)
    line("bleu", *r.bleu, "%s %.4f\n");
  else
    out += "bleu n/a\n";
  if (r.meteor)
    line("meteor", *r.meteor, "%s %.4f\n");
  else
    out += "meteor n/a\n";
  line("mean_score", r.mean_score, "%s %.4f\n");
  return out;
}

std::string report_json(const EvalReport &r) {
  nlohmann::ordered_json j;
  j["count"] = r.count;
  j["exact_pct"] = r.exact_pct;
  j["validity_pct"] = r.validity_pct;
  j["maccs"] = r.maccs;
  j["rdk"] = r.rdk;
  j["morgan"] = r.morgan;
  j["bleu"] = r.bleu ? nlohmann::ordered_json(*r.bleu) : nullptr;
  j["meteor"] = r.meteor ? nlohmann::ordered_json(*r.meteor) : nullptr;
  j["mean_score"] = r.mean_score;
  return j.dump();
}

}  // namespace rtmol
