//
// rtmol - Copyright 2026 The rtmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rtmol/chem/smiles.h"
#include "rtmol/chem/validity.h"
#include "rtmol/error.h"
#include "rtmol/fingerprints/fingerprints.h"
#include "rtmol/grpo/grpo.h"
#include "rtmol/metrics/metrics.h"
#include "rtmol/theory/theory.h"

namespace py = pybind11;
using namespace rtmol;

namespace {

FingerprintFamily family_arg(const std::string &name) {
  auto f = parse_family(name);
  if (!f)
    throw py::value_error("unknown fingerprint family '" + name + "'");
  return *f;
}

FeatureSet features_of(const std::string &smiles, const std::string &family,
                       int param) {
  Molecule m = parse_smiles(smiles);
  switch (family_arg(family)) {
  case FingerprintFamily::kMorgan:
    return morgan_features(m, param < 0 ? kDefaultMorganRadius : param);
  case FingerprintFamily::kPath:
    return path_features(m, param < 0 ? kDefaultMaxPathLength : param);
  default:
    return structural_keys(m);
  }
}

py::dict score_dict(const ScoreBreakdown &s) {
  py::dict d;
  d["valid"] = s.valid;
  d["exact"] = s.exact;
  d["keys"] = s.t_keys;
  d["path"] = s.t_path;
  d["morgan"] = s.t_morgan;
  d["similarity"] = s.s_sim;
  d["total"] = s.total;
  return d;
}

}  // namespace

PYBIND11_MODULE(_rtmol, m) {
  m.doc() = "Round-trip molecule/text toolkit";
  static py::exception<Error> error(m, "RtmolError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p)
        std::rethrow_exception(p);
    } catch (const Error &e) {
      py::set_error(error, e.what());
    }
  });

  m.def("canonical_smiles",
        py::overload_cast<std::string_view>(&canonical_smiles), py::arg("smiles"));
  m.def(
      "is_valid", [](const std::string &s) { return check_validity(s).is_valid; },
      py::arg("smiles"));
  m.def(
      "validity_failures",
      [](const std::string &s) {
        std::vector<std::string> out;
        for (const ValidityFailure &f: check_validity(s).failures)
          out.push_back(f.reason);
        return out;
      },
      py::arg("smiles"));
  m.def(
      "random_smiles",
      [](const std::string &s, std::uint64_t seed) {
        return random_smiles(parse_smiles(s), seed);
      },
      py::arg("smiles"), py::arg("seed"));
  m.def(
      "fingerprint",
      [](const std::string &s, const std::string &family, int param) {
        return features_of(s, family, param).features();
      },
      py::arg("smiles"), py::arg("family") = "morgan", py::arg("param") = -1);
  m.def(
      "similarity",
      [](const std::string &a, const std::string &b, const std::string &family) {
        return tanimoto(features_of(a, family, -1), features_of(b, family, -1));
      },
      py::arg("a"), py::arg("b"), py::arg("family") = "morgan");
  m.def(
      "score",
      [](const std::string &x, const std::string &xp) {
        return score_dict(reconstruction_score(x, xp));
      },
      py::arg("reference"), py::arg("candidate"));
  m.def(
      "group_advantages",
      [](const std::vector<double> &r) {
        Advantages a = group_advantages(r);
        return py::make_tuple(a.values, a.degenerate);
      },
      py::arg("rewards"));
  m.def("ppo_clip", &ppo_clip, py::arg("ratio"), py::arg("advantage"),
        py::arg("epsilon") = 0.2);
  m.def(
      "kl_estimate",
      [](const std::vector<double> &ref, const std::vector<double> &cur) {
        return kl_estimate(ref, cur);
      },
      py::arg("logp_ref"), py::arg("logp_cur"));
  m.def(
      "bleu",
      [](const std::vector<std::string> &c, const std::vector<std::string> &r) {
        return bleu(c, r);
      },
      py::arg("candidates"), py::arg("references"));
  m.def("meteor_lite", &meteor_lite, py::arg("candidate"), py::arg("reference"));
  m.def(
      "check_random_bound",
      [](std::uint64_t seed, int max_size) {
        BoundReport r = check_mi_bound(random_system(seed, max_size));
        py::dict d;
        d["mi"] = r.mi;
        d["ba_bound"] = r.ba_bound;
        d["mi_lower"] = r.mi_lower;
        d["holds"] = r.holds;
        return d;
      },
      py::arg("seed"), py::arg("max_size") = 6);
}
