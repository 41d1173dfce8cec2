//
// rtmol - Copyright 2026 The rtmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <deque>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "doctest.h"

#include "rtmol/chem/smiles.h"
#include "rtmol/fingerprints/fingerprints.h"
#include "rtmol/fingerprints/hash.h"
#include "rtmol/random.h"
#include "test_util.h"

using namespace rtmol;
using rtmol::test::error_of;

namespace {

const std::vector<std::string> kSample = {
  "C", "CCO", "CC(=O)O", "c1ccccc1O", "C1CC2CCC1C2", "CN1C=NC2=C1C(=O)N(C(=O)N2C)C",
  "[Na+].[Cl-]", "C[N+](C)(C)C", "ClC(Cl)(Cl)Cl", "c1ccc2ccccc2c1", "NCC(=O)O",
  "C#N", "OCC1OC(O)C(O)C(O)C1O", "CCCCCCCCCC", "c1ccncc1", "S=C=S",
};

std::vector<int> bfs_distance(const Molecule &m, int from) {
  std::vector<int> d(static_cast<std::size_t>(m.num_atoms()), -1);
  std::deque<int> q{ from };
  d[from] = 0;
  while (!q.empty()) {
    int u = q.front();
    q.pop_front();
    for (const Neighbor &nb: m.neighbors(u)) {
      if (d[nb.atom] < 0) {
        d[nb.atom] = d[u] + 1;
        q.push_back(nb.atom);
      }
    }
  }
  return d;
}

// Counts distinct circular environments with string labels: an atom's
// radius-r label is its radius-(r-1) label plus the sorted neighbour labels;
// it counts only when the bonds within reach grew.
std::size_t morgan_oracle_count(const Molecule &m, int radius) {
  const int n = m.num_atoms();
  std::vector<std::string> lab(n);
  std::set<std::string> seen;
  for (int a = 0; a < n; ++a) {
    const Atom &at = m.atom(a);
    lab[a] = "(" + std::to_string(at.atomic_number) + "," + std::to_string(m.degree(a))
             + "," + std::to_string(at.total_h()) + "," + std::to_string(at.formal_charge)
             + "," + std::to_string(m.atom_in_ring(a)) + ")";
    seen.insert("0" + lab[a]);
  }
  std::vector<std::vector<int>> dist(n);
  for (int a = 0; a < n; ++a)
    dist[a] = bfs_distance(m, a);
  auto reach = [&](int a, int r) {
    std::set<int> bonds;
    for (int e = 0; e < m.num_bonds(); ++e) {
      int du = dist[a][m.bond(e).atoms[0]], dv = dist[a][m.bond(e).atoms[1]];
      if ((du >= 0 && du <= r - 1) || (dv >= 0 && dv <= r - 1))
        bonds.insert(e);
    }
    return bonds;
  };
  for (int r = 1; r <= radius; ++r) {
    std::vector<std::string> next(n);
    for (int a = 0; a < n; ++a) {
      std::vector<std::string> parts;
      for (const Neighbor &nb: m.neighbors(a))
        parts.push_back(std::to_string(static_cast<int>(m.bond(nb.bond).order)) + lab[nb.atom]);
      std::sort(parts.begin(), parts.end());
      next[a] = "[" + lab[a];
      for (const std::string &p: parts)
        next[a] += p;
      next[a] += "]";
      if (reach(a, r) != reach(a, r - 1))
        seen.insert(std::to_string(r) + next[a]);
    }
    lab = std::move(next);
  }
  return seen.size();
}

// Breadth-first enumeration of simple paths as strings; a path and its
// reverse are one feature.
std::size_t path_oracle_count(const Molecule &m, int max_len) {
  auto atom_s = [&](int a) {
    return std::to_string(m.atom(a).atomic_number) + (m.atom(a).is_aromatic ? "a" : "");
  };
  std::set<std::pair<std::string, std::string>> keys;
  std::deque<std::vector<int>> q;
  for (int a = 0; a < m.num_atoms(); ++a)
    q.push_back({ a });
  while (!q.empty()) {
    std::vector<int> p = q.front();
    q.pop_front();
    if (p.size() > 1) {
      std::vector<std::string> toks;
      for (std::size_t i = 0; i < p.size(); ++i) {
        if (i)
          toks.push_back("-" + std::to_string(static_cast<int>(
                                   m.bond(m.find_bond(p[i - 1], p[i])).order)) + "-");
        toks.push_back(atom_s(p[i]));
      }
      std::string f, r;
      for (auto &t: toks)
        f += t + " ";
      for (auto it = toks.rbegin(); it != toks.rend(); ++it)
        r += *it + " ";
      keys.insert(std::minmax(f, r));
    }
    if (static_cast<int>(p.size()) - 1 == max_len)
      continue;
    for (const Neighbor &nb: m.neighbors(p.back())) {
      if (std::find(p.begin(), p.end(), nb.atom) != p.end())
        continue;
      auto ext = p;
      ext.push_back(nb.atom);
      q.push_back(std::move(ext));
    }
  }
  return keys.size();
}

}  // namespace

TEST_SUITE("fingerprints") {

TEST_CASE("hash mixer is deterministic and domain separated") {
  CHECK(hash_words(1, { 2, 3 }) == hash_words(1, { 2, 3 }));
  CHECK(hash_words(1, { 2, 3 }) != hash_words(2, { 2, 3 }));
  CHECK(hash_words(1, { 2, 3 }) != hash_words(1, { 3, 2 }));
  CHECK(mix64(0) != 0);
}

TEST_CASE("morgan counts match the circular-environment oracle") {
  CHECK(morgan_features(parse_smiles("CCO"), 2).size() == 8);
  for (const std::string &s: kSample) {
    Molecule m = parse_smiles(s);
    for (int r = 0; r <= 3; ++r) {
      INFO(s, " radius ", r);
      CHECK(morgan_features(m, r).size() == morgan_oracle_count(m, r));
    }
  }
}

TEST_CASE("morgan radius nesting and atom-order invariance") {
  std::mt19937_64 rng(3);
  for (const std::string &s: kSample) {
    Molecule m = parse_smiles(s);
    FeatureSet r1 = morgan_features(m, 1), r2 = morgan_features(m, 2);
    for (std::uint64_t id: r1.features())
      CHECK(r2.contains(id));
    std::vector<int> perm(static_cast<std::size_t>(m.num_atoms()));
    std::iota(perm.begin(), perm.end(), 0);
    seeded_shuffle(perm, rng);
    Molecule p = m.permuted(perm);
    CHECK(morgan_features(p, 2) == r2);
    CHECK(path_features(p) == path_features(m));
    CHECK(structural_keys(p) == structural_keys(m));
  }
}

TEST_CASE("path counts match the breadth-first oracle") {
  for (const std::string &s: kSample) {
    Molecule m = parse_smiles(s);
    for (int len: { 1, 3, 7 }) {
      INFO(s, " max_len ", len);
      CHECK(path_features(m, len).size() == path_oracle_count(m, len));
    }
  }
  CHECK(path_features(parse_smiles("C")).empty());
}

TEST_CASE("structural keys") {
  CHECK(structural_keys(parse_smiles("C")).features()
        == std::vector<std::uint64_t>{ 0, 23 });
  CHECK(structural_key_catalog().size() == kNumStructuralKeys);
  for (std::size_t i = 0; i < structural_key_catalog().size(); ++i)
    CHECK(structural_key_catalog()[i].id == static_cast<int>(i));
  FeatureSet phenol = structural_keys(parse_smiles("c1ccccc1O"));
  CHECK(phenol.contains(2));   // oxygen
  CHECK(phenol.contains(15));  // six-membered ring
  CHECK(phenol.contains(19));  // aromatic ring
  CHECK(phenol.contains(39));  // hydroxyl
  CHECK_FALSE(phenol.contains(1));
  FeatureSet acid = structural_keys(parse_smiles("CC(=O)O"));
  CHECK(acid.contains(33));  // carbonyl
  CHECK(acid.contains(44));  // carboxylic acid
  CHECK(structural_keys(parse_smiles("[Na+].[Cl-]")).contains(54));
}

TEST_CASE("catalog file matches the compiled catalog") {
  CHECK(test::slurp(test::source_dir() / "data" / "structural_keys.tsv")
        == structural_key_table());
}

TEST_CASE("tanimoto") {
  FeatureSet a(FingerprintFamily::kMorgan, 2, { 1, 2, 3 });
  FeatureSet b(FingerprintFamily::kMorgan, 2, { 2, 3, 4, 5 });
  FeatureSet e(FingerprintFamily::kMorgan, 2, {});
  CHECK(tanimoto(a, b) == doctest::Approx(2.0 / 5.0));
  CHECK(tanimoto(a, a) == 1.0);
  CHECK(tanimoto(e, e) == 1.0);
  CHECK(tanimoto(a, e) == 0.0);
  FeatureSet other(FingerprintFamily::kMorgan, 3, { 1 });
  FeatureSet path(FingerprintFamily::kPath, 2, { 1 });
  CHECK(error_of([&] { tanimoto(a, other); }) == ErrorCode::kFamilyMismatch);
  CHECK(error_of([&] { tanimoto(a, path); }) == ErrorCode::kFamilyMismatch);
}

TEST_CASE("feature sets are sorted and unique") {
  FeatureSet f(FingerprintFamily::kPath, 7, { 5, 1, 5, 3 });
  CHECK(f.features() == std::vector<std::uint64_t>{ 1, 3, 5 });
}

TEST_CASE("dump format round-trips") {
  FeatureSet f = morgan_features(parse_smiles("CC(=O)Oc1ccccc1C(=O)O"), 2);
  std::string d = dump_feature_set(f);
  CHECK(d.rfind("family morgan\nparam 2\n", 0) == 0);
  CHECK(parse_feature_dump(d) == f);
}

TEST_CASE("golden dumps") {
  // Regenerate with `rtmol fp --family F SMILES` if hashing changes on purpose.
  for (const char *fam: { "morgan", "path", "keys" }) {
    std::string golden = test::slurp(test::fixtures() / (std::string("aspirin.") + fam + ".txt"));
    REQUIRE(!golden.empty());
    Molecule m = parse_smiles("CC(=O)Oc1ccccc1C(=O)O");
    FeatureSet f = std::string(fam) == "morgan" ? morgan_features(m)
                   : std::string(fam) == "path" ? path_features(m)
                                                : structural_keys(m);
    INFO(fam);
    CHECK(dump_feature_set(f) == golden);
  }
}

}  // TEST_SUITE
