//
// rtmol - Copyright 2026 The rtmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <array>
#include <queue>
#include <vector>

#include "rtmol/fingerprints/fingerprints.h"

namespace rtmol {
namespace {

// Key ids are the feature identifiers; keep this table in sync with
// data/structural_keys.tsv (a unit test compares the two).
const std::vector<StructuralKey> kCatalog = {
  { 0, "carbon", "any carbon atom" },
  { 1, "nitrogen", "any nitrogen atom" },
  { 2, "oxygen", "any oxygen atom" },
  { 3, "sulfur", "any sulfur atom" },
  { 4, "phosphorus", "any phosphorus atom" },
  { 5, "fluorine", "any fluorine atom" },
  { 6, "chlorine", "any chlorine atom" },
  { 7, "bromine", "any bromine atom" },
  { 8, "iodine", "any iodine atom" },
  { 9, "boron", "any boron atom" },
  { 10, "other_element", "atom outside H B C N O F P S Cl Br I" },
  { 11, "halogen", "any F Cl Br or I atom" },
  { 12, "ring3", "ring of size 3" },
  { 13, "ring4", "ring of size 4" },
  { 14, "ring5", "ring of size 5" },
  { 15, "ring6", "ring of size 6" },
  { 16, "ring7", "ring of size 7" },
  { 17, "ring8", "ring of size 8" },
  { 18, "macrocycle", "ring of size 9 or more" },
  { 19, "aromatic_ring", "ring whose atoms are all aromatic" },
  { 20, "aromatic_heteroatom", "aromatic atom other than carbon" },
  { 21, "fused_atom", "atom shared by two or more rings" },
  { 22, "multiple_rings", "two or more rings" },
  { 23, "sp3_carbon", "non-aromatic carbon with only single bonds" },
  { 24, "sp2_carbon", "non-aromatic carbon with exactly one double bond" },
  { 25, "sp_carbon", "carbon with a triple bond or two double bonds" },
  { 26, "methyl", "carbon with one heavy neighbour and three H" },
  { 27, "chain_methylene", "acyclic carbon with two heavy neighbours and two H" },
  { 28, "tertiary_carbon", "sp3 carbon with exactly three heavy neighbours" },
  { 29, "quaternary_carbon", "carbon with four heavy neighbours" },
  { 30, "branch_point", "any atom with three or more heavy neighbours" },
  { 31, "alkene", "non-aromatic C=C" },
  { 32, "alkyne", "C#C" },
  { 33, "carbonyl", "C=O" },
  { 34, "imine", "C=N" },
  { 35, "nitrile", "C#N" },
  { 36, "n_oxo", "N=O" },
  { 37, "s_oxo", "S=O" },
  { 38, "p_oxo", "P=O" },
  { 39, "hydroxyl", "O with at least one H bonded to carbon" },
  { 40, "nh", "N with at least one H" },
  { 41, "sh", "S with at least one H" },
  { 42, "primary_amine", "non-aromatic N with two H and one carbon neighbour" },
  { 43, "ether", "non-aromatic O with two carbon neighbours" },
  { 44, "carboxylic_acid", "C(=O)O with the single-bonded O carrying H" },
  { 45, "amide", "C(=O)N" },
  { 46, "ester", "C(=O)OC" },
  { 47, "aryl_halide", "halogen bonded to an aromatic atom" },
  { 48, "alkyl_halide", "halogen bonded to a non-aromatic carbon" },
  { 49, "cation", "atom with positive formal charge" },
  { 50, "anion", "atom with negative formal charge" },
  { 51, "zwitterion", "both positive and negative atoms" },
  { 52, "aromatic_nitrogen", "aromatic nitrogen" },
  { 53, "aromatic_o_or_s", "aromatic oxygen or sulfur" },
  { 54, "multi_fragment", "more than one disconnected fragment" },
  { 55, "n_n_within_4", "two N atoms 1 to 4 bonds apart" },
  { 56, "n_o_within_4", "N and O atoms 1 to 4 bonds apart" },
  { 57, "o_o_within_4", "two O atoms 1 to 4 bonds apart" },
  { 58, "n_s_within_4", "N and S atoms 1 to 4 bonds apart" },
  { 59, "o_s_within_4", "O and S atoms 1 to 4 bonds apart" },
  { 60, "hetero_halogen_within_4",
    "N O S or P atom and a halogen 1 to 4 bonds apart" },
  { 61, "hetero_hetero_bond", "bond between two atoms that are not C or H" },
  { 62, "three_heteroatoms", "three or more atoms that are not C or H" },
  { 63, "twenty_heavy_atoms", "twenty or more heavy atoms" },
};

bool is_halogen(int z) { return z == 9 || z == 17 || z == 35 || z == 53; }
bool is_hetero(int z) { return z != 6 && z != 1; }

int heavy_degree(const Molecule &mol, int a) {
  int d = 0;
  for (const Neighbor &nb: mol.neighbors(a))
    d += mol.atom(nb.atom).atomic_number != 1;
  return d;
}

int total_h_count(const Molecule &mol, int a) {
  int h = mol.atom(a).total_h();
  for (const Neighbor &nb: mol.neighbors(a))
    h += mol.atom(nb.atom).atomic_number == 1;
  return h;
}

// Topological distances from `src`, capped at `limit` (-1 beyond).
std::vector<int> bfs(const Molecule &mol, int src, int limit) {
  std::vector<int> dist(mol.num_atoms(), -1);
  std::queue<int> q;
  dist[src] = 0;
  q.push(src);
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    if (dist[u] == limit)
      continue;
    for (const Neighbor &nb: mol.neighbors(u)) {
      if (dist[nb.atom] < 0) {
        dist[nb.atom] = dist[u] + 1;
        q.push(nb.atom);
      }
    }
  }
  return dist;
}

}  // namespace

const std::vector<StructuralKey> &structural_key_catalog() {
  return kCatalog;
}

std::string structural_key_table() {
  std::string out = "id\tname\tdescription\n";
  for (const StructuralKey &k: kCatalog) {
    out += std::to_string(k.id) + "\t" + std::string(k.name) + "\t"
           + std::string(k.description) + "\n";
  }
  return out;
}

FeatureSet structural_keys(const Molecule &mol) {
  std::array<bool, kNumStructuralKeys> on {};
  const int n = mol.num_atoms();
  int heteroatoms = 0, heavy = 0;
  bool pos = false, neg = false;

  for (int a = 0; a < n; ++a) {
    const Atom &atom = mol.atom(a);
    const int z = atom.atomic_number;
    if (z != 1)
      ++heavy;
    if (is_hetero(z))
      ++heteroatoms;
    switch (z) {
    case 1: break;
    case 6: on[0] = true; break;
    case 7: on[1] = true; break;
    case 8: on[2] = true; break;
    case 16: on[3] = true; break;
    case 15: on[4] = true; break;
    case 9: on[5] = true; break;
    case 17: on[6] = true; break;
    case 35: on[7] = true; break;
    case 53: on[8] = true; break;
    case 5: on[9] = true; break;
    default: on[10] = true; break;
    }
    if (is_halogen(z))
      on[11] = true;
    if (atom.is_aromatic && z != 6)
      on[20] = true;
    if (mol.atom_ring_count(a) >= 2)
      on[21] = true;
    if (atom.formal_charge > 0)
      pos = true;
    if (atom.formal_charge < 0)
      neg = true;
    if (atom.is_aromatic && z == 7)
      on[52] = true;
    if (atom.is_aromatic && (z == 8 || z == 16))
      on[53] = true;

    const int hd = heavy_degree(mol, a);
    const int h = total_h_count(mol, a);
    if (hd >= 3)
      on[30] = true;

    int doubles = 0, triples = 0;
    for (const Neighbor &nb: mol.neighbors(a)) {
      BondOrder o = mol.bond(nb.bond).order;
      doubles += o == BondOrder::kDouble;
      triples += o == BondOrder::kTriple;
    }

    if (z == 6) {
      if (!atom.is_aromatic && doubles == 0 && triples == 0) {
        on[23] = true;
        if (hd == 3)
          on[28] = true;
      }
      if (!atom.is_aromatic && doubles == 1 && triples == 0)
        on[24] = true;
      if (triples > 0 || doubles >= 2)
        on[25] = true;
      if (hd == 1 && h == 3)
        on[26] = true;
      if (!mol.atom_in_ring(a) && hd == 2 && h == 2)
        on[27] = true;
      if (hd == 4)
        on[29] = true;
    }
    if (z == 8 && h >= 1) {
      for (const Neighbor &nb: mol.neighbors(a)) {
        if (mol.atom(nb.atom).atomic_number == 6)
          on[39] = true;
      }
    }
    if (z == 7 && h >= 1)
      on[40] = true;
    if (z == 16 && h >= 1)
      on[41] = true;
    if (z == 7 && !atom.is_aromatic && h == 2 && hd == 1
        && mol.atom(mol.neighbors(a)[0].atom).atomic_number == 6)
      on[42] = true;
    if (z == 8 && !atom.is_aromatic && hd == 2) {
      bool both_c = true;
      for (const Neighbor &nb: mol.neighbors(a))
        both_c = both_c && mol.atom(nb.atom).atomic_number == 6;
      on[43] = on[43] || both_c;
    }

    // Carbonyl-centred groups.
    if (z == 6) {
      bool oxo = false;
      for (const Neighbor &nb: mol.neighbors(a)) {
        if (mol.bond(nb.bond).order == BondOrder::kDouble
            && mol.atom(nb.atom).atomic_number == 8)
          oxo = true;
      }
      if (oxo) {
        for (const Neighbor &nb: mol.neighbors(a)) {
          if (mol.bond(nb.bond).order != BondOrder::kSingle)
            continue;
          const int zn = mol.atom(nb.atom).atomic_number;
          if (zn == 7)
            on[45] = true;
          if (zn != 8)
            continue;
          if (total_h_count(mol, nb.atom) >= 1)
            on[44] = true;
          for (const Neighbor &nb2: mol.neighbors(nb.atom)) {
            if (nb2.atom != a && mol.atom(nb2.atom).atomic_number == 6)
              on[46] = true;
          }
        }
      }
    }

    if (is_halogen(z)) {
      for (const Neighbor &nb: mol.neighbors(a)) {
        const Atom &o = mol.atom(nb.atom);
        if (o.is_aromatic)
          on[47] = true;
        else if (o.atomic_number == 6)
          on[48] = true;
      }
    }
  }

  for (const Bond &b: mol.bonds()) {
    int z1 = mol.atom(b.atoms[0]).atomic_number;
    int z2 = mol.atom(b.atoms[1]).atomic_number;
    if (z1 > z2)
      std::swap(z1, z2);
    if (b.order == BondOrder::kDouble) {
      if (z1 == 6 && z2 == 6)
        on[31] = true;
      if (z1 == 6 && z2 == 8)
        on[33] = true;
      if (z1 == 6 && z2 == 7)
        on[34] = true;
      if (z1 == 7 && z2 == 8)
        on[36] = true;
      if (z1 == 8 && z2 == 16)
        on[37] = true;
      if (z1 == 8 && z2 == 15)
        on[38] = true;
    }
    if (b.order == BondOrder::kTriple) {
      if (z1 == 6 && z2 == 6)
        on[32] = true;
      if (z1 == 6 && z2 == 7)
        on[35] = true;
    }
    if (is_hetero(z1) && is_hetero(z2))
      on[61] = true;
  }

  for (const auto &ring: mol.rings()) {
    const std::size_t size = ring.size();
    if (size >= 3 && size <= 8)
      on[12 + size - 3] = true;
    else if (size >= 9)
      on[18] = true;
    if (std::all_of(ring.begin(), ring.end(),
                    [&](int a) { return mol.atom(a).is_aromatic; }))
      on[19] = true;
  }
  if (mol.rings().size() >= 2)
    on[22] = true;

  on[49] = pos;
  on[50] = neg;
  on[51] = pos && neg;
  on[54] = mol.num_fragments() > 1;
  on[62] = heteroatoms >= 3;
  on[63] = heavy >= 20;

  auto pair_key = [](int z1, int z2) -> int {
    if (z1 > z2)
      std::swap(z1, z2);
    if (z1 == 7 && z2 == 7) return 55;
    if (z1 == 7 && z2 == 8) return 56;
    if (z1 == 8 && z2 == 8) return 57;
    if (z1 == 7 && z2 == 16) return 58;
    if (z1 == 8 && z2 == 16) return 59;
    return -1;
  };
  auto polar = [](int z) { return z == 7 || z == 8 || z == 15 || z == 16; };
  for (int a = 0; a < n; ++a) {
    const int za = mol.atom(a).atomic_number;
    if (!polar(za) && !is_halogen(za))
      continue;
    std::vector<int> dist = bfs(mol, a, 4);
    for (int b = a + 1; b < n; ++b) {
      if (dist[b] < 1)
        continue;
      const int zb = mol.atom(b).atomic_number;
      int k = pair_key(za, zb);
      if (k >= 0)
        on[k] = true;
      if ((polar(za) && is_halogen(zb)) || (is_halogen(za) && polar(zb)))
        on[60] = true;
    }
  }

  std::vector<std::uint64_t> ids;
  for (int k = 0; k < kNumStructuralKeys; ++k) {
    if (on[k])
      ids.push_back(static_cast<std::uint64_t>(k));
  }
  return FeatureSet(FingerprintFamily::kStructuralKeys, 0, std::move(ids));
}

}  // namespace rtmol
