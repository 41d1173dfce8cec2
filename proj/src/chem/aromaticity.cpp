//
// rtmol - Copyright 2026 The rtmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <set>
#include <vector>

#include "rtmol/chem/molecule.h"

#include "internal.h"

namespace rtmol::internal {
namespace {

constexpr long kMatchingBudget = 500000;

class PiMatcher {
public:
  PiMatcher(int num_atoms, const std::vector<Bond> &bonds,
            const std::vector<bool> &needs_pi)
      : bonds_(bonds), needs_pi_(needs_pi), adj_(num_atoms),
        mate_bond_(num_atoms, -1) {
    for (int e = 0; e < static_cast<int>(bonds.size()); ++e) {
      const Bond &b = bonds[e];
      if (b.order != BondOrder::kAromatic)
        continue;
      if (!needs_pi[b.atoms[0]] || !needs_pi[b.atoms[1]])
        continue;
      adj_[b.atoms[0]].push_back(e);
      adj_[b.atoms[1]].push_back(e);
    }
  }

  // Matches every pi atom of `component`; false when impossible or when
  // the search budget runs out.
  bool solve(const std::vector<int> &component) {
    budget_ = kMatchingBudget;
    return search(component);
  }

  int mate_bond(int atom) const { return mate_bond_[atom]; }
  const std::vector<int> &pi_bonds(int atom) const { return adj_[atom]; }

private:
  bool search(const std::vector<int> &component) {
    if (--budget_ < 0)
      return false;

    int best = -1;
    int best_options = 1 << 30;
    for (int a: component) {
      if (mate_bond_[a] >= 0)
        continue;
      int options = 0;
      for (int e: adj_[a]) {
        if (mate_bond_[bonds_[e].other(a)] < 0)
          ++options;
      }
      if (options < best_options) {
        best = a;
        best_options = options;
        if (options == 0)
          break;
      }
    }
    if (best < 0)
      return true;
    if (best_options == 0)
      return false;

    for (int e: adj_[best]) {
      int partner = bonds_[e].other(best);
      if (mate_bond_[partner] >= 0)
        continue;
      mate_bond_[best] = e;
      mate_bond_[partner] = e;
      if (search(component))
        return true;
      mate_bond_[best] = -1;
      mate_bond_[partner] = -1;
    }
    return false;
  }

  const std::vector<Bond> &bonds_;
  const std::vector<bool> &needs_pi_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> mate_bond_;
  long budget_ = 0;
};

// Pi electrons an atom donates to a ring it belongs to, or -1 when the atom
// cannot take part in an aromatic ring.
int pi_contribution(const Molecule &mol, int a) {
  const Atom &atom = mol.atom(a);
  if (!mol.atom_in_ring(a))
    return -1;
  const int z = atom.atomic_number;
  if (z != 6 && z != 7 && z != 8 && z != 16)
    return -1;

  int ring_double = 0, exo_double = 0, exo_partner = 0;
  for (const Neighbor &nb: mol.neighbors(a)) {
    int k = mol.bond(nb.bond).kekule_order;
    if (k >= 3)
      return -1;
    if (k == 2) {
      if (mol.bond_in_ring(nb.bond)) {
        ++ring_double;
      } else {
        ++exo_double;
        exo_partner = mol.atom(nb.atom).atomic_number;
      }
    }
  }

  if (ring_double == 1 && exo_double == 0)
    return 1;
  if (ring_double == 0 && exo_double == 1 && z == 6
      && (exo_partner == 7 || exo_partner == 8 || exo_partner == 16))
    return 0;
  if (ring_double != 0 || exo_double != 0)
    return -1;

  const int connections = mol.degree(a) + atom.total_h();
  const int q = atom.formal_charge;
  switch (z) {
  case 6:
    if (connections == 3 && q == -1)
      return 2;
    if (connections == 3 && q == 1)
      return 0;
    return -1;
  case 7:
    if (connections == 3 && q == 0)
      return 2;
    if (connections == 2 && q == -1)
      return 2;
    return -1;
  default:  // O, S
    if (connections == 2 && q == 0)
      return 2;
    return -1;
  }
}

bool huckel(const Molecule &mol, const std::vector<int> &contrib,
            const std::set<int> &atoms) {
  int electrons = 0;
  for (int a: atoms) {
    if (contrib[a] < 0)
      return false;
    electrons += contrib[a];
  }
  (void)mol;
  return electrons % 4 == 2;
}

std::set<int> ring_bonds(const Molecule &mol, const std::vector<int> &ring) {
  std::set<int> out;
  for (std::size_t i = 0; i < ring.size(); ++i)
    out.insert(mol.find_bond(ring[i], ring[(i + 1) % ring.size()]));
  return out;
}

// Atoms of the bond set when it forms one simple cycle; empty otherwise.
std::set<int> single_cycle_atoms(const Molecule &mol,
                                 const std::set<int> &bonds) {
  std::vector<int> deg(mol.num_atoms(), 0);
  std::set<int> atoms;
  for (int e: bonds) {
    for (int a: mol.bond(e).atoms) {
      ++deg[a];
      atoms.insert(a);
    }
  }
  for (int a: atoms) {
    if (deg[a] != 2)
      return {};
  }
  // Connected?
  std::set<int> seen { *atoms.begin() };
  std::vector<int> stack { *atoms.begin() };
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (const Neighbor &nb: mol.neighbors(u)) {
      if (bonds.count(nb.bond) && !seen.count(nb.atom)) {
        seen.insert(nb.atom);
        stack.push_back(nb.atom);
      }
    }
  }
  if (seen.size() != atoms.size())
    return {};
  return atoms;
}

}  // namespace

std::vector<int> kekulize(int num_atoms, std::vector<Bond> &bonds,
                          const std::vector<bool> &needs_pi) {
  PiMatcher matcher(num_atoms, bonds, needs_pi);

  std::vector<int> failed;
  std::vector<bool> seen(num_atoms, false);
  for (int s = 0; s < num_atoms; ++s) {
    if (!needs_pi[s] || seen[s])
      continue;
    std::vector<int> component;
    std::vector<int> stack { s };
    seen[s] = true;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      component.push_back(u);
      for (int e: matcher.pi_bonds(u)) {
        int v = bonds[e].other(u);
        if (!seen[v]) {
          seen[v] = true;
          stack.push_back(v);
        }
      }
    }
    std::sort(component.begin(), component.end());
    if (!matcher.solve(component))
      failed.insert(failed.end(), component.begin(), component.end());
  }

  for (int e = 0; e < static_cast<int>(bonds.size()); ++e) {
    Bond &b = bonds[e];
    if (b.order != BondOrder::kAromatic)
      continue;
    bool matched = matcher.mate_bond(b.atoms[0]) == e;
    b.kekule_order = matched ? 2 : 1;
  }
  // Atoms of failed systems keep whatever partial assignment the search left;
  // reset them to single bonds.
  if (!failed.empty()) {
    std::vector<bool> bad(num_atoms, false);
    for (int a: failed)
      bad[a] = true;
    for (Bond &b: bonds) {
      if (b.order == BondOrder::kAromatic
          && (bad[b.atoms[0]] || bad[b.atoms[1]]))
        b.kekule_order = 1;
    }
  }
  std::sort(failed.begin(), failed.end());
  return failed;
}

Molecule normalize_aromaticity(const Molecule &mol) {
  if (!mol.kekulized())
    return mol;

  const int n = mol.num_atoms();
  std::vector<int> contrib(n);
  for (int a = 0; a < n; ++a)
    contrib[a] = pi_contribution(mol, a);

  std::vector<bool> aromatic_atom(n, false);
  std::vector<bool> aromatic_bond(mol.num_bonds(), false);
  auto mark = [&](const std::set<int> &bonds) {
    for (int e: bonds) {
      aromatic_bond[e] = true;
      aromatic_atom[mol.bond(e).atoms[0]] = true;
      aromatic_atom[mol.bond(e).atoms[1]] = true;
    }
  };

  const auto &rings = mol.rings();
  std::vector<std::set<int>> bond_sets;
  for (const auto &ring: rings) {
    bond_sets.push_back(ring_bonds(mol, ring));
    std::set<int> atoms(ring.begin(), ring.end());
    if (huckel(mol, contrib, atoms))
      mark(bond_sets.back());
  }

  // Two fused rings may be aromatic only as a whole (azulene).
  for (std::size_t i = 0; i < bond_sets.size(); ++i) {
    for (std::size_t j = i + 1; j < bond_sets.size(); ++j) {
      std::set<int> sym;
      std::set_symmetric_difference(bond_sets[i].begin(), bond_sets[i].end(),
                                    bond_sets[j].begin(), bond_sets[j].end(),
                                    std::inserter(sym, sym.begin()));
      if (sym.size() == bond_sets[i].size() + bond_sets[j].size())
        continue;  // not fused
      std::set<int> atoms = single_cycle_atoms(mol, sym);
      if (atoms.empty() || !huckel(mol, contrib, atoms))
        continue;
      mark(bond_sets[i]);
      mark(bond_sets[j]);
    }
  }

  std::vector<Atom> atoms = mol.atoms();
  std::vector<Bond> bonds = mol.bonds();
  std::vector<std::string> notes = mol.notes();
  bool dropped = false;
  std::vector<int> acyclic = mol.acyclic_aromatic_atoms();

  for (int a = 0; a < n; ++a) {
    bool flag = (atoms[a].is_aromatic || aromatic_atom[a]) && mol.atom_in_ring(a);
    if (atoms[a].is_aromatic && !mol.atom_in_ring(a)
        && std::find(acyclic.begin(), acyclic.end(), a) == acyclic.end())
      acyclic.push_back(a);
    if (atoms[a].is_aromatic && !flag)
      dropped = true;
    atoms[a].is_aromatic = flag;
  }
  for (int e = 0; e < mol.num_bonds(); ++e) {
    Bond &b = bonds[e];
    bool keep_input = b.order == BondOrder::kAromatic && mol.bond_in_ring(e)
                      && atoms[b.atoms[0]].is_aromatic
                      && atoms[b.atoms[1]].is_aromatic;
    if (aromatic_bond[e] || keep_input) {
      b.order = BondOrder::kAromatic;
    } else {
      b.order = static_cast<BondOrder>(b.kekule_order);
    }
  }
  std::vector<bool> has_aromatic_bond(n, false);
  for (const Bond &b: bonds) {
    if (b.order == BondOrder::kAromatic) {
      has_aromatic_bond[b.atoms[0]] = true;
      has_aromatic_bond[b.atoms[1]] = true;
    }
  }
  for (int a = 0; a < n; ++a) {
    if (atoms[a].is_aromatic && !has_aromatic_bond[a]) {
      atoms[a].is_aromatic = false;
      dropped = true;
    }
  }
  if (dropped)
    notes.emplace_back("aromatic flags outside rings removed");

  return Molecule::build(std::move(atoms), std::move(bonds), std::move(notes),
                         mol.unkekulized_atoms(), std::move(acyclic));
}

}  // namespace rtmol::internal
