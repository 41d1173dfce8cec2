//
// rtmol - Copyright 2026 The rtmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <array>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rtmol/chem/element.h"
#include "rtmol/chem/smiles.h"

namespace rtmol {
namespace {

template <class Key>
std::vector<int> dense_ranks(const std::vector<Key> &keys) {
  const int n = static_cast<int>(keys.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return keys[a] < keys[b]; });
  std::vector<int> ranks(n);
  int r = 0;
  for (int i = 0; i < n; ++i) {
    if (i > 0 && keys[order[i - 1]] < keys[order[i]])
      ++r;
    ranks[order[i]] = r;
  }
  return ranks;
}

int count_classes(const std::vector<int> &ranks) {
  return ranks.empty() ? 0 : *std::max_element(ranks.begin(), ranks.end()) + 1;
}

int bond_code(BondOrder o) {
  return static_cast<int>(o);
}

std::vector<int> refine(const Molecule &mol, std::vector<int> ranks) {
  const int n = mol.num_atoms();
  int classes = count_classes(ranks);
  using Key = std::pair<int, std::vector<std::pair<int, int>>>;
  while (true) {
    std::vector<Key> keys(n);
    for (int a = 0; a < n; ++a) {
      keys[a].first = ranks[a];
      for (const Neighbor &nb: mol.neighbors(a))
        keys[a].second.emplace_back(ranks[nb.atom],
                                    bond_code(mol.bond(nb.bond).order));
      std::sort(keys[a].second.begin(), keys[a].second.end());
    }
    std::vector<int> next = dense_ranks(keys);
    int next_classes = count_classes(next);
    ranks = std::move(next);
    if (next_classes == classes)
      break;
    classes = next_classes;
  }
  return ranks;
}

std::string atom_text(const Molecule &mol, int a) {
  const Atom &atom = mol.atom(a);
  const int z = atom.atomic_number;

  if (atom.formal_charge == 0 && !atom.isotope && is_organic_subset(z)
      && (!atom.is_aromatic || is_aromatic_organic(z))) {
    ImplicitValence iv =
        organic_implicit_valence(z, mol.bond_order_sum(a), atom.is_aromatic);
    if (iv.hydrogens == atom.total_h()) {
      std::string s(atom.element);
      if (atom.is_aromatic)
        s[0] = static_cast<char>(std::tolower(s[0]));
      return s;
    }
  }

  std::string s = "[";
  if (atom.isotope)
    s += std::to_string(*atom.isotope);
  std::string sym(atom.element);
  if (atom.is_aromatic)
    sym[0] = static_cast<char>(std::tolower(sym[0]));
  s += sym;
  int h = atom.total_h();
  if (h > 0) {
    s += 'H';
    if (h > 1)
      s += std::to_string(h);
  }
  if (atom.formal_charge != 0) {
    s += atom.formal_charge > 0 ? '+' : '-';
    int mag = std::abs(atom.formal_charge);
    if (mag > 1)
      s += std::to_string(mag);
  }
  s += ']';
  return s;
}

std::string bond_text(const Molecule &mol, int bond) {
  const Bond &b = mol.bond(bond);
  switch (b.order) {
  case BondOrder::kAromatic:
    return "";
  case BondOrder::kSingle:
    return mol.atom(b.atoms[0]).is_aromatic && mol.atom(b.atoms[1]).is_aromatic
               ? "-"
               : "";
  case BondOrder::kDouble:
    return "=";
  case BondOrder::kTriple:
    return "#";
  }
  return "";
}

std::string ring_label(int digit) {
  if (digit < 10)
    return std::to_string(digit);
  return "%" + std::to_string(digit);
}

class FragmentWriter {
public:
  FragmentWriter(const Molecule &mol, std::span<const int> priority)
      : mol_(mol), priority_(priority), visited_(mol.num_atoms(), false),
        children_(mol.num_atoms()), openings_(mol.num_atoms()),
        closings_(mol.num_atoms()), ring_bond_(mol.num_bonds(), false),
        digit_of_bond_(mol.num_bonds(), -1) { }

  std::string write(int start) {
    discover(start, -1);
    std::string out;
    emit(start, out);
    return out;
  }

  bool visited(int a) const { return visited_[a]; }

private:
  std::vector<Neighbor> sorted_neighbors(int a) const {
    std::vector<Neighbor> nbs(mol_.neighbors(a).begin(),
                              mol_.neighbors(a).end());
    std::sort(nbs.begin(), nbs.end(), [&](const Neighbor &x, const Neighbor &y) {
      return priority_[x.atom] < priority_[y.atom];
    });
    return nbs;
  }

  void discover(int u, int parent_bond) {
    visited_[u] = true;
    for (const Neighbor &nb: sorted_neighbors(u)) {
      if (nb.bond == parent_bond)
        continue;
      if (visited_[nb.atom]) {
        if (!ring_bond_[nb.bond] && !is_tree_bond(nb.bond)) {
          ring_bond_[nb.bond] = true;
          openings_[nb.atom].push_back({ u, nb.bond });
          closings_[u].push_back({ nb.atom, nb.bond });
        }
        continue;
      }
      children_[u].push_back(nb);
      tree_bonds_.insert(nb.bond);
      discover(nb.atom, nb.bond);
    }
  }

  bool is_tree_bond(int bond) const { return tree_bonds_.count(bond) > 0; }

  int take_digit() {
    int d = 1;
    while (used_digits_.count(d))
      ++d;
    used_digits_.insert(d);
    return d;
  }

  void emit(int u, std::string &out) {
    out += atom_text(mol_, u);

    auto by_priority = [&](const Neighbor &x, const Neighbor &y) {
      return priority_[x.atom] < priority_[y.atom];
    };
    std::vector<Neighbor> closes = closings_[u];
    std::sort(closes.begin(), closes.end(), by_priority);
    std::vector<int> released;
    for (const Neighbor &c: closes) {
      int d = digit_of_bond_[c.bond];
      out += bond_text(mol_, c.bond);
      out += ring_label(d);
      released.push_back(d);
    }

    std::vector<Neighbor> opens = openings_[u];
    std::sort(opens.begin(), opens.end(), by_priority);
    for (const Neighbor &o: opens) {
      int d = take_digit();
      digit_of_bond_[o.bond] = d;
      out += ring_label(d);
    }
    for (int d: released)
      used_digits_.erase(d);

    const auto &kids = children_[u];
    for (std::size_t i = 0; i < kids.size(); ++i) {
      bool branch = i + 1 < kids.size();
      if (branch)
        out += '(';
      out += bond_text(mol_, kids[i].bond);
      emit(kids[i].atom, out);
      if (branch)
        out += ')';
    }
  }

  const Molecule &mol_;
  std::span<const int> priority_;
  std::vector<bool> visited_;
  std::vector<std::vector<Neighbor>> children_;
  std::vector<std::vector<Neighbor>> openings_;
  std::vector<std::vector<Neighbor>> closings_;
  std::vector<bool> ring_bond_;
  std::set<int> tree_bonds_;
  std::vector<int> digit_of_bond_;
  std::set<int> used_digits_;
};

std::vector<std::string> fragment_strings(const Molecule &mol,
                                          std::span<const int> priority) {
  std::vector<int> order(mol.num_atoms());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return priority[a] < priority[b]; });

  FragmentWriter writer(mol, priority);
  std::vector<std::string> parts;
  for (int a: order) {
    if (writer.visited(a))
      continue;
    parts.push_back(writer.write(a));
  }
  return parts;
}

}  // namespace

std::vector<int> canonical_ranks(const Molecule &mol) {
  const int n = mol.num_atoms();
  std::vector<std::array<int, 7>> seeds(n);
  for (int a = 0; a < n; ++a) {
    const Atom &atom = mol.atom(a);
    seeds[a] = { mol.degree(a),      atom.atomic_number,
                 atom.isotope.value_or(0), atom.formal_charge,
                 atom.total_h(),     atom.is_aromatic ? 1 : 0,
                 mol.atom_in_ring(a) ? 1 : 0 };
  }
  std::vector<int> ranks = refine(mol, dense_ranks(seeds));

  while (count_classes(ranks) < n) {
    // Break the lowest tied class by promoting its first member.
    std::vector<int> members(count_classes(ranks), 0);
    for (int r: ranks)
      ++members[r];
    int tied = static_cast<int>(
        std::find_if(members.begin(), members.end(),
                     [](int c) { return c > 1; })
        - members.begin());
    int chosen = static_cast<int>(std::find(ranks.begin(), ranks.end(), tied)
                                  - ranks.begin());
    std::vector<std::pair<int, int>> keys(n);
    for (int a = 0; a < n; ++a)
      keys[a] = { ranks[a], a == chosen ? 0 : 1 };
    ranks = refine(mol, dense_ranks(keys));
  }
  return ranks;
}

std::string write_smiles(const Molecule &mol, std::span<const int> priority) {
  std::string out;
  for (const std::string &part: fragment_strings(mol, priority)) {
    if (!out.empty())
      out += '.';
    out += part;
  }
  return out;
}

std::string canonical_smiles(const Molecule &mol) {
  std::vector<int> ranks = canonical_ranks(mol);
  std::vector<std::string> parts = fragment_strings(mol, ranks);
  std::sort(parts.begin(), parts.end());
  std::string out;
  for (const std::string &part: parts) {
    if (!out.empty())
      out += '.';
    out += part;
  }
  return out;
}

std::string canonical_smiles(std::string_view text) {
  return canonical_smiles(parse_smiles(text));
}

std::string random_smiles(const Molecule &mol, std::uint64_t seed) {
  std::vector<int> priority(mol.num_atoms());
  std::iota(priority.begin(), priority.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(priority.begin(), priority.end(), rng);
  return write_smiles(mol, priority);
}

}  // namespace rtmol
