//
// rtmol - Copyright 2026 The rtmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <queue>
#include <utility>
#include <vector>

#include "rtmol/chem/molecule.h"

namespace rtmol {
namespace {

using EdgeSet = std::vector<std::uint64_t>;

void flip(EdgeSet &set, int edge) {
  set[edge / 64] ^= std::uint64_t { 1 } << (edge % 64);
}

bool test(const EdgeSet &set, int edge) {
  return (set[edge / 64] >> (edge % 64)) & 1;
}

bool is_zero(const EdgeSet &set) {
  return std::all_of(set.begin(), set.end(),
                     [](std::uint64_t w) { return w == 0; });
}

int lowest_bit(const EdgeSet &set) {
  for (std::size_t w = 0; w < set.size(); ++w) {
    if (set[w] != 0)
      return static_cast<int>(w * 64) + __builtin_ctzll(set[w]);
  }
  return -1;
}

void xor_into(EdgeSet &dst, const EdgeSet &src) {
  for (std::size_t w = 0; w < dst.size(); ++w)
    dst[w] ^= src[w];
}

struct Candidate {
  int length;
  EdgeSet edges;
};

std::vector<int> cycle_atoms(const EdgeSet &edges, std::span<const Bond> bonds,
                             int num_atoms) {
  std::vector<std::vector<int>> adj(num_atoms);
  int start = -1;
  for (int e = 0; e < static_cast<int>(bonds.size()); ++e) {
    if (!test(edges, e))
      continue;
    auto [a, b] = bonds[e].atoms;
    adj[a].push_back(b);
    adj[b].push_back(a);
    if (start < 0 || a < start)
      start = a;
    if (b < start)
      start = b;
  }
  std::vector<int> ring;
  if (start < 0)
    return ring;
  ring.push_back(start);
  int prev = start;
  int cur = std::min(adj[start][0], adj[start][1]);
  while (cur != start) {
    ring.push_back(cur);
    int next = adj[cur][0] == prev ? adj[cur][1] : adj[cur][0];
    prev = cur;
    cur = next;
  }
  return ring;
}

}  // namespace

std::vector<std::vector<int>> find_sssr(int num_atoms,
                                        std::span<const Bond> bonds) {
  const int m = static_cast<int>(bonds.size());
  std::vector<std::vector<std::pair<int, int>>> adj(num_atoms);
  for (int e = 0; e < m; ++e) {
    adj[bonds[e].atoms[0]].emplace_back(bonds[e].atoms[1], e);
    adj[bonds[e].atoms[1]].emplace_back(bonds[e].atoms[0], e);
  }

  // Components for the cyclomatic number.
  std::vector<int> comp(num_atoms, -1);
  int num_components = 0;
  for (int s = 0; s < num_atoms; ++s) {
    if (comp[s] >= 0)
      continue;
    std::queue<int> q;
    q.push(s);
    comp[s] = num_components;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (auto [v, e]: adj[u]) {
        if (comp[v] < 0) {
          comp[v] = num_components;
          q.push(v);
        }
      }
    }
    ++num_components;
  }
  const int nullity = m - num_atoms + num_components;
  std::vector<std::vector<int>> rings;
  if (nullity <= 0)
    return rings;

  const std::size_t words = (m + 63) / 64;
  std::vector<Candidate> candidates;

  // Horton candidates: for every root v and edge (x, y), the cycle formed by
  // the shortest paths v->x, v->y and the edge, when the paths meet only at v.
  std::vector<int> dist(num_atoms), parent_edge(num_atoms);
  for (int v = 0; v < num_atoms; ++v) {
    std::fill(dist.begin(), dist.end(), -1);
    std::fill(parent_edge.begin(), parent_edge.end(), -1);
    std::queue<int> q;
    dist[v] = 0;
    q.push(v);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (auto [w, e]: adj[u]) {
        if (dist[w] < 0) {
          dist[w] = dist[u] + 1;
          parent_edge[w] = e;
          q.push(w);
        }
      }
    }

    for (int e = 0; e < m; ++e) {
      auto [x, y] = bonds[e].atoms;
      if (dist[x] < 0 || dist[y] < 0)
        continue;
      if (parent_edge[x] == e || parent_edge[y] == e)
        continue;

      EdgeSet set(words, 0);
      std::vector<int> path_atoms;
      auto walk = [&](int from) {
        int cur = from;
        while (cur != v) {
          path_atoms.push_back(cur);
          int pe = parent_edge[cur];
          flip(set, pe);
          cur = bonds[pe].other(cur);
        }
      };
      walk(x);
      walk(y);
      std::sort(path_atoms.begin(), path_atoms.end());
      if (std::adjacent_find(path_atoms.begin(), path_atoms.end())
          != path_atoms.end())
        continue;
      flip(set, e);
      candidates.push_back({ dist[x] + dist[y] + 1, std::move(set) });
    }
  }

  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate &a, const Candidate &b) {
              if (a.length != b.length)
                return a.length < b.length;
              return a.edges < b.edges;
            });
  candidates.erase(std::unique(candidates.begin(), candidates.end(),
                               [](const Candidate &a, const Candidate &b) {
                                 return a.edges == b.edges;
                               }),
                   candidates.end());

  // Greedy selection with GF(2) elimination keeps the basis independent.
  std::vector<EdgeSet> basis;
  std::vector<int> pivots;
  for (const Candidate &c: candidates) {
    EdgeSet reduced = c.edges;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      if (test(reduced, pivots[i]))
        xor_into(reduced, basis[i]);
    }
    if (is_zero(reduced))
      continue;
    int pivot = lowest_bit(reduced);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      if (test(basis[i], pivot))
        xor_into(basis[i], reduced);
    }
    basis.push_back(std::move(reduced));
    pivots.push_back(pivot);
    rings.push_back(cycle_atoms(c.edges, bonds, num_atoms));
    if (static_cast<int>(rings.size()) == nullity)
      break;
  }
  return rings;
}

Molecule Molecule::build(std::vector<Atom> atoms, std::vector<Bond> bonds,
                         std::vector<std::string> notes,
                         std::vector<int> unkekulized_atoms,
                         std::vector<int> acyclic_aromatic_atoms) {
  Molecule mol;
  mol.atoms_ = std::move(atoms);
  mol.bonds_ = std::move(bonds);
  mol.notes_ = std::move(notes);
  mol.unkekulized_ = std::move(unkekulized_atoms);
  std::sort(mol.unkekulized_.begin(), mol.unkekulized_.end());
  mol.acyclic_aromatic_ = std::move(acyclic_aromatic_atoms);
  std::sort(mol.acyclic_aromatic_.begin(), mol.acyclic_aromatic_.end());

  const int n = mol.num_atoms();
  for (int i = 0; i < n; ++i)
    mol.atoms_[i].index = i;

  mol.adjacency_.assign(n, {});
  for (int e = 0; e < mol.num_bonds(); ++e) {
    auto [a, b] = mol.bonds_[e].atoms;
    mol.adjacency_[a].push_back({ b, e });
    mol.adjacency_[b].push_back({ a, e });
  }

  mol.rings_ = find_sssr(n, mol.bonds_);
  mol.atom_ring_count_.assign(n, 0);
  mol.bond_in_ring_.assign(mol.num_bonds(), false);
  for (const auto &ring: mol.rings_) {
    for (std::size_t i = 0; i < ring.size(); ++i) {
      int a = ring[i];
      int b = ring[(i + 1) % ring.size()];
      ++mol.atom_ring_count_[a];
      mol.bond_in_ring_[mol.find_bond(a, b)] = true;
    }
  }

  mol.fragment_.assign(n, -1);
  mol.num_fragments_ = 0;
  for (int s = 0; s < n; ++s) {
    if (mol.fragment_[s] >= 0)
      continue;
    std::vector<int> stack { s };
    mol.fragment_[s] = mol.num_fragments_;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (const Neighbor &nb: mol.adjacency_[u]) {
        if (mol.fragment_[nb.atom] < 0) {
          mol.fragment_[nb.atom] = mol.num_fragments_;
          stack.push_back(nb.atom);
        }
      }
    }
    ++mol.num_fragments_;
  }
  return mol;
}

int Molecule::find_bond(int a, int b) const {
  for (const Neighbor &nb: adjacency_[a]) {
    if (nb.atom == b)
      return nb.bond;
  }
  return -1;
}

int Molecule::bond_order_sum(int atom) const {
  int sum = 0;
  for (const Neighbor &nb: adjacency_[atom]) {
    BondOrder o = bonds_[nb.bond].order;
    sum += o == BondOrder::kAromatic ? 1 : static_cast<int>(o);
  }
  return sum;
}

int Molecule::kekule_valence(int atom) const {
  int sum = 0;
  for (const Neighbor &nb: adjacency_[atom])
    sum += bonds_[nb.bond].kekule_order;
  return sum;
}

Molecule Molecule::permuted(std::span<const int> perm) const {
  const int n = num_atoms();
  std::vector<int> inverse(n);
  std::vector<Atom> atoms(n);
  for (int i = 0; i < n; ++i) {
    atoms[i] = atoms_[perm[i]];
    inverse[perm[i]] = i;
  }
  std::vector<Bond> bonds = bonds_;
  for (Bond &b: bonds) {
    b.atoms = { inverse[b.atoms[0]], inverse[b.atoms[1]] };
  }
  std::vector<int> unkek, acyclic;
  for (int a: unkekulized_)
    unkek.push_back(inverse[a]);
  for (int a: acyclic_aromatic_)
    acyclic.push_back(inverse[a]);
  return build(std::move(atoms), std::move(bonds), notes_, std::move(unkek),
               std::move(acyclic));
}

}  // namespace rtmol
