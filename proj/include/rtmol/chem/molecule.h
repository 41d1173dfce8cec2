//
// rtmol - Copyright 2026 The rtmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RTMOL_CHEM_MOLECULE_H_
#define RTMOL_CHEM_MOLECULE_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rtmol {

enum class BondOrder : std::uint8_t {
  kSingle = 1,
  kDouble = 2,
  kTriple = 3,
  kAromatic = 4,
};

struct Atom {
  std::string element;
  int atomic_number = 0;
  bool is_aromatic = false;
  int formal_charge = 0;
  // Set for bracket atoms only; organic-subset atoms use implicit_h.
  std::optional<int> explicit_h;
  std::optional<int> isotope;
  int implicit_h = 0;
  int index = 0;

  int total_h() const noexcept { return explicit_h.value_or(0) + implicit_h; }
};

struct Bond {
  std::array<int, 2> atoms {};
  BondOrder order = BondOrder::kSingle;
  // Localized order (1..3); aromatic bonds carry their Kekule assignment.
  int kekule_order = 1;

  int other(int atom) const noexcept {
    return atoms[0] == atom ? atoms[1] : atoms[0];
  }
};

struct Neighbor {
  int atom;
  int bond;
};

/// Immutable molecular graph. Construct through parse_smiles() or
/// Molecule::build(); accessors never mutate, so instances can be shared
/// freely across threads.
class Molecule {
public:
  Molecule() = default;

  /// Builds adjacency, rings (smallest set of smallest rings) and fragments.
  /// Atom indices are reassigned to match their position.
  static Molecule build(std::vector<Atom> atoms, std::vector<Bond> bonds,
                        std::vector<std::string> notes = {},
                        std::vector<int> unkekulized_atoms = {},
                        std::vector<int> acyclic_aromatic_atoms = {});

  const std::vector<Atom> &atoms() const noexcept { return atoms_; }
  const std::vector<Bond> &bonds() const noexcept { return bonds_; }
  const Atom &atom(int i) const { return atoms_[i]; }
  const Bond &bond(int i) const { return bonds_[i]; }
  int num_atoms() const noexcept { return static_cast<int>(atoms_.size()); }
  int num_bonds() const noexcept { return static_cast<int>(bonds_.size()); }

  std::span<const Neighbor> neighbors(int atom) const {
    return adjacency_[atom];
  }
  int degree(int atom) const {
    return static_cast<int>(adjacency_[atom].size());
  }
  /// Bond index joining a and b, or -1.
  int find_bond(int a, int b) const;

  /// Sum of bond orders with aromatic bonds counted as 1.
  int bond_order_sum(int atom) const;
  /// Sum of localized (Kekule) bond orders.
  int kekule_valence(int atom) const;

  const std::vector<std::vector<int>> &rings() const noexcept {
    return rings_;
  }
  bool atom_in_ring(int atom) const { return atom_ring_count_[atom] > 0; }
  int atom_ring_count(int atom) const { return atom_ring_count_[atom]; }
  bool bond_in_ring(int bond) const { return bond_in_ring_[bond]; }

  int num_fragments() const noexcept { return num_fragments_; }
  int fragment_of(int atom) const { return fragment_[atom]; }

  /// False when an aromatic system admits no Kekule structure.
  bool kekulized() const noexcept { return unkekulized_.empty(); }
  /// Aromatic atoms whose pi system could not be localized.
  /// Atoms written aromatic in the input that lie on no ring.
  const std::vector<int> &acyclic_aromatic_atoms() const noexcept {
    return acyclic_aromatic_;
  }
  const std::vector<int> &unkekulized_atoms() const noexcept {
    return unkekulized_;
  }
  const std::vector<std::string> &notes() const noexcept { return notes_; }

  /// Copy with atoms reordered: new atom i is old atom perm[i].
  Molecule permuted(std::span<const int> perm) const;

private:
  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::vector<std::vector<int>> rings_;
  std::vector<int> atom_ring_count_;
  std::vector<bool> bond_in_ring_;
  std::vector<int> fragment_;
  int num_fragments_ = 0;
  std::vector<int> unkekulized_;
  std::vector<int> acyclic_aromatic_;
  std::vector<std::string> notes_;
};

/// Smallest set of smallest rings via Horton candidates and GF(2)
/// elimination. Each ring lists its atoms in cyclic order. The number of
/// rings equals bonds - atoms + components.
std::vector<std::vector<int>>
find_sssr(int num_atoms, std::span<const Bond> bonds);

}  // namespace rtmol

#endif  // RTMOL_CHEM_MOLECULE_H_
