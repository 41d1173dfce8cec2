//
// rtmol - Copyright 2026 The rtmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RTMOL_CHEM_ELEMENT_H_
#define RTMOL_CHEM_ELEMENT_H_

#include <string_view>
#include <vector>

namespace rtmol {

/// Atomic number for a symbol with SMILES capitalization ("C", "Cl", "Se").
/// Returns 0 for anything that is not an element symbol.
int atomic_number(std::string_view symbol) noexcept;

/// Inverse of atomic_number(); empty for out-of-range numbers.
std::string_view element_symbol(int atomic_number) noexcept;

/// B, C, N, O, P, S, F, Cl, Br, I: atoms that may be written without brackets.
bool is_organic_subset(int atomic_number) noexcept;

/// Elements that may be written in lowercase (aromatic) form inside brackets.
bool is_aromatic_capable(int atomic_number) noexcept;

/// Elements with a lowercase form outside brackets (b, c, n, o, p, s).
bool is_aromatic_organic(int atomic_number) noexcept;

/// Permitted total valences for an element carrying `charge`, ascending.
/// Neutral table: C 4, N 3, O 2, S {2,4,6}, P {3,5}, B 3, halogens 1, H 1.
/// Charged atoms use the valence of their isoelectronic neighbour, which for
/// N, O, S, P and the halogens is a shift by the charge (N+ 4, O- 1); carbon
/// drops to 3 for either sign. An empty result means the element is not
/// covered and carries no valence constraint.
std::vector<int> allowed_valences(int atomic_number, int charge);

/// Largest permitted valence, or -1 when unconstrained.
int max_allowed_valence(int atomic_number, int charge);

/// Implicit hydrogens for an organic-subset atom written without brackets.
/// `bond_sum` counts aromatic bonds as 1. For aromatic atoms one unit of
/// valence is reserved for the pi bond whenever the element can still
/// afford it.
struct ImplicitValence {
  int hydrogens = 0;
  bool needs_pi = false;
};
ImplicitValence organic_implicit_valence(int atomic_number, int bond_sum,
                                         bool aromatic);

/// Whether a bracket aromatic atom must receive a double bond in the
/// Kekule form, given its explicit hydrogens and charge.
bool bracket_needs_pi(int atomic_number, int charge, int bond_sum,
                      int hydrogens);

}  // namespace rtmol

#endif  // RTMOL_CHEM_ELEMENT_H_
