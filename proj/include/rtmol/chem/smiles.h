//
// rtmol - Copyright 2026 The rtmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RTMOL_CHEM_SMILES_H_
#define RTMOL_CHEM_SMILES_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rtmol/chem/molecule.h"

namespace rtmol {

/// Parses a SMILES string into a normalized molecular graph.
///
/// Supported: organic-subset and bracket atoms (isotope, hydrogen count,
/// charge, atom class), bond symbols - = # : / \, branches, ring closures
/// (digits and %nn), lowercase aromatic atoms and dot-separated fragments.
/// Stereo markers are accepted and dropped with a note. Explicit neutral
/// hydrogen atoms are folded into their neighbour's hydrogen count.
///
/// After the graph is read, aromatic input is kekulized and rings with a
/// 4n+2 pi count over sp2 C/N/O/S atoms are marked aromatic, so Kekule and
/// aromatic spellings of the same compound produce the same graph.
///
/// Throws Error with kEmptyInput, kUnclosedRing, kUnbalancedParenthesis,
/// kUnknownToken or kInvalidBond.
Molecule parse_smiles(std::string_view text);

/// Canonical atom ranks (a permutation of 0..n-1) from iterative invariant
/// refinement with deterministic tie breaking.
std::vector<int> canonical_ranks(const Molecule &mol);

/// Writes SMILES with a depth-first traversal guided by `priority`
/// (lower value visited first). Fragments are emitted in order of their
/// lowest-priority atom.
std::string write_smiles(const Molecule &mol, std::span<const int> priority);

/// Deterministic canonical SMILES; fragments are sorted by their canonical
/// strings.
std::string canonical_smiles(const Molecule &mol);
std::string canonical_smiles(std::string_view text);

/// A valid but non-canonical rendering with a traversal order drawn from
/// `seed`. Used to exercise atom-order invariance.
std::string random_smiles(const Molecule &mol, std::uint64_t seed);

}  // namespace rtmol

#endif  // RTMOL_CHEM_SMILES_H_
