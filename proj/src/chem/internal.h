//
// rtmol - Copyright 2026 The rtmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RTMOL_SRC_CHEM_INTERNAL_H_
#define RTMOL_SRC_CHEM_INTERNAL_H_

#include <vector>

#include "rtmol/chem/molecule.h"

namespace rtmol::internal {

/// Assigns kekule_order on every aromatic bond so each atom flagged in
/// `needs_pi` gets exactly one double bond. Returns the atoms of the pi
/// systems that admit no such assignment (empty on success).
std::vector<int> kekulize(int num_atoms, std::vector<Bond> &bonds,
                          const std::vector<bool> &needs_pi);

/// Marks 4n+2 rings over the Kekule structure as aromatic and merges the
/// result with the aromatic flags already present on the input. Aromatic
/// flags outside rings are dropped.
Molecule normalize_aromaticity(const Molecule &mol);

}  // namespace rtmol::internal

#endif  // RTMOL_SRC_CHEM_INTERNAL_H_
