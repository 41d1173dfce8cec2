//
// rtmol - Copyright 2026 The rtmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RTMOL_CHEM_VALIDITY_H_
#define RTMOL_CHEM_VALIDITY_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rtmol/chem/molecule.h"

namespace rtmol {

struct ValidityFailure {
  int atom = -1;  // -1 for whole-string failures (parse errors)
  std::string reason;
};

struct ValidityReport {
  bool is_valid = false;
  std::vector<ValidityFailure> failures;
};

/// Valence check against the permitted-valence table (see element.h).
/// Unparseable input reports a single failure whose reason starts with the
/// parser error name.
ValidityReport check_validity(std::string_view text);
ValidityReport check_validity(const Molecule &mol);

/// Parse + validity in one pass; the molecule is present whenever parsing
/// succeeded, even if the report is negative.
struct CheckedMolecule {
  std::optional<Molecule> molecule;
  ValidityReport report;
};
CheckedMolecule parse_and_check(std::string_view text);

}  // namespace rtmol

#endif  // RTMOL_CHEM_VALIDITY_H_
