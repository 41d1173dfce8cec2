//
// rtmol - Copyright 2026 The rtmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <string>

#include "rtmol/chem/element.h"
#include "rtmol/chem/smiles.h"
#include "rtmol/chem/validity.h"
#include "rtmol/error.h"

namespace rtmol {
namespace {

std::string charged_label(const Atom &atom) {
  std::string label = atom.element;
  if (atom.formal_charge > 0)
    label += std::string(atom.formal_charge, '+');
  else if (atom.formal_charge < 0)
    label += std::string(-atom.formal_charge, '-');
  return label;
}

}  // namespace

ValidityReport check_validity(const Molecule &mol) {
  ValidityReport report;
  std::vector<bool> unkekulized(mol.num_atoms(), false);
  for (int a: mol.unkekulized_atoms())
    unkekulized[a] = true;

  for (const Atom &atom: mol.atoms()) {
    if (unkekulized[atom.index]) {
      report.failures.push_back(
          { atom.index, "aromatic system cannot be kekulized" });
      continue;
    }
    if (std::binary_search(mol.acyclic_aromatic_atoms().begin(),
                           mol.acyclic_aromatic_atoms().end(), atom.index)) {
      report.failures.push_back({ atom.index, "non-ring atom marked aromatic" });
      continue;
    }
    int max_valence = max_allowed_valence(atom.atomic_number,
                                          atom.formal_charge);
    if (max_valence < 0)
      continue;
    int valence = mol.kekule_valence(atom.index) + atom.total_h();
    if (valence > max_valence) {
      report.failures.push_back(
          { atom.index, "valence " + std::to_string(valence) + " > max "
                            + std::to_string(max_valence) + " for "
                            + charged_label(atom) });
    }
  }
  report.is_valid = report.failures.empty();
  return report;
}

CheckedMolecule parse_and_check(std::string_view text) {
  CheckedMolecule out;
  try {
    out.molecule = parse_smiles(text);
  } catch (const Error &e) {
    out.report.is_valid = false;
    out.report.failures.push_back({ -1, e.what() });
    return out;
  }
  out.report = check_validity(*out.molecule);
  return out;
}

ValidityReport check_validity(std::string_view text) {
  return parse_and_check(text).report;
}

}  // namespace rtmol
