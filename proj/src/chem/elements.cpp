//
// rtmol - Copyright 2026 The rtmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "rtmol/chem/element.h"

#include <algorithm>
#include <array>
#include <cstdlib>

namespace rtmol {
namespace {

constexpr std::array<std::string_view, 119> kSymbols = {
  "",   "H",  "He", "Li", "Be", "B",  "C",  "N",  "O",  "F",  "Ne", "Na",
  "Mg", "Al", "Si", "P",  "S",  "Cl", "Ar", "K",  "Ca", "Sc", "Ti", "V",
  "Cr", "Mn", "Fe", "Co", "Ni", "Cu", "Zn", "Ga", "Ge", "As", "Se", "Br",
  "Kr", "Rb", "Sr", "Y",  "Zr", "Nb", "Mo", "Tc", "Ru", "Rh", "Pd", "Ag",
  "Cd", "In", "Sn", "Sb", "Te", "I",  "Xe", "Cs", "Ba", "La", "Ce", "Pr",
  "Nd", "Pm", "Sm", "Eu", "Gd", "Tb", "Dy", "Ho", "Er", "Tm", "Yb", "Lu",
  "Hf", "Ta", "W",  "Re", "Os", "Ir", "Pt", "Au", "Hg", "Tl", "Pb", "Bi",
  "Po", "At", "Rn", "Fr", "Ra", "Ac", "Th", "Pa", "U",  "Np", "Pu", "Am",
  "Cm", "Bk", "Cf", "Es", "Fm", "Md", "No", "Lr", "Rf", "Db", "Sg", "Bh",
  "Hs", "Mt", "Ds", "Rg", "Cn", "Nh", "Fl", "Mc", "Lv", "Ts", "Og",
};

constexpr int kB = 5, kC = 6, kN = 7, kO = 8, kF = 9, kP = 15, kS = 16,
              kCl = 17, kBr = 35, kI = 53, kH = 1, kAs = 33, kSe = 34;

std::vector<int> neutral_valences(int z) {
  switch (z) {
  case kH:
  case kF:
  case kCl:
  case kBr:
  case kI:
    return { 1 };
  case kB:
    return { 3 };
  case kC:
    return { 4 };
  case kN:
    return { 3 };
  case kO:
    return { 2 };
  case kP:
    return { 3, 5 };
  case kS:
    return { 2, 4, 6 };
  default:
    return {};
  }
}

}  // namespace

int atomic_number(std::string_view symbol) noexcept {
  for (std::size_t i = 1; i < kSymbols.size(); ++i) {
    if (kSymbols[i] == symbol)
      return static_cast<int>(i);
  }
  return 0;
}

std::string_view element_symbol(int z) noexcept {
  if (z <= 0 || z >= static_cast<int>(kSymbols.size()))
    return {};
  return kSymbols[z];
}

bool is_organic_subset(int z) noexcept {
  switch (z) {
  case kB:
  case kC:
  case kN:
  case kO:
  case kP:
  case kS:
  case kF:
  case kCl:
  case kBr:
  case kI:
    return true;
  default:
    return false;
  }
}

bool is_aromatic_organic(int z) noexcept {
  return z == kB || z == kC || z == kN || z == kO || z == kP || z == kS;
}

bool is_aromatic_capable(int z) noexcept {
  return is_aromatic_organic(z) || z == kSe || z == kAs;
}

std::vector<int> allowed_valences(int z, int charge) {
  std::vector<int> base = neutral_valences(z);
  if (charge == 0 || base.empty())
    return base;

  std::vector<int> shifted;
  if (z == kC) {
    // C+ is isoelectronic with B, C- with N: both trivalent.
    int v = 4 - std::abs(charge);
    if (v >= 0)
      shifted.push_back(v);
    return shifted;
  }
  if (z == kH) {
    if (std::abs(charge) == 1)
      shifted.push_back(0);
    return shifted;
  }
  for (int v: base) {
    int s = v + charge;
    if (s >= 0)
      shifted.push_back(s);
  }
  std::sort(shifted.begin(), shifted.end());
  shifted.erase(std::unique(shifted.begin(), shifted.end()), shifted.end());
  return shifted;
}

int max_allowed_valence(int z, int charge) {
  std::vector<int> vs = allowed_valences(z, charge);
  if (vs.empty())
    return -1;
  return vs.back();
}

ImplicitValence organic_implicit_valence(int z, int bond_sum, bool aromatic) {
  ImplicitValence result;
  std::vector<int> vs = neutral_valences(z);
  auto target = std::find_if(vs.begin(), vs.end(),
                             [&](int v) { return v >= bond_sum; });
  if (target == vs.end())
    return result;

  int free = *target - bond_sum;
  if (aromatic && free >= 1) {
    result.needs_pi = true;
    --free;
  }
  result.hydrogens = free;
  return result;
}

bool bracket_needs_pi(int z, int charge, int bond_sum, int hydrogens) {
  std::vector<int> vs = allowed_valences(z, charge);
  int with_pi = bond_sum + hydrogens + 1;
  return std::find(vs.begin(), vs.end(), with_pi) != vs.end();
}

}  // namespace rtmol
