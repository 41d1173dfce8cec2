//
// rtmol - Copyright 2026 The rtmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rtmol/chem/element.h"
#include "rtmol/chem/smiles.h"
#include "rtmol/error.h"

#include "internal.h"

namespace rtmol {
namespace {

struct RingOpening {
  int atom;
  char bond_symbol;  // '\0' when none was written
  std::size_t position;
};

bool is_stereo_bond(char c) {
  return c == '/' || c == '\\';
}

bool is_bond_symbol(char c) {
  return c == '-' || c == '=' || c == '#' || c == ':' || is_stereo_bond(c);
}

class SmilesParser {
public:
  explicit SmilesParser(std::string_view text): text_(text) { }

  Molecule parse();

private:
  [[noreturn]] void fail(ErrorCode code, const std::string &what,
                         std::size_t pos) const {
    throw Error(code, std::string(error_name(code)) + ": " + what
                          + " at position " + std::to_string(pos) + " in \""
                          + std::string(text_) + "\"");
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }

  void parse_organic_atom();
  void parse_bracket_atom();
  void parse_ring_closure();
  int add_atom(Atom atom);
  void add_bond(int a, int b, char symbol, std::size_t pos);
  BondOrder resolve_order(int a, int b, char symbol);
  void note(std::string text) { notes_.push_back(std::move(text)); }

  std::string_view text_;
  std::size_t pos_ = 0;

  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
  std::vector<std::string> notes_;

  int prev_ = -1;
  char pending_bond_ = '\0';
  std::size_t pending_pos_ = 0;
  std::vector<std::pair<int, std::size_t>> branches_;
  std::map<int, RingOpening> open_rings_;
  bool noted_stereo_bond_ = false;
  bool noted_chirality_ = false;
};

int SmilesParser::add_atom(Atom atom) {
  atom.index = static_cast<int>(atoms_.size());
  atoms_.push_back(std::move(atom));
  int idx = atoms_.back().index;
  if (prev_ >= 0)
    add_bond(prev_, idx, pending_bond_, pending_pos_);
  pending_bond_ = '\0';
  prev_ = idx;
  return idx;
}

BondOrder SmilesParser::resolve_order(int a, int b, char symbol) {
  bool both_aromatic = atoms_[a].is_aromatic && atoms_[b].is_aromatic;
  switch (symbol) {
  case '=':
    return BondOrder::kDouble;
  case '#':
    return BondOrder::kTriple;
  case ':':
    if (!both_aromatic) {
      note("aromatic bond between non-aromatic atoms read as single");
      return BondOrder::kSingle;
    }
    return BondOrder::kAromatic;
  case '-':
    return BondOrder::kSingle;
  case '/':
  case '\\':
    if (!noted_stereo_bond_) {
      note("directional bonds read as single; double-bond stereo discarded");
      noted_stereo_bond_ = true;
    }
    return BondOrder::kSingle;
  default:
    return both_aromatic ? BondOrder::kAromatic : BondOrder::kSingle;
  }
}

void SmilesParser::add_bond(int a, int b, char symbol, std::size_t pos) {
  if (a == b)
    fail(ErrorCode::kInvalidBond, "atom bonded to itself", pos);
  for (const Bond &existing: bonds_) {
    if ((existing.atoms[0] == a && existing.atoms[1] == b)
        || (existing.atoms[0] == b && existing.atoms[1] == a))
      fail(ErrorCode::kInvalidBond, "duplicate bond between atoms", pos);
  }

  Bond bond;
  bond.atoms = { a, b };
  bond.order = resolve_order(a, b, symbol);
  bond.kekule_order =
      bond.order == BondOrder::kAromatic ? 1 : static_cast<int>(bond.order);
  bonds_.push_back(bond);
}

void SmilesParser::parse_organic_atom() {
  std::size_t start = pos_;
  char c = peek();
  Atom atom;

  if (c == 'C' && peek(1) == 'l') {
    atom.element = "Cl";
    pos_ += 2;
  } else if (c == 'B' && peek(1) == 'r') {
    atom.element = "Br";
    pos_ += 2;
  } else if (c == 'B' || c == 'C' || c == 'N' || c == 'O' || c == 'P'
             || c == 'S' || c == 'F' || c == 'I') {
    atom.element = std::string(1, c);
    ++pos_;
  } else if (c == 'b' || c == 'c' || c == 'n' || c == 'o' || c == 'p'
             || c == 's') {
    atom.element = std::string(1, static_cast<char>(std::toupper(c)));
    atom.is_aromatic = true;
    ++pos_;
  } else {
    fail(ErrorCode::kUnknownToken,
         std::string("unexpected character '") + c + "'", start);
  }

  atom.atomic_number = atomic_number(atom.element);
  add_atom(std::move(atom));
}

void SmilesParser::parse_bracket_atom() {
  std::size_t start = pos_;
  ++pos_;  // '['

  auto read_number = [&]() -> std::optional<int> {
    if (!std::isdigit(static_cast<unsigned char>(peek())))
      return std::nullopt;
    int value = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      value = value * 10 + (peek() - '0');
      if (value > 100000)
        fail(ErrorCode::kUnknownToken, "number too large in bracket atom",
             pos_);
      ++pos_;
    }
    return value;
  };

  Atom atom;
  atom.isotope = read_number();

  // Element symbol: aromatic two-letter forms first, then aromatic single
  // letters, then standard symbols (longest match).
  char c = peek();
  if (c == 's' && peek(1) == 'e') {
    atom.element = "Se";
    atom.is_aromatic = true;
    pos_ += 2;
  } else if (c == 'a' && peek(1) == 's') {
    atom.element = "As";
    atom.is_aromatic = true;
    pos_ += 2;
  } else if (c == 'b' || c == 'c' || c == 'n' || c == 'o' || c == 'p'
             || c == 's') {
    atom.element = std::string(1, static_cast<char>(std::toupper(c)));
    atom.is_aromatic = true;
    ++pos_;
  } else if (std::isupper(static_cast<unsigned char>(c))) {
    std::string two { c, peek(1) };
    if (std::islower(static_cast<unsigned char>(peek(1)))
        && atomic_number(two) > 0) {
      atom.element = two;
      pos_ += 2;
    } else if (atomic_number(std::string(1, c)) > 0) {
      atom.element = std::string(1, c);
      ++pos_;
    } else {
      fail(ErrorCode::kUnknownToken, "unknown element symbol", pos_);
    }
  } else {
    fail(ErrorCode::kUnknownToken, "expected element symbol in bracket atom",
         pos_);
  }
  atom.atomic_number = atomic_number(atom.element);

  // Chirality: @, @@, @TH1, @AL2, @SP3, @TB12, @OH20.
  if (peek() == '@') {
    ++pos_;
    if (peek() == '@') {
      ++pos_;
    } else if (std::isupper(static_cast<unsigned char>(peek()))
               && std::isupper(static_cast<unsigned char>(peek(1)))) {
      std::string_view cls = text_.substr(pos_, 2);
      if (cls != "TH" && cls != "AL" && cls != "SP" && cls != "TB"
          && cls != "OH")
        fail(ErrorCode::kUnknownToken, "unknown chirality class", pos_);
      pos_ += 2;
      if (!read_number())
        fail(ErrorCode::kUnknownToken, "chirality class without number",
             pos_);
    }
    if (!noted_chirality_) {
      note("tetrahedral/extended chirality discarded");
      noted_chirality_ = true;
    }
  }

  int hcount = 0;
  if (peek() == 'H') {
    ++pos_;
    hcount = read_number().value_or(1);
  }
  atom.explicit_h = hcount;

  if (peek() == '+' || peek() == '-') {
    char sign = peek();
    ++pos_;
    int magnitude = 1;
    if (auto n = read_number()) {
      magnitude = *n;
    } else {
      while (peek() == sign) {
        ++magnitude;
        ++pos_;
      }
    }
    if (magnitude > 15)
      fail(ErrorCode::kUnknownToken, "charge out of range", pos_);
    atom.formal_charge = sign == '+' ? magnitude : -magnitude;
  }

  if (peek() == ':') {
    ++pos_;
    if (!read_number())
      fail(ErrorCode::kUnknownToken, "atom class without number", pos_);
  }

  if (peek() != ']') {
    if (at_end())
      fail(ErrorCode::kUnknownToken, "unterminated bracket atom", start);
    fail(ErrorCode::kUnknownToken,
         std::string("unexpected character '") + peek()
             + "' in bracket atom",
         pos_);
  }
  ++pos_;

  if (atom.is_aromatic && !is_aromatic_capable(atom.atomic_number))
    fail(ErrorCode::kUnknownToken, "element cannot be aromatic", start);

  add_atom(std::move(atom));
}

void SmilesParser::parse_ring_closure() {
  std::size_t start = pos_;
  int number;
  if (peek() == '%') {
    if (!std::isdigit(static_cast<unsigned char>(peek(1)))
        || !std::isdigit(static_cast<unsigned char>(peek(2))))
      fail(ErrorCode::kUnknownToken, "'%' must be followed by two digits",
           start);
    number = (peek(1) - '0') * 10 + (peek(2) - '0');
    pos_ += 3;
  } else {
    number = peek() - '0';
    ++pos_;
  }

  if (prev_ < 0)
    fail(ErrorCode::kInvalidBond, "ring closure without a preceding atom",
         start);

  auto it = open_rings_.find(number);
  if (it == open_rings_.end()) {
    open_rings_.emplace(number,
                        RingOpening { prev_, pending_bond_, start });
    pending_bond_ = '\0';
    return;
  }

  RingOpening opening = it->second;
  open_rings_.erase(it);

  char symbol = pending_bond_;
  if (opening.bond_symbol != '\0') {
    if (symbol != '\0' && symbol != opening.bond_symbol
        && !(is_stereo_bond(symbol) && is_stereo_bond(opening.bond_symbol)))
      fail(ErrorCode::kInvalidBond, "conflicting ring-closure bond symbols",
           start);
    if (symbol == '\0' || is_stereo_bond(symbol))
      symbol = opening.bond_symbol;
  }
  pending_bond_ = '\0';
  add_bond(opening.atom, prev_, symbol, start);
}

Molecule SmilesParser::parse() {
  while (!at_end()) {
    char c = peek();

    if (c == '(') {
      if (prev_ < 0)
        fail(ErrorCode::kUnbalancedParenthesis,
             "branch opened before any atom", pos_);
      if (pending_bond_ != '\0')
        fail(ErrorCode::kInvalidBond, "bond symbol before '('", pending_pos_);
      branches_.emplace_back(prev_, pos_);
      ++pos_;
      if (peek() == ')')
        fail(ErrorCode::kUnbalancedParenthesis, "empty branch", pos_);
      continue;
    }
    if (c == ')') {
      if (branches_.empty())
        fail(ErrorCode::kUnbalancedParenthesis, "unmatched ')'", pos_);
      if (pending_bond_ != '\0')
        fail(ErrorCode::kInvalidBond, "dangling bond symbol", pending_pos_);
      prev_ = branches_.back().first;
      branches_.pop_back();
      ++pos_;
      continue;
    }
    if (is_bond_symbol(c)) {
      if (prev_ < 0 || pending_bond_ != '\0')
        fail(ErrorCode::kInvalidBond,
             std::string("misplaced bond symbol '") + c + "'", pos_);
      pending_bond_ = c;
      pending_pos_ = pos_;
      ++pos_;
      continue;
    }
    if (c == '.') {
      if (prev_ < 0)
        fail(ErrorCode::kUnknownToken, "empty fragment", pos_);
      if (pending_bond_ != '\0')
        fail(ErrorCode::kInvalidBond, "dangling bond symbol", pending_pos_);
      if (!branches_.empty())
        fail(ErrorCode::kUnbalancedParenthesis, "'.' inside a branch", pos_);
      prev_ = -1;
      ++pos_;
      if (at_end())
        fail(ErrorCode::kUnknownToken, "empty fragment", pos_);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '%') {
      parse_ring_closure();
      continue;
    }
    if (c == '[') {
      parse_bracket_atom();
      continue;
    }
    parse_organic_atom();
  }

  if (pending_bond_ != '\0')
    fail(ErrorCode::kInvalidBond, "dangling bond symbol", pending_pos_);
  if (!branches_.empty())
    fail(ErrorCode::kUnbalancedParenthesis, "unclosed '('",
         branches_.back().second);
  if (!open_rings_.empty()) {
    const auto &[number, opening] = *open_rings_.begin();
    fail(ErrorCode::kUnclosedRing,
         "ring bond " + std::to_string(number) + " never closed",
         opening.position);
  }

  // Hydrogen counts and pi requirements are fixed on the graph as written.
  const int n = static_cast<int>(atoms_.size());
  std::vector<int> bond_sum(n, 0);
  for (const Bond &b: bonds_) {
    int order = b.order == BondOrder::kAromatic ? 1 : static_cast<int>(b.order);
    bond_sum[b.atoms[0]] += order;
    bond_sum[b.atoms[1]] += order;
  }
  std::vector<bool> needs_pi(n, false);
  for (Atom &a: atoms_) {
    if (!a.explicit_h) {
      ImplicitValence iv = organic_implicit_valence(
          a.atomic_number, bond_sum[a.index], a.is_aromatic);
      a.implicit_h = iv.hydrogens;
      needs_pi[a.index] = iv.needs_pi;
    } else if (a.is_aromatic) {
      needs_pi[a.index] = bracket_needs_pi(a.atomic_number, a.formal_charge,
                                           bond_sum[a.index], *a.explicit_h);
    }
  }

  // Fold plain explicit hydrogens ([H] with a single non-hydrogen neighbour)
  // into the neighbour's hydrogen count.
  std::vector<int> degree(n, 0);
  for (const Bond &b: bonds_) {
    ++degree[b.atoms[0]];
    ++degree[b.atoms[1]];
  }
  std::vector<bool> drop(n, false);
  for (const Bond &b: bonds_) {
    for (int side = 0; side < 2; ++side) {
      const Atom &h = atoms_[b.atoms[side]];
      const Atom &heavy = atoms_[b.atoms[1 - side]];
      if (h.atomic_number == 1 && !h.isotope && h.formal_charge == 0
          && h.explicit_h.value_or(0) == 0 && degree[h.index] == 1
          && heavy.atomic_number != 1 && b.order == BondOrder::kSingle) {
        drop[h.index] = true;
      }
    }
  }
  std::vector<int> remap(n, -1);
  std::vector<Atom> kept_atoms;
  std::vector<bool> kept_pi;
  for (int i = 0; i < n; ++i) {
    if (drop[i])
      continue;
    remap[i] = static_cast<int>(kept_atoms.size());
    kept_atoms.push_back(atoms_[i]);
    kept_pi.push_back(needs_pi[i]);
  }
  std::vector<Bond> kept_bonds;
  bool folded = false;
  for (const Bond &b: bonds_) {
    int a = b.atoms[0], c = b.atoms[1];
    if (drop[a] || drop[c]) {
      int heavy = remap[drop[a] ? c : a];
      Atom &target = kept_atoms[heavy];
      if (target.explicit_h)
        ++*target.explicit_h;
      else
        ++target.implicit_h;
      folded = true;
      continue;
    }
    Bond nb = b;
    nb.atoms = { remap[a], remap[c] };
    kept_bonds.push_back(nb);
  }
  if (folded)
    note("explicit hydrogen atoms folded into hydrogen counts");

  std::vector<int> failed = internal::kekulize(
      static_cast<int>(kept_atoms.size()), kept_bonds, kept_pi);

  Molecule raw = Molecule::build(std::move(kept_atoms), std::move(kept_bonds),
                                 std::move(notes_), std::move(failed));
  return internal::normalize_aromaticity(raw);
}

std::string_view trim(std::string_view s) {
  const char *ws = " \t\r\n\v\f";
  std::size_t b = s.find_first_not_of(ws);
  if (b == std::string_view::npos)
    return {};
  std::size_t e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

}  // namespace

Molecule parse_smiles(std::string_view text) {
  std::string_view body = trim(text);
  if (body.empty())
    throw Error(ErrorCode::kEmptyInput, "EmptyInput: SMILES string is empty");
  return SmilesParser(body).parse();
}

}  // namespace rtmol
