//
// Project MolVerdict - Copyright 2026 MolVerdict Developers.
// SPDX-License-Identifier: Apache-2.0
//

#include "molverdict/chem/smiles.hpp"

#include <cctype>
#include <cmath>
#include <map>
#include <unordered_map>
#include <vector>

#include "molverdict/chem/substructure.hpp"
#include "molverdict/util/text.hpp"

namespace molverdict {

const std::vector<int>& allowed_valences(const std::string& element) {
  static const std::unordered_map<std::string, std::vector<int>> table = {
      {"H", {1}},  {"B", {3}},     {"C", {4}},  {"N", {3, 5}},
      {"O", {2}},  {"P", {3, 5}},  {"S", {2, 4, 6}},
      {"F", {1}},  {"Cl", {1}},    {"Br", {1}}, {"I", {1}},
  };
  static const std::vector<int> none;
  auto it = table.find(element);
  return it == table.end() ? none : it->second;
}

bool is_organic_subset(const std::string& element) {
  return element == "B" || element == "C" || element == "N" || element == "O" ||
         element == "P" || element == "S" || element == "F" || element == "Cl" ||
         element == "Br" || element == "I";
}

int implicit_hydrogens(const std::string& element, bool aromatic, double bond_sum) {
  const auto& valences = allowed_valences(element);
  if (valences.empty()) return 0;
  const int needed = static_cast<int>(std::ceil(bond_sum - 1e-9));
  for (int v : valences)
    if (v >= needed) return v - needed;
  // Aromatic bond-order bookkeeping over-counts on fused/heteroatom
  // positions; clamp instead of failing.
  if (aromatic) return 0;
  return -1;
}

namespace {

bool aromatic_symbol(char c) {
  return c == 'b' || c == 'c' || c == 'n' || c == 'o' || c == 'p' || c == 's';
}

struct RingOpen {
  int atom = -1;
  char bond_char = 0;
  std::size_t pos = 0;
};

class Parser {
 public:
  Parser(std::string_view text, bool pattern_mode)
      : text_(text), pattern_mode_(pattern_mode) {}

  ParsedPattern run() {
    if (trim_view(text_).empty())
      throw SmilesError(SmilesErrorKind::kEmptyInput, 0, "empty SMILES input");

    while (i_ < text_.size()) {
      const char c = text_[i_];
      const std::size_t pos = i_;
      if (c == '(') {
        if (prev_ < 0) fail(SmilesErrorKind::kMalformed, pos, "branch before any atom");
        if (pending_) fail(SmilesErrorKind::kMalformed, pos, "bond before branch open");
        stack_.push_back(prev_);
        ++i_;
      } else if (c == ')') {
        if (stack_.empty())
          fail(SmilesErrorKind::kUnbalancedParenthesis, pos, "unmatched ')'");
        if (pending_) fail(SmilesErrorKind::kMalformed, pos, "dangling bond before ')'");
        prev_ = stack_.back();
        stack_.pop_back();
        ++i_;
      } else if (c == '-' || c == '=' || c == '#' || c == ':') {
        if (pending_) fail(SmilesErrorKind::kMalformed, pos, "two consecutive bond symbols");
        if (prev_ < 0) fail(SmilesErrorKind::kMalformed, pos, "bond before any atom");
        pending_ = c;
        ++i_;
      } else if (c == '.') {
        if (pending_) fail(SmilesErrorKind::kMalformed, pos, "bond before '.'");
        if (!stack_.empty()) fail(SmilesErrorKind::kMalformed, pos, "'.' inside branch");
        prev_ = -1;
        ++i_;
      } else if (c == '%') {
        if (i_ + 2 >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[i_ + 1])) ||
            !std::isdigit(static_cast<unsigned char>(text_[i_ + 2])))
          fail(SmilesErrorKind::kMalformed, pos, "'%' needs two digits");
        ring_closure((text_[i_ + 1] - '0') * 10 + (text_[i_ + 2] - '0'), pos);
        i_ += 3;
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        ring_closure(c - '0', pos);
        ++i_;
      } else if (c == '[') {
        parse_bracket();
      } else if (std::isalpha(static_cast<unsigned char>(c))) {
        parse_organic();
      } else {
        fail(SmilesErrorKind::kMalformed, pos, std::string("unexpected character '") + c + "'");
      }
    }

    if (pending_) fail(SmilesErrorKind::kMalformed, text_.size(), "trailing bond symbol");
    if (!stack_.empty())
      fail(SmilesErrorKind::kUnbalancedParenthesis, text_.size(), "unclosed '('");
    if (!ring_open_.empty())
      fail(SmilesErrorKind::kUnclosedRingBond, ring_open_.begin()->second.pos,
           "unclosed ring bond " + std::to_string(ring_open_.begin()->first));
    if (mol_.atoms.empty())
      throw SmilesError(SmilesErrorKind::kEmptyInput, 0, "no atoms in input");

    finalize_molecule(mol_);
    resolve_bond_orders();
    if (!pattern_mode_) assign_hydrogens();

    return ParsedPattern{std::move(mol_), std::move(ring_req_)};
  }

 private:
  [[noreturn]] void fail(SmilesErrorKind kind, std::size_t pos, const std::string& msg) {
    throw SmilesError(kind, pos, msg + " at position " + std::to_string(pos));
  }

  void add_atom(Atom atom, RingConstraint rc, std::size_t pos) {
    mol_.atoms.push_back(std::move(atom));
    ring_req_.push_back(rc);
    atom_pos_.push_back(pos);
    const int idx = mol_.atom_count() - 1;
    if (prev_ >= 0) add_bond(prev_, idx, pending_, pos);
    pending_ = 0;
    prev_ = idx;
  }

  void add_bond(int a, int b, char bond_char, std::size_t pos) {
    if (a == b) fail(SmilesErrorKind::kMalformed, pos, "self bond");
    for (const Bond& existing : mol_.bonds)
      if ((existing.a == a && existing.b == b) || (existing.a == b && existing.b == a))
        fail(SmilesErrorKind::kMalformed, pos, "duplicate bond");
    Bond bond;
    bond.a = a;
    bond.b = b;
    switch (bond_char) {
      case 0: bond.order = BondOrder::kSingle; break;
      case '-': bond.order = BondOrder::kSingle; break;
      case '=': bond.order = BondOrder::kDouble; break;
      case '#': bond.order = BondOrder::kTriple; break;
      case ':': bond.order = BondOrder::kAromatic; break;
    }
    mol_.bonds.push_back(bond);
    unspecified_.push_back(bond_char == 0);
    bond_pos_.push_back(pos);
  }

  void ring_closure(int number, std::size_t pos) {
    if (prev_ < 0) fail(SmilesErrorKind::kMalformed, pos, "ring closure before any atom");
    auto it = ring_open_.find(number);
    if (it == ring_open_.end()) {
      ring_open_[number] = RingOpen{prev_, pending_, pos};
    } else {
      const RingOpen open = it->second;
      ring_open_.erase(it);
      char bond_char = 0;
      if (open.bond_char && pending_ && open.bond_char != pending_)
        fail(SmilesErrorKind::kMalformed, pos, "conflicting ring bond orders");
      bond_char = open.bond_char ? open.bond_char : pending_;
      add_bond(open.atom, prev_, bond_char, pos);
    }
    pending_ = 0;
  }

  void parse_organic() {
    const std::size_t pos = i_;
    const char c = text_[i_];
    Atom atom;
    if (c == 'C' && i_ + 1 < text_.size() && text_[i_ + 1] == 'l') {
      atom.element = "Cl";
      i_ += 2;
    } else if (c == 'B' && i_ + 1 < text_.size() && text_[i_ + 1] == 'r') {
      atom.element = "Br";
      i_ += 2;
    } else if (std::isupper(static_cast<unsigned char>(c))) {
      atom.element = std::string(1, c);
      if (!is_organic_subset(atom.element))
        fail(SmilesErrorKind::kUnknownAtomSymbol, pos,
             "unknown atom symbol '" + atom.element + "'");
      ++i_;
    } else if (aromatic_symbol(c)) {
      atom.element = std::string(1, static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
      atom.aromatic = true;
      ++i_;
    } else {
      fail(SmilesErrorKind::kUnknownAtomSymbol, pos,
           std::string("unknown atom symbol '") + c + "'");
    }
    add_atom(std::move(atom), RingConstraint::kAny, pos);
  }

  void parse_bracket() {
    const std::size_t open_pos = i_;
    ++i_;  // '['
    if (i_ >= text_.size())
      fail(SmilesErrorKind::kMalformed, open_pos, "unterminated bracket atom");
    if (std::isdigit(static_cast<unsigned char>(text_[i_])))
      fail(SmilesErrorKind::kMalformed, i_, "isotopes are not supported");

    Atom atom;
    atom.bracket = true;

    const char c = text_[i_];
    if (std::isupper(static_cast<unsigned char>(c))) {
      std::string two;
      if (i_ + 1 < text_.size() && std::islower(static_cast<unsigned char>(text_[i_ + 1])))
        two = std::string{c, text_[i_ + 1]};
      if (!two.empty() && !allowed_valences(two).empty()) {
        atom.element = two;
        i_ += 2;
      } else if (!allowed_valences(std::string(1, c)).empty()) {
        atom.element = std::string(1, c);
        ++i_;
      } else {
        fail(SmilesErrorKind::kUnknownAtomSymbol, i_,
             "unknown atom symbol in bracket");
      }
    } else if (aromatic_symbol(c)) {
      atom.element = std::string(1, static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
      atom.aromatic = true;
      ++i_;
    } else {
      fail(SmilesErrorKind::kUnknownAtomSymbol, i_, "unknown atom symbol in bracket");
    }

    if (i_ < text_.size() && text_[i_] == '@') {
      ++i_;
      if (i_ < text_.size() && text_[i_] == '@') {
        atom.chirality = Chirality::kCw;
        ++i_;
      } else {
        atom.chirality = Chirality::kCcw;
      }
    }

    if (i_ < text_.size() && text_[i_] == 'H') {
      ++i_;
      int count = 1;
      if (i_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i_]))) {
        count = 0;
        while (i_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i_]))) {
          count = count * 10 + (text_[i_] - '0');
          ++i_;
        }
      }
      atom.hydrogens = count;
    }

    if (i_ < text_.size() && (text_[i_] == '+' || text_[i_] == '-')) {
      const char sign = text_[i_];
      int magnitude = 0;
      while (i_ < text_.size() && text_[i_] == sign) {
        ++magnitude;
        ++i_;
      }
      if (magnitude == 1 && i_ < text_.size() &&
          std::isdigit(static_cast<unsigned char>(text_[i_]))) {
        magnitude = 0;
        while (i_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i_]))) {
          magnitude = magnitude * 10 + (text_[i_] - '0');
          ++i_;
        }
      }
      atom.formal_charge = sign == '+' ? magnitude : -magnitude;
    }

    RingConstraint rc = RingConstraint::kAny;
    if (pattern_mode_ && i_ < text_.size() && text_[i_] == ';') {
      ++i_;
      bool negate = false;
      if (i_ < text_.size() && text_[i_] == '!') {
        negate = true;
        ++i_;
      }
      if (i_ >= text_.size() || text_[i_] != 'R')
        fail(SmilesErrorKind::kMalformed, i_, "expected ring constraint after ';'");
      ++i_;
      rc = negate ? RingConstraint::kNotInRing : RingConstraint::kInRing;
    }

    if (i_ >= text_.size() || text_[i_] != ']')
      fail(SmilesErrorKind::kMalformed, i_, "expected ']'");
    ++i_;

    add_atom(std::move(atom), rc, open_pos);
  }

  // Unannotated bonds become aromatic when both endpoints are aromatic and
  // the bond sits in a ring; otherwise single. Explicit ':' bonds must be in
  // a ring.
  void resolve_bond_orders() {
    for (std::size_t bi = 0; bi < mol_.bonds.size(); ++bi) {
      Bond& bond = mol_.bonds[bi];
      if (unspecified_[bi]) {
        if (bond.in_ring && mol_.atoms[bond.a].aromatic && mol_.atoms[bond.b].aromatic)
          bond.order = BondOrder::kAromatic;
        else
          bond.order = BondOrder::kSingle;
      } else if (bond.order == BondOrder::kAromatic && !bond.in_ring) {
        fail(SmilesErrorKind::kMalformed, bond_pos_[bi], "aromatic bond outside a ring");
      }
    }
  }

  void assign_hydrogens() {
    for (int a = 0; a < mol_.atom_count(); ++a) {
      Atom& atom = mol_.atoms[a];
      const double sum = mol_.bond_order_sum(a);
      if (atom.bracket) {
        if (atom.aromatic) continue;  // trusted as written
        const auto& valences = allowed_valences(atom.element);
        const int max_valence = valences.empty() ? 0 : valences.back();
        const int total = static_cast<int>(std::ceil(sum - 1e-9)) + atom.hydrogens;
        if (total > max_valence + std::abs(atom.formal_charge))
          fail(SmilesErrorKind::kValenceExceeded, atom_pos_[a],
               "valence " + std::to_string(total) + " exceeds allowed for " + atom.element);
      } else {
        const int h = implicit_hydrogens(atom.element, atom.aromatic, sum);
        if (h < 0)
          fail(SmilesErrorKind::kValenceExceeded, atom_pos_[a],
               "bond order sum exceeds allowed valence for " + atom.element);
        atom.hydrogens = h;
      }
    }
  }

  std::string_view text_;
  bool pattern_mode_;
  std::size_t i_ = 0;
  Molecule mol_;
  std::vector<RingConstraint> ring_req_;
  std::vector<std::size_t> atom_pos_;
  std::vector<std::size_t> bond_pos_;
  std::vector<bool> unspecified_;
  int prev_ = -1;
  std::vector<int> stack_;
  char pending_ = 0;
  std::map<int, RingOpen> ring_open_;
};

}  // namespace

Molecule parse_smiles(std::string_view text) {
  return Parser(trim_view(text), /*pattern_mode=*/false).run().graph;
}

ParsedPattern parse_pattern_expression(std::string_view text) {
  return Parser(trim_view(text), /*pattern_mode=*/true).run();
}

}  // namespace molverdict
