//
// Project MolVerdict - Copyright 2026 MolVerdict Developers.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "molverdict/chem/molecule.hpp"

namespace molverdict {

enum class SmilesErrorKind {
  kEmptyInput,
  kUnbalancedParenthesis,
  kUnclosedRingBond,
  kUnknownAtomSymbol,
  kValenceExceeded,
  kMalformed,
};

class SmilesError : public std::runtime_error {
 public:
  SmilesError(SmilesErrorKind kind, std::size_t position, const std::string& message)
      : std::runtime_error(message), kind_(kind), position_(position) {}

  SmilesErrorKind kind() const { return kind_; }
  std::size_t position() const { return position_; }

 private:
  SmilesErrorKind kind_;
  std::size_t position_;
};

// Parses the supported SMILES subset: organic-subset atoms
// (B C N O P S F Cl Br I), bracket atoms with chirality / H count / charge,
// bond symbols - = # :, branches, ring closures (digits and %nn), aromatic
// lowercase atoms and '.' separated components. No isotopes, no atom maps,
// no wedge stereo beyond @/@@.
Molecule parse_smiles(std::string_view text);

// Allowed valences for an element ("" entry means unknown element).
// Used for implicit hydrogen assignment and valence checking.
const std::vector<int>& allowed_valences(const std::string& element);

// Hydrogens a bare (non-bracket) atom would receive at parse time, given the
// fractional sum of its bond orders. Returns 0 when the element has no free
// valence. Shared between the parser and the canonical writer.
int implicit_hydrogens(const std::string& element, bool aromatic, double bond_sum);

bool is_organic_subset(const std::string& element);

}  // namespace molverdict
