//
// Project MolVerdict - Copyright 2026 MolVerdict Developers.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace molverdict {

enum class Chirality : std::uint8_t { kNone, kCcw, kCw };  // @ / @@

enum class BondOrder : std::uint8_t {
  kSingle = 1,
  kDouble = 2,
  kTriple = 3,
  kAromatic = 4,
};

// Fractional valence contribution of a bond (aromatic counts 1.5).
inline double bond_valence(BondOrder o) {
  switch (o) {
    case BondOrder::kSingle: return 1.0;
    case BondOrder::kDouble: return 2.0;
    case BondOrder::kTriple: return 3.0;
    case BondOrder::kAromatic: return 1.5;
  }
  return 1.0;
}

struct Atom {
  std::string element;       // "C", "Cl", "H", ...
  bool aromatic = false;
  int formal_charge = 0;
  int hydrogens = 0;         // bound hydrogens (explicit bracket count or derived)
  bool bracket = false;      // written as a bracket atom
  Chirality chirality = Chirality::kNone;
  bool in_ring = false;
};

struct Bond {
  int a = -1;
  int b = -1;
  BondOrder order = BondOrder::kSingle;
  bool in_ring = false;
};

struct Molecule {
  std::vector<Atom> atoms;
  std::vector<Bond> bonds;
  std::vector<std::vector<int>> rings;  // smallest rings as atom-index cycles

  // (neighbor atom, bond index) per atom; filled by finalize_molecule.
  std::vector<std::vector<std::pair<int, int>>> adjacency;

  int atom_count() const { return static_cast<int>(atoms.size()); }
  bool empty() const { return atoms.empty(); }

  int heavy_atom_count() const {
    int n = 0;
    for (const auto& a : atoms)
      if (a.element != "H") ++n;
    return n;
  }

  int component_count() const;
  int cyclomatic_number() const {
    return static_cast<int>(bonds.size()) - atom_count() + component_count();
  }

  // Sum of bond orders incident to the atom (aromatic = 1.5).
  double bond_order_sum(int atom) const;
  int degree(int atom) const { return static_cast<int>(adjacency[atom].size()); }
  int heavy_degree(int atom) const;
  const Bond* bond_between(int a, int b) const;
};

// Builds adjacency, detects rings (smallest cycle through every ring bond),
// and sets the per-atom / per-bond ring flags. Called by the parser; call it
// again after constructing a Molecule by hand.
void finalize_molecule(Molecule& m);

// Connected component id per atom, in first-visit order from atom 0.
std::vector<int> component_ids(const Molecule& m);

}  // namespace molverdict
