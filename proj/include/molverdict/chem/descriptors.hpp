//
// Project MolVerdict - Copyright 2026 MolVerdict Developers.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <string>
#include <unordered_map>

#include "molverdict/chem/molecule.hpp"
#include "molverdict/chem/substructure.hpp"

namespace molverdict {

// Physicochemical and structural descriptors plus substructure alert flags
// for one molecule.
struct DescriptorVector {
  double molecular_weight = 0.0;  // g/mol, implicit hydrogens included
  double logp = 0.0;
  double tpsa = 0.0;              // A^2
  int hbd = 0;                    // O-H and N-H bond count (Lipinski)
  int hba = 0;                    // N + O atom count (Lipinski)
  int rotatable_bonds = 0;
  double molar_refractivity = 0.0;
  int chiral_centers = 0;
  int heavy_atoms = 0;
  int ring_count = 0;             // cyclomatic number
  int formal_charge = 0;
  bool pains_alert = false;
  bool brenk_alert = false;
};

// Atom-contribution parameter tables for LogP / molar refractivity (keyed by
// element plus ".ar" aromatic suffix, "H" for bound hydrogens) and TPSA
// fragment contributions (keyed by element environment). Loaded from CSV
// files `atom_type,value`.
struct ContributionTables {
  std::unordered_map<std::string, double> logp;
  std::unordered_map<std::string, double> mr;
  std::unordered_map<std::string, double> tpsa;

  static ContributionTables load(const std::string& logp_path, const std::string& mr_path,
                                 const std::string& tpsa_path);
};

// Atom type key used by the LogP / MR tables.
std::string crippen_atom_type(const Atom& atom);

// Environment key used by the TPSA table:
// `<Elem>[ar];H<h>;s<ns>d<nd>t<nt>a<na>;q<charge>`.
std::string tpsa_environment(const Molecule& m, int atom);

double standard_atomic_weight(const std::string& element);

// All descriptors except alert flags (left false). Empty molecule yields the
// all-zero vector.
DescriptorVector compute_descriptors(const Molecule& m, const ContributionTables& tables);

// Descriptors plus alert flags.
DescriptorVector compute_descriptors(const Molecule& m, const ContributionTables& tables,
                                     const std::vector<AlertPattern>& pains,
                                     const std::vector<AlertPattern>& brenk);

}  // namespace molverdict
