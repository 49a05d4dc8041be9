//
// Project MolVerdict - Copyright 2026 MolVerdict Developers.
// SPDX-License-Identifier: Apache-2.0
//

#include "molverdict/chem/descriptors.hpp"

#include <set>
#include <stdexcept>

#include "molverdict/chem/canonical.hpp"
#include "molverdict/util/csv.hpp"

namespace molverdict {

double standard_atomic_weight(const std::string& element) {
  static const std::unordered_map<std::string, double> weights = {
      {"H", 1.008},   {"B", 10.811},  {"C", 12.011},  {"N", 14.007},
      {"O", 15.999},  {"F", 18.998},  {"P", 30.974},  {"S", 32.06},
      {"Cl", 35.453}, {"Br", 79.904}, {"I", 126.904},
  };
  auto it = weights.find(element);
  return it == weights.end() ? 0.0 : it->second;
}

std::string crippen_atom_type(const Atom& atom) {
  return atom.aromatic ? atom.element + ".ar" : atom.element;
}

namespace {

std::unordered_map<std::string, double> load_table(const std::string& path) {
  const CsvTable csv = read_csv(path);
  const int type_col = csv.column("atom_type");
  const int value_col = csv.column("value");
  if (type_col < 0 || value_col < 0)
    throw std::runtime_error("parameter table " + path + " needs atom_type,value columns");
  std::unordered_map<std::string, double> table;
  for (const auto& row : csv.rows)
    table[row[type_col]] = std::stod(row[value_col]);
  return table;
}

int explicit_h_neighbors(const Molecule& m, int atom) {
  int n = 0;
  for (const auto& [nb, bi] : m.adjacency[atom]) {
    (void)bi;
    if (m.atoms[nb].element == "H") ++n;
  }
  return n;
}

int effective_hydrogens(const Molecule& m, int atom) {
  return m.atoms[atom].hydrogens + explicit_h_neighbors(m, atom);
}

bool carbonyl_carbon(const Molecule& m, int atom) {
  if (m.atoms[atom].element != "C") return false;
  for (const auto& [nb, bi] : m.adjacency[atom])
    if (m.bonds[bi].order == BondOrder::kDouble && m.atoms[nb].element == "O") return true;
  return false;
}

bool amide_bond(const Molecule& m, const Bond& b) {
  return (carbonyl_carbon(m, b.a) && m.atoms[b.b].element == "N") ||
         (carbonyl_carbon(m, b.b) && m.atoms[b.a].element == "N");
}

Molecule without_atom(const Molecule& m, int removed, std::vector<int>& mapping) {
  mapping.assign(m.atom_count(), -1);
  Molecule out;
  for (int a = 0; a < m.atom_count(); ++a) {
    if (a == removed) continue;
    mapping[a] = out.atom_count();
    out.atoms.push_back(m.atoms[a]);
  }
  for (const Bond& b : m.bonds) {
    if (b.a == removed || b.b == removed) continue;
    Bond nb = b;
    nb.a = mapping[b.a];
    nb.b = mapping[b.b];
    out.bonds.push_back(nb);
  }
  finalize_molecule(out);
  return out;
}

// Marked @/@@ atoms plus unmarked tetrahedral carbons whose four substituents
// (implicit hydrogens included) are pairwise graph-distinct. Distinctness is
// decided on rooted canonical forms of the branches with the center removed.
int count_chiral_centers(const Molecule& m) {
  int count = 0;
  for (int a = 0; a < m.atom_count(); ++a) {
    const Atom& atom = m.atoms[a];
    if (atom.chirality != Chirality::kNone) {
      ++count;
      continue;
    }
    if (atom.element != "C" || atom.aromatic) continue;
    bool all_single = true;
    for (const auto& [nb, bi] : m.adjacency[a]) {
      (void)nb;
      if (m.bonds[bi].order != BondOrder::kSingle) all_single = false;
    }
    if (!all_single) continue;
    const int h = atom.hydrogens;
    if (m.degree(a) + h != 4) continue;
    if (h >= 2) continue;  // two identical hydrogens

    std::vector<int> mapping;
    const Molecule reduced = without_atom(m, a, mapping);
    std::set<std::string> signatures;
    bool duplicate = false;
    for (const auto& [nb, bi] : m.adjacency[a]) {
      (void)bi;
      if (!signatures.insert(rooted_canonical_form(reduced, mapping[nb])).second) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate && h == 1 && !signatures.insert("[H]").second) duplicate = true;
    if (!duplicate) ++count;
  }
  return count;
}

}  // namespace

std::string tpsa_environment(const Molecule& m, int atom) {
  const Atom& a = m.atoms[atom];
  int ns = 0, nd = 0, nt = 0, na = 0;
  for (const auto& [nb, bi] : m.adjacency[atom]) {
    if (m.atoms[nb].element == "H") continue;  // folded into the H count
    switch (m.bonds[bi].order) {
      case BondOrder::kSingle: ++ns; break;
      case BondOrder::kDouble: ++nd; break;
      case BondOrder::kTriple: ++nt; break;
      case BondOrder::kAromatic: ++na; break;
    }
  }
  return (a.aromatic ? a.element + "ar" : a.element) + ";H" +
         std::to_string(effective_hydrogens(m, atom)) + ";s" + std::to_string(ns) + "d" +
         std::to_string(nd) + "t" + std::to_string(nt) + "a" + std::to_string(na) + ";q" +
         std::to_string(a.formal_charge);
}

ContributionTables ContributionTables::load(const std::string& logp_path,
                                            const std::string& mr_path,
                                            const std::string& tpsa_path) {
  ContributionTables tables;
  tables.logp = load_table(logp_path);
  tables.mr = load_table(mr_path);
  tables.tpsa = load_table(tpsa_path);
  return tables;
}

DescriptorVector compute_descriptors(const Molecule& m, const ContributionTables& tables) {
  DescriptorVector d;
  if (m.empty()) return d;

  auto contribution = [](const std::unordered_map<std::string, double>& table,
                         const std::string& key) {
    auto it = table.find(key);
    return it == table.end() ? 0.0 : it->second;
  };
  const double logp_h = contribution(tables.logp, "H");
  const double mr_h = contribution(tables.mr, "H");

  for (int a = 0; a < m.atom_count(); ++a) {
    const Atom& atom = m.atoms[a];
    d.molecular_weight += standard_atomic_weight(atom.element) + atom.hydrogens * 1.008;
    d.formal_charge += atom.formal_charge;
    if (atom.element == "H") continue;

    ++d.heavy_atoms;
    const std::string type = crippen_atom_type(atom);
    d.logp += contribution(tables.logp, type) + atom.hydrogens * logp_h;
    d.molar_refractivity += contribution(tables.mr, type) + atom.hydrogens * mr_h;

    if (atom.element == "N" || atom.element == "O" || atom.element == "S" ||
        atom.element == "P") {
      const std::string env = tpsa_environment(m, a);
      auto it = tables.tpsa.find(env);
      if (it != tables.tpsa.end()) {
        d.tpsa += it->second;
      } else {
        // generic per-element fallback rows, aromatic first
        auto fb = tables.tpsa.find((atom.aromatic ? atom.element + "ar" : atom.element) + ";*");
        if (fb == tables.tpsa.end()) fb = tables.tpsa.find(atom.element + ";*");
        if (fb != tables.tpsa.end()) d.tpsa += fb->second;
      }
    }

    if (atom.element == "N" || atom.element == "O") {
      ++d.hba;
      d.hbd += effective_hydrogens(m, a);
    }
  }

  for (const Bond& b : m.bonds) {
    if (b.order != BondOrder::kSingle || b.in_ring) continue;
    if (m.atoms[b.a].element == "H" || m.atoms[b.b].element == "H") continue;
    if (m.heavy_degree(b.a) < 2 || m.heavy_degree(b.b) < 2) continue;
    if (amide_bond(m, b)) continue;
    ++d.rotatable_bonds;
  }

  d.chiral_centers = count_chiral_centers(m);
  d.ring_count = m.cyclomatic_number();
  return d;
}

DescriptorVector compute_descriptors(const Molecule& m, const ContributionTables& tables,
                                     const std::vector<AlertPattern>& pains,
                                     const std::vector<AlertPattern>& brenk) {
  DescriptorVector d = compute_descriptors(m, tables);
  if (!m.empty()) {
    const AlertFlags flags = alert_flags(m, pains, brenk);
    d.pains_alert = flags.pains;
    d.brenk_alert = flags.brenk;
  }
  return d;
}

}  // namespace molverdict
