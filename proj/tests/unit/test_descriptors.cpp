//
// Project MolVerdict - Copyright 2026 MolVerdict Developers.
// SPDX-License-Identifier: Apache-2.0
//

#include "doctest.h"

#include "molverdict/chem/descriptors.hpp"
#include "molverdict/chem/smiles.hpp"
#include "molverdict/data_dir.hpp"
#include "molverdict/util/rng.hpp"

using namespace molverdict;

namespace {

const ContributionTables& tables() {
  static const ContributionTables t = ContributionTables::load(
      default_data_dir() + "/params/logp_contrib.csv",
      default_data_dir() + "/params/mr_contrib.csv",
      default_data_dir() + "/params/tpsa_contrib.csv");
  return t;
}

DescriptorVector describe(const std::string& smiles) {
  return compute_descriptors(parse_smiles(smiles), tables());
}

}  // namespace

TEST_CASE("ethanol descriptors") {
  const DescriptorVector d = describe("CCO");
  CHECK(d.molecular_weight == doctest::Approx(46.069).epsilon(0.0005));
  CHECK(d.hbd == 1);
  CHECK(d.hba == 1);
  CHECK(d.rotatable_bonds == 0);
  CHECK(d.formal_charge == 0);
  CHECK(d.heavy_atoms == 3);
  CHECK(d.ring_count == 0);
  CHECK(d.chiral_centers == 0);
  // frozen from the bundled tables: 2*0.141 + (-0.289) + 6*0.123
  CHECK(d.logp == doctest::Approx(0.731).epsilon(1e-9));
  // 2*2.503 + 1.581 + 6*1.057
  CHECK(d.molar_refractivity == doctest::Approx(12.929).epsilon(1e-9));
  CHECK(d.tpsa == doctest::Approx(20.23).epsilon(1e-9));
  CHECK_FALSE(d.pains_alert);
  CHECK_FALSE(d.brenk_alert);
}

TEST_CASE("ammonium ion") {
  const DescriptorVector d = describe("[NH4+]");
  CHECK(d.formal_charge == 1);
  CHECK(d.heavy_atoms == 1);
  CHECK(d.molecular_weight == doctest::Approx(14.007 + 4 * 1.008).epsilon(1e-6));
}

TEST_CASE("alanine has one chiral center") {
  CHECK(describe("CC(N)C(=O)O").chiral_centers == 1);
  // marked centers count as written
  CHECK(describe("C[C@H](N)C(=O)O").chiral_centers == 1);
  // isobutane central carbon: two identical methyls
  CHECK(describe("CC(C)C").chiral_centers == 0);
  // neopentane: four identical substituents
  CHECK(describe("CC(C)(C)C").chiral_centers == 0);
  // 1-bromo-1-chloroethane: C with Br, Cl, CH3, H
  CHECK(describe("CC(Cl)Br").chiral_centers == 1);
}

TEST_CASE("rotatable bonds") {
  CHECK(describe("CCCC").rotatable_bonds == 1);
  CHECK(describe("CCCCC").rotatable_bonds == 2);
  CHECK(describe("C1CCCCC1").rotatable_bonds == 0);   // ring bonds excluded
  CHECK(describe("CNC(=O)C").rotatable_bonds == 0);   // amide C-N excluded
  CHECK(describe("CCc1ccccc1").rotatable_bonds == 1);
  CHECK(describe("CC=CC").rotatable_bonds == 0);      // double bond not rotatable
}

TEST_CASE("hydrogen bond counting uses per-bond donors") {
  CHECK(describe("OCC(O)CO").hbd == 3);
  CHECK(describe("OCC(O)CO").hba == 3);
  CHECK(describe("Nc1ccccc1").hbd == 2);  // NH2
  CHECK(describe("c1ccncc1").hbd == 0);
  CHECK(describe("c1ccncc1").hba == 1);
}

TEST_CASE("ring count is the cyclomatic number") {
  CHECK(describe("c1ccc2ccccc2c1").ring_count == 2);
  CHECK(describe("C1CC12CC2").ring_count == 2);
  CHECK(describe("CCO").ring_count == 0);
}

TEST_CASE("empty molecule gives the zero vector") {
  Molecule empty;
  finalize_molecule(empty);
  const DescriptorVector d = compute_descriptors(empty, tables());
  CHECK(d.molecular_weight == 0.0);
  CHECK(d.heavy_atoms == 0);
  CHECK_FALSE(d.pains_alert);
}

TEST_CASE("adding a carbon strictly increases weight and heavy atoms") {
  std::string smiles = "C";
  DescriptorVector prev = describe(smiles);
  for (int i = 0; i < 8; ++i) {
    smiles += "C";
    const DescriptorVector next = describe(smiles);
    CHECK(next.molecular_weight > prev.molecular_weight);
    CHECK(next.heavy_atoms == prev.heavy_atoms + 1);
    prev = next;
  }
}

TEST_CASE("descriptors are permutation invariant") {
  const Molecule base = parse_smiles("CC(N)C(=O)Oc1ccc(Cl)cc1");
  const DescriptorVector expected = compute_descriptors(base, tables());
  Rng rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<int> perm(base.atom_count());
    for (int i = 0; i < base.atom_count(); ++i) perm[i] = i;
    rng.shuffle(perm);
    Molecule shuffled;
    shuffled.atoms.resize(base.atoms.size());
    std::vector<int> inverse(base.atom_count());
    for (int i = 0; i < base.atom_count(); ++i) inverse[perm[i]] = i;
    for (int old = 0; old < base.atom_count(); ++old)
      shuffled.atoms[inverse[old]] = base.atoms[old];
    for (const Bond& b : base.bonds) {
      Bond nb = b;
      nb.a = inverse[b.a];
      nb.b = inverse[b.b];
      shuffled.bonds.push_back(nb);
    }
    finalize_molecule(shuffled);
    const DescriptorVector got = compute_descriptors(shuffled, tables());
    CHECK(got.molecular_weight == doctest::Approx(expected.molecular_weight));
    CHECK(got.logp == doctest::Approx(expected.logp));
    CHECK(got.tpsa == doctest::Approx(expected.tpsa));
    CHECK(got.hbd == expected.hbd);
    CHECK(got.hba == expected.hba);
    CHECK(got.rotatable_bonds == expected.rotatable_bonds);
    CHECK(got.chiral_centers == expected.chiral_centers);
    CHECK(got.ring_count == expected.ring_count);
  }
}

TEST_CASE("hand-derived descriptor anchors") {
  SUBCASE("benzene") {
    const DescriptorVector d = describe("c1ccccc1");
    CHECK(d.molecular_weight == doctest::Approx(78.114).epsilon(1e-6));
    CHECK(d.tpsa == 0.0);  // no polar atoms
    CHECK(d.hba == 0);
    // 6 aromatic C + 6 H from the bundled tables
    CHECK(d.logp == doctest::Approx(6 * 0.294 + 6 * 0.123).epsilon(1e-9));
  }
  SUBCASE("pyridine") {
    const DescriptorVector d = describe("c1ccncc1");
    CHECK(d.tpsa == doctest::Approx(12.89).epsilon(1e-9));
    CHECK(d.logp == doctest::Approx(5 * 0.294 - 0.324 + 5 * 0.123).epsilon(1e-9));
  }
  SUBCASE("phenol hydroxyl environment") {
    CHECK(describe("Oc1ccccc1").tpsa == doctest::Approx(20.23).epsilon(1e-9));
  }
  SUBCASE("benzamide combines amide nitrogen and carbonyl oxygen") {
    CHECK(describe("NC(=O)c1ccccc1").tpsa == doctest::Approx(26.02 + 17.07).epsilon(1e-9));
  }
  SUBCASE("benzenesulfonamide sulfone environment") {
    CHECK(describe("NS(=O)(=O)c1ccccc1").tpsa ==
          doctest::Approx(26.02 + 8.38 + 2 * 17.07).epsilon(1e-9));
  }
  SUBCASE("nitrobenzene charged environments") {
    CHECK(describe("[O-][N+](=O)c1ccccc1").tpsa ==
          doctest::Approx(11.68 + 23.06 + 17.07).epsilon(1e-9));
    CHECK(describe("[O-][N+](=O)c1ccccc1").formal_charge == 0);
  }
}
