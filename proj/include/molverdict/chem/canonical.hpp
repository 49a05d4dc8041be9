//
// Project MolVerdict - Copyright 2026 MolVerdict Developers.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <string>

#include "molverdict/chem/molecule.hpp"

namespace molverdict {

// Canonical SMILES-subset serialization of the molecular graph, invariant
// under input atom ordering. Morgan-style iterative invariant refinement;
// remaining ties are broken by enumerating candidate rankings and keeping
// the lexicographically smallest emitted string. Chirality marks are ignored
// and not emitted (canonical form is an equality/dedup key, not a stereo
// descriptor). The output reparses to an isomorphic graph with identical
// element/aromatic/charge/hydrogen annotations.
std::string canonical_form(const Molecule& m);

// Canonical serialization of the connected component containing `root`,
// emitted with `root` forced as the start atom. Used to compare branch
// subgraphs (e.g. substituent distinctness around a stereocenter candidate).
std::string rooted_canonical_form(const Molecule& m, int root);

}  // namespace molverdict
