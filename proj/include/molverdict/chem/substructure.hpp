//
// Project MolVerdict - Copyright 2026 MolVerdict Developers.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "molverdict/chem/molecule.hpp"

namespace molverdict {

enum class RingConstraint : std::uint8_t { kAny, kInRing, kNotInRing };

// Result of parsing a pattern expression: the graph plus per-atom ring
// requirements. Pattern expressions reuse the SMILES grammar; bracket atoms
// may carry a trailing ';R' (must be in a ring) or ';!R' (must not be).
struct ParsedPattern {
  Molecule graph;
  std::vector<RingConstraint> ring_req;
};

ParsedPattern parse_pattern_expression(std::string_view text);

// Substructure alert: a named, connected pattern graph. Atom nodes constrain
// element, aromatic flag and formal charge exactly, plus optional ring
// membership; edges constrain bond order exactly.
struct AlertPattern {
  std::string name;
  Molecule graph;
  std::vector<RingConstraint> ring_req;

  static AlertPattern compile(std::string name, std::string_view expression);
};

class PatternError : public std::runtime_error {
 public:
  explicit PatternError(const std::string& msg) : std::runtime_error(msg) {}
};

// VF2-style subgraph isomorphism: true iff an injective mapping of pattern
// atoms onto molecule atoms exists that preserves the node constraints and
// every pattern bond with its order. A pattern larger than the molecule
// returns false.
bool match_pattern(const Molecule& m, const AlertPattern& p);

bool matches_any(const Molecule& m, const std::vector<AlertPattern>& patterns);

struct AlertFlags {
  bool pains = false;
  bool brenk = false;
};

AlertFlags alert_flags(const Molecule& m, const std::vector<AlertPattern>& pains,
                       const std::vector<AlertPattern>& brenk);

// Loads a line-oriented pattern file: `name<TAB>expression`, '#' comments.
// Throws PatternError on malformed lines or unparseable patterns.
std::vector<AlertPattern> load_alert_file(const std::string& path);

}  // namespace molverdict
