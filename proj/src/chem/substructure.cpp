//
// Project MolVerdict - Copyright 2026 MolVerdict Developers.
// SPDX-License-Identifier: Apache-2.0
//

#include "molverdict/chem/substructure.hpp"

#include <algorithm>
#include <fstream>

#include "molverdict/chem/smiles.hpp"

namespace molverdict {

AlertPattern AlertPattern::compile(std::string name, std::string_view expression) {
  ParsedPattern parsed;
  try {
    parsed = parse_pattern_expression(expression);
  } catch (const SmilesError& e) {
    throw PatternError("pattern '" + name + "': " + e.what());
  }
  if (parsed.graph.empty())
    throw PatternError("pattern '" + name + "' is empty");
  if (parsed.graph.component_count() != 1)
    throw PatternError("pattern '" + name + "' is not connected");
  AlertPattern p;
  p.name = std::move(name);
  p.graph = std::move(parsed.graph);
  p.ring_req = std::move(parsed.ring_req);
  return p;
}

namespace {

bool node_compatible(const Molecule& m, int ma, const AlertPattern& p, int pa) {
  const Atom& mol_atom = m.atoms[ma];
  const Atom& pat_atom = p.graph.atoms[pa];
  if (mol_atom.element != pat_atom.element) return false;
  if (mol_atom.aromatic != pat_atom.aromatic) return false;
  if (mol_atom.formal_charge != pat_atom.formal_charge) return false;
  switch (p.ring_req[pa]) {
    case RingConstraint::kAny: break;
    case RingConstraint::kInRing:
      if (!mol_atom.in_ring) return false;
      break;
    case RingConstraint::kNotInRing:
      if (mol_atom.in_ring) return false;
      break;
  }
  return m.degree(ma) >= p.graph.degree(pa);
}

// Pattern atom visit order: BFS from the most constrained atom so each new
// atom (after the first) is adjacent to an already-mapped one.
std::vector<int> pattern_order(const AlertPattern& p) {
  const int n = p.graph.atom_count();
  int start = 0;
  for (int i = 1; i < n; ++i)
    if (p.graph.degree(i) > p.graph.degree(start)) start = i;
  std::vector<int> order;
  std::vector<bool> seen(n, false);
  order.push_back(start);
  seen[start] = true;
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (const auto& [nb, bi] : p.graph.adjacency[order[head]]) {
      (void)bi;
      if (!seen[nb]) {
        seen[nb] = true;
        order.push_back(nb);
      }
    }
  }
  return order;  // pattern is connected, so this covers every atom
}

bool extend(const Molecule& m, const AlertPattern& p, const std::vector<int>& order,
            std::size_t depth, std::vector<int>& pat_to_mol, std::vector<bool>& used) {
  if (depth == order.size()) return true;
  const int pa = order[depth];

  for (int ma = 0; ma < m.atom_count(); ++ma) {
    if (used[ma] || !node_compatible(m, ma, p, pa)) continue;
    bool ok = true;
    for (const auto& [pnb, pbi] : p.graph.adjacency[pa]) {
      const int mapped = pat_to_mol[pnb];
      if (mapped < 0) continue;
      const Bond* mb = m.bond_between(ma, mapped);
      if (mb == nullptr || mb->order != p.graph.bonds[pbi].order) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    pat_to_mol[pa] = ma;
    used[ma] = true;
    if (extend(m, p, order, depth + 1, pat_to_mol, used)) return true;
    pat_to_mol[pa] = -1;
    used[ma] = false;
  }
  return false;
}

}  // namespace

bool match_pattern(const Molecule& m, const AlertPattern& p) {
  if (p.graph.atom_count() > m.atom_count()) return false;  // documented: false, not an error
  if (p.graph.empty()) return false;
  const auto order = pattern_order(p);
  std::vector<int> pat_to_mol(p.graph.atom_count(), -1);
  std::vector<bool> used(m.atom_count(), false);
  return extend(m, p, order, 0, pat_to_mol, used);
}

bool matches_any(const Molecule& m, const std::vector<AlertPattern>& patterns) {
  return std::any_of(patterns.begin(), patterns.end(),
                     [&](const AlertPattern& p) { return match_pattern(m, p); });
}

AlertFlags alert_flags(const Molecule& m, const std::vector<AlertPattern>& pains,
                       const std::vector<AlertPattern>& brenk) {
  return AlertFlags{matches_any(m, pains), matches_any(m, brenk)};
}

std::vector<AlertPattern> load_alert_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PatternError("cannot open pattern file: " + path);
  std::vector<AlertPattern> patterns;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw PatternError("malformed pattern file " + path + " line " +
                         std::to_string(lineno) + ": expected name<TAB>expression");
    const std::string name = line.substr(0, tab);
    const std::string expr = line.substr(tab + 1);
    if (name.empty() || expr.empty())
      throw PatternError("malformed pattern file " + path + " line " +
                         std::to_string(lineno) + ": empty field");
    patterns.push_back(AlertPattern::compile(name, expr));
  }
  return patterns;
}

}  // namespace molverdict
