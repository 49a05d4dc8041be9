//
// Project MolVerdict - Copyright 2026 MolVerdict Developers.
// SPDX-License-Identifier: Apache-2.0
//

#include "molverdict/chem/molecule.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>
#include <stdexcept>

namespace molverdict {

std::vector<int> component_ids(const Molecule& m) {
  std::vector<int> comp(m.atoms.size(), -1);
  int next = 0;
  for (int start = 0; start < m.atom_count(); ++start) {
    if (comp[start] >= 0) continue;
    std::deque<int> queue{start};
    comp[start] = next;
    while (!queue.empty()) {
      const int a = queue.front();
      queue.pop_front();
      for (const auto& [nb, bi] : m.adjacency[a]) {
        (void)bi;
        if (comp[nb] < 0) {
          comp[nb] = next;
          queue.push_back(nb);
        }
      }
    }
    ++next;
  }
  return comp;
}

int Molecule::component_count() const {
  if (atoms.empty()) return 0;
  auto comp = component_ids(*this);
  return 1 + *std::max_element(comp.begin(), comp.end());
}

double Molecule::bond_order_sum(int atom) const {
  double sum = 0.0;
  for (const auto& [nb, bi] : adjacency[atom]) {
    (void)nb;
    sum += bond_valence(bonds[bi].order);
  }
  return sum;
}

int Molecule::heavy_degree(int atom) const {
  int n = 0;
  for (const auto& [nb, bi] : adjacency[atom]) {
    (void)bi;
    if (atoms[nb].element != "H") ++n;
  }
  return n;
}

const Bond* Molecule::bond_between(int a, int b) const {
  for (const auto& [nb, bi] : adjacency[a])
    if (nb == b) return &bonds[bi];
  return nullptr;
}

namespace {

// Bridge detection (Tarjan low-link). A bond is a ring bond iff it is not a
// bridge.
std::vector<bool> find_ring_bonds(const Molecule& m) {
  const int n = m.atom_count();
  std::vector<bool> ring(m.bonds.size(), false);
  std::vector<int> disc(n, -1), low(n, 0);
  int timer = 0;

  std::function<void(int, int)> dfs = [&](int a, int parent_bond) {
    disc[a] = low[a] = timer++;
    for (const auto& [nb, bi] : m.adjacency[a]) {
      if (bi == parent_bond) continue;
      if (disc[nb] < 0) {
        dfs(nb, bi);
        low[a] = std::min(low[a], low[nb]);
        if (low[nb] <= disc[a]) ring[bi] = true;  // not a bridge
      } else {
        low[a] = std::min(low[a], disc[nb]);
        if (disc[nb] < disc[a]) ring[bi] = true;  // back edge
      }
    }
  };
  for (int a = 0; a < n; ++a)
    if (disc[a] < 0) dfs(a, -1);
  return ring;
}

// Shortest cycle through a given bond: BFS from a to b that may not use the
// bond itself.
std::vector<int> shortest_cycle_through(const Molecule& m, int bond_index) {
  const Bond& bond = m.bonds[bond_index];
  std::vector<int> prev(m.atoms.size(), -1);
  std::deque<int> queue{bond.a};
  prev[bond.a] = bond.a;
  while (!queue.empty()) {
    const int a = queue.front();
    queue.pop_front();
    if (a == bond.b) break;
    for (const auto& [nb, bi] : m.adjacency[a]) {
      if (bi == bond_index || prev[nb] >= 0) continue;
      prev[nb] = a;
      queue.push_back(nb);
    }
  }
  if (prev[bond.b] < 0) return {};
  std::vector<int> cycle;
  for (int a = bond.b; a != bond.a; a = prev[a]) cycle.push_back(a);
  cycle.push_back(bond.a);
  return cycle;
}

// Rotates/reflects an atom cycle into a canonical orientation so duplicate
// rings collapse.
std::vector<int> canonical_cycle(std::vector<int> cycle) {
  const std::size_t n = cycle.size();
  auto pos = std::min_element(cycle.begin(), cycle.end()) - cycle.begin();
  std::vector<int> fwd(n), bwd(n);
  for (std::size_t i = 0; i < n; ++i) {
    fwd[i] = cycle[(pos + i) % n];
    bwd[i] = cycle[(pos + n - i) % n];
  }
  return std::min(fwd, bwd);
}

}  // namespace

void finalize_molecule(Molecule& m) {
  for (const Bond& b : m.bonds) {
    if (b.a < 0 || b.b < 0 || b.a >= m.atom_count() || b.b >= m.atom_count())
      throw std::logic_error("bond endpoint out of range");
    if (b.a == b.b) throw std::logic_error("self bond");
  }

  m.adjacency.assign(m.atoms.size(), {});
  for (std::size_t bi = 0; bi < m.bonds.size(); ++bi) {
    m.adjacency[m.bonds[bi].a].emplace_back(m.bonds[bi].b, static_cast<int>(bi));
    m.adjacency[m.bonds[bi].b].emplace_back(m.bonds[bi].a, static_cast<int>(bi));
  }

  const auto ring_bond = find_ring_bonds(m);
  for (auto& atom : m.atoms) atom.in_ring = false;
  for (std::size_t bi = 0; bi < m.bonds.size(); ++bi) {
    m.bonds[bi].in_ring = ring_bond[bi];
    if (ring_bond[bi]) {
      m.atoms[m.bonds[bi].a].in_ring = true;
      m.atoms[m.bonds[bi].b].in_ring = true;
    }
  }

  std::set<std::vector<int>> rings;
  for (std::size_t bi = 0; bi < m.bonds.size(); ++bi) {
    if (!ring_bond[bi]) continue;
    auto cycle = shortest_cycle_through(m, static_cast<int>(bi));
    if (!cycle.empty()) rings.insert(canonical_cycle(std::move(cycle)));
  }
  m.rings.assign(rings.begin(), rings.end());
}

}  // namespace molverdict
