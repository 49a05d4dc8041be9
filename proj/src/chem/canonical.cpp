//
// Project MolVerdict - Copyright 2026 MolVerdict Developers.
// SPDX-License-Identifier: Apache-2.0
//

#include "molverdict/chem/canonical.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "molverdict/chem/smiles.hpp"

namespace molverdict {

namespace {

// Emitted-string candidates explored per component before giving up. Only
// pathologically symmetric graphs (far beyond drug-like molecules) hit this.
constexpr int kMaxCandidates = 100000;

std::vector<int> dense_ranks(const std::vector<std::vector<long long>>& keys) {
  const int n = static_cast<int>(keys.size());
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return keys[a] < keys[b]; });
  std::vector<int> ranks(n, 0);
  int rank = 0;
  for (int i = 0; i < n; ++i) {
    if (i > 0 && keys[idx[i]] != keys[idx[i - 1]]) ++rank;
    ranks[idx[i]] = rank;
  }
  return ranks;
}

int class_count(const std::vector<int>& ranks) {
  return ranks.empty() ? 0 : 1 + *std::max_element(ranks.begin(), ranks.end());
}

long long element_code(const std::string& element) {
  long long code = 0;
  for (char c : element) code = code * 256 + static_cast<unsigned char>(c);
  return code;
}

std::vector<int> initial_ranks(const Molecule& m) {
  std::vector<std::vector<long long>> keys(m.atom_count());
  for (int i = 0; i < m.atom_count(); ++i) {
    const Atom& a = m.atoms[i];
    keys[i] = {element_code(a.element), a.aromatic ? 1 : 0, a.formal_charge,
               a.hydrogens, m.degree(i)};
  }
  return dense_ranks(keys);
}

// Morgan-style refinement: split classes by the sorted multiset of
// (bond order, neighbor class) until stable.
void refine(const Molecule& m, std::vector<int>& ranks) {
  int classes = class_count(ranks);
  while (true) {
    std::vector<std::vector<long long>> keys(m.atom_count());
    for (int i = 0; i < m.atom_count(); ++i) {
      std::vector<long long> nb_keys;
      for (const auto& [nb, bi] : m.adjacency[i])
        nb_keys.push_back(static_cast<long long>(m.bonds[bi].order) * 1000003 + ranks[nb]);
      std::sort(nb_keys.begin(), nb_keys.end());
      keys[i].push_back(ranks[i]);
      keys[i].insert(keys[i].end(), nb_keys.begin(), nb_keys.end());
    }
    auto next = dense_ranks(keys);
    const int next_classes = class_count(next);
    ranks = std::move(next);
    if (next_classes == classes) break;
    classes = next_classes;
  }
}

std::vector<int> promote(const std::vector<int>& ranks, int atom) {
  std::vector<std::vector<long long>> keys(ranks.size());
  for (std::size_t i = 0; i < ranks.size(); ++i)
    keys[i] = {2LL * ranks[i] - (static_cast<int>(i) == atom ? 1 : 0)};
  return dense_ranks(keys);
}

std::string charge_suffix(int charge) {
  if (charge == 0) return "";
  std::string s(1, charge > 0 ? '+' : '-');
  const int mag = std::abs(charge);
  if (mag > 1) s += std::to_string(mag);
  return s;
}

std::string atom_token(const Molecule& m, int a) {
  const Atom& atom = m.atoms[a];
  std::string sym = atom.element;
  if (atom.aromatic)
    for (auto& c : sym) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));

  const bool organic = is_organic_subset(atom.element);
  const int bare_h =
      organic ? implicit_hydrogens(atom.element, atom.aromatic, m.bond_order_sum(a)) : -2;
  const bool bracket =
      !organic || atom.formal_charge != 0 || atom.hydrogens != bare_h;
  if (!bracket) return sym;

  std::string out = "[" + sym;
  if (atom.hydrogens == 1) out += "H";
  else if (atom.hydrogens > 1) out += "H" + std::to_string(atom.hydrogens);
  out += charge_suffix(atom.formal_charge);
  out += "]";
  return out;
}

// Bond text such that reparsing restores the same order: unannotated bonds
// come back aromatic only for in-ring aromatic-aromatic pairs.
std::string bond_token(const Molecule& m, const Bond& b) {
  const bool both_aromatic = m.atoms[b.a].aromatic && m.atoms[b.b].aromatic;
  switch (b.order) {
    case BondOrder::kSingle: return both_aromatic ? "-" : "";
    case BondOrder::kDouble: return "=";
    case BondOrder::kTriple: return "#";
    case BondOrder::kAromatic: return both_aromatic ? "" : ":";
  }
  return "";
}

class Emitter {
 public:
  Emitter(const Molecule& m, const std::vector<int>& ranks) : m_(m), ranks_(ranks) {}

  std::string emit(int start) {
    visit_index_.assign(m_.atom_count(), -1);
    tree_children_.assign(m_.atom_count(), {});
    closures_at_.assign(m_.atom_count(), {});
    bond_seen_.assign(m_.bonds.size(), false);
    timer_ = 0;
    discover(start, -1);
    for (auto& list : closures_at_) {
      std::sort(list.begin(), list.end(), [&](int x, int y) {
        return partner_order(x) < partner_order(y);
      });
    }
    digits_.clear();
    for (int d = 1; d <= 99; ++d) free_digits_.insert(d);
    return render(start);
  }

 private:
  long long partner_order(int bond_index) {
    const Bond& b = m_.bonds[bond_index];
    const long long lo = std::min(visit_index_[b.a], visit_index_[b.b]);
    const long long hi = std::max(visit_index_[b.a], visit_index_[b.b]);
    return lo * 100000 + hi;
  }

  void discover(int a, int parent_bond) {
    visit_index_[a] = timer_++;
    auto neighbors = m_.adjacency[a];
    std::sort(neighbors.begin(), neighbors.end(),
              [&](const auto& x, const auto& y) { return ranks_[x.first] < ranks_[y.first]; });
    for (const auto& [nb, bi] : neighbors) {
      if (bi == parent_bond) continue;
      if (visit_index_[nb] < 0) {
        tree_children_[a].push_back(bi);
        discover(nb, bi);
      } else if (!bond_seen_[bi]) {
        bond_seen_[bi] = true;
        closures_at_[a].push_back(bi);
        closures_at_[nb].push_back(bi);
      }
    }
  }

  std::string digit_text(int d) {
    if (d < 10) return std::string(1, static_cast<char>('0' + d));
    return "%" + std::to_string(d);
  }

  std::string render(int a) {
    std::string out = atom_token(m_, a);
    for (int bi : closures_at_[a]) {
      auto it = digits_.find(bi);
      if (it == digits_.end()) {
        const int d = *free_digits_.begin();
        free_digits_.erase(free_digits_.begin());
        digits_[bi] = d;
        out += bond_token(m_, m_.bonds[bi]);
        out += digit_text(d);
      } else {
        const int d = it->second;
        digits_.erase(it);
        free_digits_.insert(d);
        out += digit_text(d);
      }
    }
    const auto& children = tree_children_[a];
    for (std::size_t i = 0; i < children.size(); ++i) {
      const Bond& b = m_.bonds[children[i]];
      const int child = b.a == a ? b.b : b.a;
      std::string sub = bond_token(m_, b) + render(child);
      if (i + 1 < children.size())
        out += "(" + sub + ")";
      else
        out += sub;
    }
    return out;
  }

  const Molecule& m_;
  const std::vector<int>& ranks_;
  std::vector<int> visit_index_;
  std::vector<std::vector<int>> tree_children_;
  std::vector<std::vector<int>> closures_at_;
  std::vector<bool> bond_seen_;
  int timer_ = 0;
  std::map<int, int> digits_;
  std::set<int> free_digits_;
};

// Extracts the connected component containing `keep` atoms as a standalone
// molecule; `mapping` gives new index per old atom (-1 outside).
Molecule extract_component(const Molecule& m, const std::vector<int>& atoms,
                           std::vector<int>& mapping) {
  mapping.assign(m.atom_count(), -1);
  Molecule sub;
  for (int a : atoms) {
    mapping[a] = sub.atom_count();
    sub.atoms.push_back(m.atoms[a]);
  }
  for (const Bond& b : m.bonds) {
    if (mapping[b.a] >= 0 && mapping[b.b] >= 0) {
      Bond nb = b;
      nb.a = mapping[b.a];
      nb.b = mapping[b.b];
      sub.bonds.push_back(nb);
    }
  }
  finalize_molecule(sub);
  return sub;
}

// Enumerates tie-split rankings and returns the smallest emitted string.
// `forced_start` < 0 means start at the minimum-rank atom.
std::string smallest_emission(const Molecule& m, int forced_start) {
  std::string best;
  bool have_best = false;
  int candidates = 0;

  std::function<void(std::vector<int>)> explore = [&](std::vector<int> ranks) {
    refine(m, ranks);
    int split_rank = -1;
    for (int r = 0; r < class_count(ranks) && split_rank < 0; ++r) {
      int count = 0;
      for (int x : ranks)
        if (x == r) ++count;
      if (count > 1) split_rank = r;
    }
    if (split_rank < 0) {
      if (++candidates > kMaxCandidates)
        throw std::runtime_error("canonicalization: symmetry explosion");
      int start = forced_start;
      if (start < 0)
        start = static_cast<int>(std::min_element(ranks.begin(), ranks.end()) - ranks.begin());
      std::string s = Emitter(m, ranks).emit(start);
      if (!have_best || s < best) {
        best = std::move(s);
        have_best = true;
      }
      return;
    }
    for (int a = 0; a < m.atom_count(); ++a)
      if (ranks[a] == split_rank) explore(promote(ranks, a));
  };

  explore(initial_ranks(m));
  return best;
}

}  // namespace

std::string canonical_form(const Molecule& m) {
  if (m.empty()) return "";
  const auto comp = component_ids(m);
  const int n_comp = 1 + *std::max_element(comp.begin(), comp.end());
  std::vector<std::vector<int>> groups(n_comp);
  for (int a = 0; a < m.atom_count(); ++a) groups[comp[a]].push_back(a);

  std::vector<std::string> parts;
  for (const auto& atoms : groups) {
    std::vector<int> mapping;
    const Molecule sub = extract_component(m, atoms, mapping);
    parts.push_back(smallest_emission(sub, -1));
  }
  std::sort(parts.begin(), parts.end());
  std::string out = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) out += "." + parts[i];
  return out;
}

std::string rooted_canonical_form(const Molecule& m, int root) {
  if (root < 0 || root >= m.atom_count())
    throw std::out_of_range("rooted_canonical_form: bad root");
  const auto comp = component_ids(m);
  std::vector<int> atoms;
  for (int a = 0; a < m.atom_count(); ++a)
    if (comp[a] == comp[root]) atoms.push_back(a);
  std::vector<int> mapping;
  const Molecule sub = extract_component(m, atoms, mapping);
  return smallest_emission(sub, mapping[root]);
}

}  // namespace molverdict
