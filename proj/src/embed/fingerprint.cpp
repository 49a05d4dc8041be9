//
// Project MolVerdict - Copyright 2026 MolVerdict Developers.
// SPDX-License-Identifier: Apache-2.0
//

#include "molverdict/embed/fingerprint.hpp"

#include <algorithm>
#include <cmath>

#include "molverdict/chem/smiles.hpp"
#include "molverdict/util/hash.hpp"

namespace molverdict {

namespace {

std::string atom_invariant(const Molecule& m, int a) {
  const Atom& atom = m.atoms[a];
  return atom.element + "|" + (atom.aromatic ? "1" : "0") + "|" +
         std::to_string(atom.formal_charge) + "|" + std::to_string(atom.hydrogens) + "|" +
         std::to_string(m.degree(a));
}

}  // namespace

Embedding circular_fingerprint(const Molecule& m, int radius, int dim) {
  if (radius < 0 || radius > 4) throw std::invalid_argument("radius must be in [0,4]");
  if (dim < 64) throw std::invalid_argument("dim must be >= 64");
  if (m.empty()) throw EmbedError("cannot embed an empty molecule");

  const int n = m.atom_count();
  std::vector<std::uint64_t> ids(n);
  for (int a = 0; a < n; ++a) ids[a] = fnv1a64(atom_invariant(m, a));

  std::vector<double> counts(dim, 0.0);
  for (int a = 0; a < n; ++a) counts[ids[a] % dim] += 1.0;

  for (int r = 1; r <= radius; ++r) {
    std::vector<std::uint64_t> next(n);
    for (int a = 0; a < n; ++a) {
      std::vector<std::string> parts;
      parts.reserve(m.adjacency[a].size());
      for (const auto& [nb, bi] : m.adjacency[a])
        parts.push_back(std::to_string(static_cast<int>(m.bonds[bi].order)) + ":" +
                        std::to_string(ids[nb]));
      std::sort(parts.begin(), parts.end());
      std::string key = std::to_string(ids[a]);
      for (const auto& p : parts) key += "|" + p;
      next[a] = fnv1a64(key);
    }
    ids = std::move(next);
    for (int a = 0; a < n; ++a) counts[ids[a] % dim] += 1.0;
  }

  double norm = 0.0;
  for (double c : counts) norm += c * c;
  norm = std::sqrt(norm);

  Embedding e;
  e.values.resize(dim);
  for (int i = 0; i < dim; ++i) e.values[i] = norm > 0.0 ? counts[i] / norm : 0.0;
  return e;
}

namespace {

BatchItem embed_one(const Molecule& m, int radius, int dim) {
  BatchItem item;
  try {
    item.embedding = circular_fingerprint(m, radius, dim);
    item.ok = true;
  } catch (const std::exception& e) {
    item.error = e.what();
  }
  return item;
}

}  // namespace

std::vector<BatchItem> embed_batch_serial(const std::vector<Molecule>& molecules, int radius,
                                          int dim) {
  std::vector<BatchItem> out(molecules.size());
  for (std::size_t i = 0; i < molecules.size(); ++i)
    out[i] = embed_one(molecules[i], radius, dim);
  return out;
}

std::vector<BatchItem> embed_batch(const std::vector<Molecule>& molecules, int radius, int dim) {
  std::vector<BatchItem> out(molecules.size());
  const std::int64_t n = static_cast<std::int64_t>(molecules.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < n; ++i) out[i] = embed_one(molecules[i], radius, dim);
  return out;
}

std::vector<BatchItem> embed_smiles_batch(const std::vector<std::string>& smiles, int radius,
                                          int dim) {
  std::vector<BatchItem> out(smiles.size());
  const std::int64_t n = static_cast<std::int64_t>(smiles.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      out[i].embedding = circular_fingerprint(parse_smiles(smiles[i]), radius, dim);
      out[i].ok = true;
    } catch (const std::exception& e) {
      out[i].error = e.what();
    }
  }
  return out;
}

}  // namespace molverdict
