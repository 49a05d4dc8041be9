//
// Project MolVerdict - Copyright 2026 MolVerdict Developers.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "molverdict/chem/molecule.hpp"

namespace molverdict {

// Fixed-dimension molecular embedding. Values are L2-normalized. Kept in
// double precision in memory; the cache file stores 32-bit floats.
struct Embedding {
  std::vector<double> values;
  std::string molecule_id;

  int dim() const { return static_cast<int>(values.size()); }
};

class EmbedError : public std::runtime_error {
 public:
  explicit EmbedError(const std::string& msg) : std::runtime_error(msg) {}
};

// Deterministic circular (Morgan-style) count fingerprint: for every atom
// and every radius r <= `radius`, a canonical invariant of the r-neighborhood
// is FNV-1a hashed into [0, dim); counts are accumulated and L2-normalized.
// No randomness, stable across runs and platforms.
// Preconditions: radius in [0,4], dim >= 64. Throws EmbedError on an empty
// molecule.
Embedding circular_fingerprint(const Molecule& m, int radius, int dim);

struct BatchItem {
  Embedding embedding;
  std::string error;  // empty on success
  bool ok = false;
};

// Element-wise circular_fingerprint over a batch; order preserved and
// per-item failures reported without aborting the batch. The default path
// runs the items in parallel; the serial variant is the reference
// implementation kept for tests and benchmarking.
std::vector<BatchItem> embed_batch(const std::vector<Molecule>& molecules, int radius, int dim);
std::vector<BatchItem> embed_batch_serial(const std::vector<Molecule>& molecules, int radius,
                                          int dim);

// Convenience: parse + fingerprint, isolating per-item parse errors.
std::vector<BatchItem> embed_smiles_batch(const std::vector<std::string>& smiles, int radius,
                                          int dim);

}  // namespace molverdict
