//
// Project MolVerdict - Copyright 2026 MolVerdict Developers.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <string>
#include <vector>

#include "molverdict/embed/fingerprint.hpp"
#include "molverdict/gbdt/gbdt.hpp"
#include "molverdict/label.hpp"

namespace molverdict {

struct PoolEntry {
  std::string id;
  Label label = Label::kUnapproved;
  LeafVector leaves;
};

struct Neighbor {
  std::string id;
  int distance = 0;
};

// k nearest approved and k nearest unapproved pool members by leaf-vector
// Hamming distance, each list sorted ascending by (distance, id).
struct NeighborSet {
  std::vector<Neighbor> approved;
  std::vector<Neighbor> unapproved;
};

// The query id is excluded when present in the pool (self-comparison).
// Throws InsufficientPool when either class has fewer than k candidates.
NeighborSet top_k_neighbors(const LeafVector& query, const std::string& query_id,
                            const std::vector<PoolEntry>& pool, int k = 5);

// Convenience matching the classifier-side interface: leaf vectors computed
// from raw embeddings through the model.
NeighborSet top_k_neighbors(const GbdtModel& model, const std::string& query_id,
                            const Embedding& query,
                            const std::vector<std::pair<Embedding, Label>>& pool, int k = 5);

struct NeighborQuery {
  std::string id;
  LeafVector leaves;
};

// Neighbor sets for many queries against one pool; queries are independent,
// so the parallel path distributes them across threads. The serial variant
// is the reference kept for tests and benchmarking.
std::vector<NeighborSet> neighbors_for_all(const std::vector<NeighborQuery>& queries,
                                           const std::vector<PoolEntry>& pool, int k = 5);
std::vector<NeighborSet> neighbors_for_all_serial(const std::vector<NeighborQuery>& queries,
                                                  const std::vector<PoolEntry>& pool, int k = 5);

}  // namespace molverdict
