//
// Project MolVerdict - Copyright 2026 MolVerdict Developers.
// SPDX-License-Identifier: Apache-2.0
//

#include "molverdict/gbdt/neighbors.hpp"

#include <algorithm>

namespace molverdict {

namespace {

std::vector<Neighbor> smallest_k(std::vector<Neighbor> candidates, int k,
                                 const std::string& what) {
  if (static_cast<int>(candidates.size()) < k)
    throw GbdtError(GbdtErrorKind::kInsufficientPool,
                    "fewer than k=" + std::to_string(k) + " " + what + " pool candidates");
  std::sort(candidates.begin(), candidates.end(), [](const Neighbor& a, const Neighbor& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.id < b.id;
  });
  candidates.resize(k);
  return candidates;
}

}  // namespace

NeighborSet top_k_neighbors(const LeafVector& query, const std::string& query_id,
                            const std::vector<PoolEntry>& pool, int k) {
  std::vector<Neighbor> approved, unapproved;
  for (const PoolEntry& entry : pool) {
    if (entry.id == query_id) continue;  // self-comparison exclusion
    const int d = hamming(query, entry.leaves);
    (entry.label == Label::kApproved ? approved : unapproved).push_back({entry.id, d});
  }
  NeighborSet out;
  out.approved = smallest_k(std::move(approved), k, "approved");
  out.unapproved = smallest_k(std::move(unapproved), k, "unapproved");
  return out;
}

NeighborSet top_k_neighbors(const GbdtModel& model, const std::string& query_id,
                            const Embedding& query,
                            const std::vector<std::pair<Embedding, Label>>& pool, int k) {
  // classifier features are float32
  auto to_floats = [](const Embedding& e) {
    return std::vector<float>(e.values.begin(), e.values.end());
  };
  std::vector<PoolEntry> entries;
  entries.reserve(pool.size());
  for (const auto& [embedding, label] : pool)
    entries.push_back(
        {embedding.molecule_id, label, leaf_embedding(model, to_floats(embedding))});
  return top_k_neighbors(leaf_embedding(model, to_floats(query)), query_id, entries, k);
}

std::vector<NeighborSet> neighbors_for_all_serial(const std::vector<NeighborQuery>& queries,
                                                  const std::vector<PoolEntry>& pool, int k) {
  std::vector<NeighborSet> out(queries.size());
  for (std::size_t i = 0; i < queries.size(); ++i)
    out[i] = top_k_neighbors(queries[i].leaves, queries[i].id, pool, k);
  return out;
}

std::vector<NeighborSet> neighbors_for_all(const std::vector<NeighborQuery>& queries,
                                           const std::vector<PoolEntry>& pool, int k) {
  std::vector<NeighborSet> out(queries.size());
  const std::int64_t n = static_cast<std::int64_t>(queries.size());
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      out[i] = top_k_neighbors(queries[i].leaves, queries[i].id, pool, k);
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace molverdict
