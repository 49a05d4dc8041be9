//
// Project MolVerdict - Copyright 2026 MolVerdict Developers.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <string>
#include <vector>

#include "molverdict/embed/fingerprint.hpp"

namespace molverdict {

// Embedding cache file: 8-byte magic "MVEMB001", u32 version, u32 dim,
// u64 count, then per row a length-prefixed molecule id followed by dim
// 32-bit floats. Little-endian.
void write_embeddings(const std::string& path, const std::vector<Embedding>& embeddings,
                      int dim);
std::vector<Embedding> read_embeddings(const std::string& path, int* dim_out = nullptr);

// CSV export: header `molecule_id,v0,...`, one row per embedding.
void export_embeddings_csv(const std::string& path, const std::vector<Embedding>& embeddings,
                           int dim);

}  // namespace molverdict
