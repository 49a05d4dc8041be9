//
// Project MolVerdict - Copyright 2026 MolVerdict Developers.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "molverdict/chem/descriptors.hpp"
#include "molverdict/gbdt/neighbors.hpp"
#include "molverdict/label.hpp"

namespace molverdict {

class PromptError : public std::runtime_error {
 public:
  explicit PromptError(const std::string& msg) : std::runtime_error(msg) {}
};

struct PromptRecord {
  std::string system_text;
  std::string user_text;
  std::string query_id;
  std::optional<Label> truth;  // absent at inference
};

// System-prompt template file: plain text with {name} placeholders.
struct PromptTemplate {
  std::string text;

  static PromptTemplate load(const std::string& path);
  std::string instantiate(const std::map<std::string, std::string>& vars) const;
};

using DescriptorLookup =
    std::function<std::optional<DescriptorVector>(const std::string& molecule_id)>;

// Fixed field names, fixed order, reals at 3 decimals.
std::string render_descriptor_block(const DescriptorVector& d);

// Deterministic prompt: one query block plus the descriptor blocks of the
// five approved and five unapproved neighbors, resolved through `lookup`.
// No SMILES text ever enters the prompt. Throws PromptError when a neighbor
// descriptor cannot be resolved.
PromptRecord build_prompt(const DescriptorVector& query, const std::string& query_id,
                          std::optional<Label> truth, const NeighborSet& neighbors,
                          const DescriptorLookup& lookup,
                          const PromptTemplate& system_template);

}  // namespace molverdict
