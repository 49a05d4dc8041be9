//
// Project MolVerdict - Copyright 2026 MolVerdict Developers.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "molverdict/eval/metrics.hpp"
#include "molverdict/label.hpp"

namespace molverdict {

struct SplitRatios {
  double train = 0.8;
  double val = 0.1;
  double test = 0.1;
};

struct SplitIndices {
  std::vector<int> train, val, test;
};

// Class-stratified partition. Per class the counts follow largest-remainder
// rounding (ties favor earlier buckets), which keeps every bucket within 1
// of the exact ratio. Deterministic by seed. Throws ClassTooSmall when a
// class has fewer than 10 members.
SplitIndices stratified_split(std::span<const Label> labels, const SplitRatios& ratios,
                              std::uint64_t seed);

// Indices retained after randomly reducing the majority class to the
// minority size; original order preserved, seeded. Balanced input comes back
// unchanged.
std::vector<int> undersample_indices(std::span<const Label> labels, std::uint64_t seed);

// Indices of external entries whose canonical form does not appear in the
// internal canonical set.
std::vector<int> remove_overlap(const std::vector<std::string>& external_canonical,
                                const std::vector<std::string>& internal_canonical);

}  // namespace molverdict
