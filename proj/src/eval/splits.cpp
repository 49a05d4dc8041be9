//
// Project MolVerdict - Copyright 2026 MolVerdict Developers.
// SPDX-License-Identifier: Apache-2.0
//

#include "molverdict/eval/splits.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <unordered_set>

#include "molverdict/util/hash.hpp"
#include "molverdict/util/rng.hpp"

namespace molverdict {

namespace {

// Largest-remainder apportionment of n into the three buckets.
std::array<int, 3> apportion(int n, const SplitRatios& ratios) {
  const double exact[3] = {n * ratios.train, n * ratios.val, n * ratios.test};
  std::array<int, 3> counts{};
  double fractional[3];
  int assigned = 0;
  for (int b = 0; b < 3; ++b) {
    counts[b] = static_cast<int>(std::floor(exact[b] + 1e-9));
    fractional[b] = exact[b] - counts[b];
    assigned += counts[b];
  }
  int remainder = n - assigned;
  while (remainder > 0) {
    int pick = 0;
    for (int b = 1; b < 3; ++b)
      if (fractional[b] > fractional[pick] + 1e-12) pick = b;
    ++counts[pick];
    fractional[pick] = -1.0;
    --remainder;
  }
  return counts;
}

}  // namespace

SplitIndices stratified_split(std::span<const Label> labels, const SplitRatios& ratios,
                              std::uint64_t seed) {
  SplitIndices out;
  for (int cls = 0; cls < 2; ++cls) {
    const Label label = cls == 0 ? Label::kApproved : Label::kUnapproved;
    std::vector<int> members;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == label) members.push_back(static_cast<int>(i));
    if (members.size() < 10)
      throw EvalError(EvalErrorKind::kClassTooSmall,
                      "class " + to_string(label) + " has fewer than 10 members");
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(cls)));
    rng.shuffle(members);
    const auto counts = apportion(static_cast<int>(members.size()), ratios);
    auto it = members.begin();
    out.train.insert(out.train.end(), it, it + counts[0]);
    it += counts[0];
    out.val.insert(out.val.end(), it, it + counts[1]);
    it += counts[1];
    out.test.insert(out.test.end(), it, members.end());
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.val.begin(), out.val.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

std::vector<int> undersample_indices(std::span<const Label> labels, std::uint64_t seed) {
  std::vector<int> approved, unapproved;
  for (std::size_t i = 0; i < labels.size(); ++i)
    (labels[i] == Label::kApproved ? approved : unapproved).push_back(static_cast<int>(i));

  std::vector<int>& majority = approved.size() >= unapproved.size() ? approved : unapproved;
  const std::size_t minority_size = std::min(approved.size(), unapproved.size());

  Rng rng(mix_seed(seed, 0xba1a));
  rng.shuffle(majority);
  majority.resize(minority_size);

  std::vector<int> kept;
  kept.reserve(2 * minority_size);
  kept.insert(kept.end(), approved.begin(), approved.end());
  kept.insert(kept.end(), unapproved.begin(), unapproved.end());
  std::sort(kept.begin(), kept.end());
  return kept;
}

std::vector<int> remove_overlap(const std::vector<std::string>& external_canonical,
                                const std::vector<std::string>& internal_canonical) {
  const std::unordered_set<std::string> internal(internal_canonical.begin(),
                                                 internal_canonical.end());
  std::vector<int> retained;
  for (std::size_t i = 0; i < external_canonical.size(); ++i)
    if (internal.find(external_canonical[i]) == internal.end())
      retained.push_back(static_cast<int>(i));
  return retained;
}

}  // namespace molverdict
