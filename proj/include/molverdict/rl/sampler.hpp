//
// Project MolVerdict - Copyright 2026 MolVerdict Developers.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <vector>

#include "molverdict/rl/toy_policy.hpp"
#include "molverdict/util/rng.hpp"

namespace molverdict {

struct SamplingParams {
  double temperature = 1.0;
  int top_k = 0;     // 0 disables top-k truncation
  double top_p = 1.0;  // 1 disables nucleus truncation
};

struct SampledSequence {
  std::vector<int> tokens;
  std::vector<double> token_logps;  // under the untruncated distribution

  double total_logp() const {
    double s = 0.0;
    for (double lp : token_logps) s += lp;
    return s;
  }
};

// Truncated sampling distribution for one step: temperature scaling, then
// top-k, then nucleus (top-p), renormalized. Exposed for tests; sums to 1.
std::vector<double> truncated_distribution(const std::vector<double>& log_probs,
                                           const SamplingParams& params);

// Ancestral sampling of one completion; per-token log-probs are recorded
// under the untruncated (temperature-scaled) distribution. temperature == 0
// degenerates to greedy argmax.
SampledSequence sample_sequence(const ToyPolicy& policy, int context,
                                const SamplingParams& params, Rng& rng);

// K completions for one prompt context, deterministic given the seed.
std::vector<SampledSequence> sample_group(const ToyPolicy& policy, int context, int k,
                                          const SamplingParams& params, std::uint64_t seed);

}  // namespace molverdict
