//
// Project MolVerdict - Copyright 2026 MolVerdict Developers.
// SPDX-License-Identifier: Apache-2.0
//

#include "molverdict/rl/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "molverdict/util/hash.hpp"

namespace molverdict {

std::vector<double> truncated_distribution(const std::vector<double>& log_probs,
                                           const SamplingParams& params) {
  const int v = static_cast<int>(log_probs.size());
  std::vector<int> order(v);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (log_probs[a] != log_probs[b]) return log_probs[a] > log_probs[b];
    return a < b;
  });

  int kept = v;
  if (params.top_k > 0) kept = std::min(kept, params.top_k);

  std::vector<double> probs(v, 0.0);
  double kept_mass = 0.0;
  for (int i = 0; i < kept; ++i) kept_mass += std::exp(log_probs[order[i]]);

  if (params.top_p < 1.0) {
    double cumulative = 0.0;
    int nucleus = 0;
    for (int i = 0; i < kept; ++i) {
      cumulative += std::exp(log_probs[order[i]]) / kept_mass;
      ++nucleus;
      if (cumulative >= params.top_p) break;
    }
    kept = std::max(1, nucleus);
    kept_mass = 0.0;
    for (int i = 0; i < kept; ++i) kept_mass += std::exp(log_probs[order[i]]);
  }

  for (int i = 0; i < kept; ++i)
    probs[order[i]] = std::exp(log_probs[order[i]]) / kept_mass;
  return probs;
}

SampledSequence sample_sequence(const ToyPolicy& policy, int context,
                                const SamplingParams& params, Rng& rng) {
  if (policy.vocab_size() == 0)
    throw RlError(RlErrorKind::kEmptyVocabulary, "policy has an empty vocabulary");

  SampledSequence seq;
  int prev = -1;
  for (int position = 0; position < policy.max_len(); ++position) {
    int token;
    double logp;
    if (params.temperature <= 0.0) {
      // greedy limit
      const auto log_probs = policy.log_distribution(context, position, prev, 1.0);
      token = static_cast<int>(std::max_element(log_probs.begin(), log_probs.end()) -
                               log_probs.begin());
      logp = 0.0;
    } else {
      const auto log_probs =
          policy.log_distribution(context, position, prev, params.temperature);
      const auto probs = truncated_distribution(log_probs, params);
      const double u = rng.uniform();
      double cumulative = 0.0;
      token = -1;
      for (int v = 0; v < policy.vocab_size(); ++v) {
        if (probs[v] <= 0.0) continue;
        token = v;  // last positive-mass token absorbs rounding slack
        cumulative += probs[v];
        if (u < cumulative) break;
      }
      logp = log_probs[token];
    }
    seq.tokens.push_back(token);
    seq.token_logps.push_back(logp);
    if (token == policy.vocab().eos) break;
    prev = token;
  }
  return seq;
}

std::vector<SampledSequence> sample_group(const ToyPolicy& policy, int context, int k,
                                          const SamplingParams& params, std::uint64_t seed) {
  if (k < 2) throw RlError(RlErrorKind::kGroupTooSmall, "group size must be >= 2");
  std::vector<SampledSequence> group;
  group.reserve(k);
  for (int i = 0; i < k; ++i) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(i)));
    group.push_back(sample_sequence(policy, context, params, rng));
  }
  return group;
}

}  // namespace molverdict
