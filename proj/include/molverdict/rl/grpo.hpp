//
// Project MolVerdict - Copyright 2026 MolVerdict Developers.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "molverdict/label.hpp"
#include "molverdict/reason/rewards.hpp"
#include "molverdict/rl/sampler.hpp"
#include "molverdict/rl/toy_policy.hpp"

namespace molverdict {

// K completions for one prompt with rewards, group-centered advantages and
// the log-probabilities recorded at sampling time (under the pre-update
// policy).
struct GroupRollout {
  std::string prompt_id;
  int context = 0;
  Label truth = Label::kUnapproved;
  std::vector<SampledSequence> completions;
  std::vector<double> rewards;
  std::vector<double> advantages;
};

// A_k = R_k - mean(R). Throws GroupTooSmall for K < 2.
std::vector<double> group_advantages(std::span<const double> rewards);

// r = exp(logp_new - logp_old), per completion (sequence-level sum of token
// log-probs).
double importance_ratio(double logp_new, double logp_old);

// min(r*A, clip(r, 1-eps, 1+eps)*A)
double clipped_surrogate(double ratio, double advantage, double epsilon);

// Exact per-token categorical KL(pi_old || pi_new) averaged over the visited
// positions of the sampled completions for one prompt.
double kl_penalty(const ToyPolicy& policy_old, const ToyPolicy& policy_new, int context,
                  std::span<const SampledSequence> completions);

struct LossGrad {
  double loss = 0.0;
  double kl = 0.0;  // sum over prompts of the per-prompt mean KL
  std::vector<double> grad;
};

// Batch objective
//   L(theta) = -sum_j sum_k min(r A, clip(r) A) + beta * sum_j KL_j
// with its closed-form gradient in the toy-policy parameters. Importance
// ratios are always taken against `policy_old` (the sampling policy). The KL
// penalty is taken against `policy_ref` when given, matching trainers that
// regularize toward a frozen reference model; with policy_ref == nullptr it
// falls back to policy_old, in which case both the KL value and its gradient
// vanish at theta = theta_old under per-step refresh.
LossGrad grpo_loss(std::span<const GroupRollout> rollouts, const ToyPolicy& policy,
                   const ToyPolicy& policy_old, double epsilon, double beta,
                   const ToyPolicy* policy_ref = nullptr);

}  // namespace molverdict
