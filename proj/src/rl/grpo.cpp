//
// Project MolVerdict - Copyright 2026 MolVerdict Developers.
// SPDX-License-Identifier: Apache-2.0
//

#include "molverdict/rl/grpo.hpp"

#include <algorithm>
#include <cmath>

namespace molverdict {

std::vector<double> group_advantages(std::span<const double> rewards) {
  if (rewards.size() < 2)
    throw RlError(RlErrorKind::kGroupTooSmall, "advantage group needs K >= 2");
  double mean = 0.0;
  for (double r : rewards) mean += r;
  mean /= static_cast<double>(rewards.size());
  std::vector<double> advantages(rewards.size());
  for (std::size_t i = 0; i < rewards.size(); ++i) advantages[i] = rewards[i] - mean;
  return advantages;
}

double importance_ratio(double logp_new, double logp_old) {
  return std::exp(logp_new - logp_old);
}

double clipped_surrogate(double ratio, double advantage, double epsilon) {
  const double clipped = std::clamp(ratio, 1.0 - epsilon, 1.0 + epsilon);
  return std::min(ratio * advantage, clipped * advantage);
}

double kl_penalty(const ToyPolicy& policy_old, const ToyPolicy& policy_new, int context,
                  std::span<const SampledSequence> completions) {
  if (policy_old.vocab_size() != policy_new.vocab_size())
    throw RlError(RlErrorKind::kVocabularyMismatch, "policies use different vocabularies");
  double total = 0.0;
  int positions = 0;
  for (const SampledSequence& seq : completions) {
    int prev = -1;
    for (std::size_t t = 0; t < seq.tokens.size(); ++t) {
      const auto lp_old = policy_old.log_distribution(context, static_cast<int>(t), prev);
      const auto lp_new = policy_new.log_distribution(context, static_cast<int>(t), prev);
      double kl = 0.0;
      for (int v = 0; v < policy_old.vocab_size(); ++v)
        kl += std::exp(lp_old[v]) * (lp_old[v] - lp_new[v]);
      total += kl;
      ++positions;
      prev = seq.tokens[t];
    }
  }
  return positions > 0 ? total / positions : 0.0;
}

LossGrad grpo_loss(std::span<const GroupRollout> rollouts, const ToyPolicy& policy,
                   const ToyPolicy& policy_old, double epsilon, double beta,
                   const ToyPolicy* policy_ref) {
  if (policy.vocab_size() != policy_old.vocab_size())
    throw RlError(RlErrorKind::kVocabularyMismatch, "policies use different vocabularies");
  const ToyPolicy& reference = policy_ref != nullptr ? *policy_ref : policy_old;
  if (policy.vocab_size() != reference.vocab_size())
    throw RlError(RlErrorKind::kVocabularyMismatch, "reference policy vocabulary mismatch");

  LossGrad out;
  out.grad.assign(policy.params().size(), 0.0);
  const int vocab = policy.vocab_size();

  for (const GroupRollout& rollout : rollouts) {
    const std::size_t k = rollout.completions.size();
    if (k < 2 || rollout.rewards.size() != k || rollout.advantages.size() != k)
      throw RlError(RlErrorKind::kIncompleteRollout,
                    "rollout for " + rollout.prompt_id + " is missing rewards or advantages");

    for (std::size_t i = 0; i < k; ++i) {
      const SampledSequence& seq = rollout.completions[i];
      if (seq.tokens.empty() || seq.token_logps.size() != seq.tokens.size())
        throw RlError(RlErrorKind::kIncompleteRollout, "completion missing log-probs");

      // new log-prob of the sequence
      double logp_new = 0.0;
      int prev = -1;
      for (std::size_t t = 0; t < seq.tokens.size(); ++t) {
        const auto lp = policy.log_distribution(rollout.context, static_cast<int>(t), prev);
        logp_new += lp[seq.tokens[t]];
        prev = seq.tokens[t];
      }

      const double logp_old = seq.total_logp();
      const double ratio = importance_ratio(logp_new, logp_old);
      const double advantage = rollout.advantages[i];
      const double unclipped = ratio * advantage;
      const double clipped = std::clamp(ratio, 1.0 - epsilon, 1.0 + epsilon) * advantage;
      out.loss -= std::min(unclipped, clipped);

      // gradient flows only through the unclipped branch of the min
      if (unclipped <= clipped) {
        const double coeff = -advantage * ratio;
        prev = -1;
        for (std::size_t t = 0; t < seq.tokens.size(); ++t) {
          const auto lp = policy.log_distribution(rollout.context, static_cast<int>(t), prev);
          const int token = seq.tokens[t];
          for (int v = 0; v < vocab; ++v) {
            const double d = (v == token ? 1.0 : 0.0) - std::exp(lp[v]);
            const double g = coeff * d;
            out.grad[policy.ctx_index(rollout.context, v)] += g;
            out.grad[policy.pos_index(static_cast<int>(t), v)] += g;
            out.grad[policy.prev_index(prev, v)] += g;
          }
          prev = token;
        }
      }
    }

    if (beta != 0.0) {
      // exact categorical KL over the visited positions, averaged per prompt
      int positions = 0;
      for (const auto& seq : rollout.completions)
        positions += static_cast<int>(seq.tokens.size());
      if (positions > 0) {
        double kl_sum = 0.0;
        const double scale = beta / positions;
        for (const SampledSequence& seq : rollout.completions) {
          int prev = -1;
          for (std::size_t t = 0; t < seq.tokens.size(); ++t) {
            const auto lp_old =
                reference.log_distribution(rollout.context, static_cast<int>(t), prev);
            const auto lp_new =
                policy.log_distribution(rollout.context, static_cast<int>(t), prev);
            for (int v = 0; v < vocab; ++v) {
              const double p_old = std::exp(lp_old[v]);
              const double p_new = std::exp(lp_new[v]);
              kl_sum += p_old * (lp_old[v] - lp_new[v]);
              const double g = scale * (p_new - p_old);
              out.grad[policy.ctx_index(rollout.context, v)] += g;
              out.grad[policy.pos_index(static_cast<int>(t), v)] += g;
              out.grad[policy.prev_index(prev, v)] += g;
            }
            prev = seq.tokens[t];
          }
        }
        const double kl_mean = kl_sum / positions;
        out.kl += kl_mean;
        out.loss += beta * kl_mean;
      }
    }
  }
  return out;
}

}  // namespace molverdict
