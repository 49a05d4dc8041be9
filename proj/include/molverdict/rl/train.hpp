//
// Project MolVerdict - Copyright 2026 MolVerdict Developers.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "molverdict/rl/grpo.hpp"

namespace molverdict {

struct TrainConfig {
  int group_size = 4;
  // Toy-policy scale, calibrated on the synthetic task. (The trainer setup
  // this mirrors ran an 8B LLM at 5e-6.)
  double learning_rate = 0.03;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.99;
  double weight_decay = 0.1;
  int warmup_steps = 100;
  double grad_clip_norm = 0.1;
  double clip_epsilon = 0.2;
  double kl_beta = 0.04;
  // Penalize KL against the frozen training-start policy (reference-model
  // regularization, as in the trainer this mirrors). When false the penalty
  // targets the per-step sampling policy instead and vanishes at theta_old.
  bool kl_reference_initial = true;
  int total_steps = 2000;
  int batch_prompts = 4;
  int checkpoint_interval = 500;
  SamplingParams sampling;  // rollout sampling; defaults to untruncated T=1
  std::uint64_t seed = 0;

  void validate() const;
};

struct TrainPrompt {
  std::string id;
  int context = 0;
  Label truth = Label::kUnapproved;
};

struct TraceRow {
  int step = 0;
  double lr = 0.0;
  double loss = 0.0;
  double kl = 0.0;
  double grad_norm = 0.0;  // post-clipping
  double mean_total = 0.0;
  double mean_correctness = 0.0;
  double mean_xml_format = 0.0;
  double mean_soft_format = 0.0;
  double mean_interpretability = 0.0;
  double mean_confidence_alignment = 0.0;
};

using RewardFn = std::function<RewardBreakdown(const std::string& completion, Label truth,
                                               const std::string& prompt_id, int step)>;

struct AdamState {
  std::vector<double> m, v;
  int t = 0;
};

using CheckpointSink =
    std::function<void(int step, const ToyPolicy& policy, const AdamState& adam)>;

enum class TrainStatus { kOk, kDiverged };

struct TrainResult {
  ToyPolicy policy;
  TrainStatus status = TrainStatus::kOk;
  int last_step = 0;
  std::vector<TraceRow> trace;
};

// Linear warmup from zero over `warmup_steps`, then cosine decay to zero at
// `total_steps` (both 0-based step indices).
double lr_at_step(int step, const TrainConfig& config);

// One optimizer epoch per step: sample `batch_prompts` prompts with
// `group_size` completions each under the pre-update policy, score them,
// compute the clipped-surrogate + KL loss, clip the gradient to
// `grad_clip_norm` (global L2) and apply a decoupled-weight-decay Adam
// update. Checkpoints are emitted every `checkpoint_interval` steps and at
// the final step. A non-finite loss aborts with the last checkpointed
// parameters.
TrainResult train_policy(const ToyPolicy& initial, const std::vector<TrainPrompt>& prompts,
                         const RewardFn& reward_fn, const TrainConfig& config,
                         const CheckpointSink& checkpoint_sink = {});

// Versioned checkpoint file ("MVCKPT01"): policy dims + params + optimizer
// moments + step.
void save_checkpoint(const std::string& path, const ToyPolicy& policy, const AdamState& adam,
                     int step);
struct Checkpoint {
  ToyPolicy policy;
  AdamState adam;
  int step = 0;
};
Checkpoint load_checkpoint(const std::string& path);

}  // namespace molverdict
