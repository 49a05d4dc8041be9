//
// Project MolVerdict - Copyright 2026 MolVerdict Developers.
// SPDX-License-Identifier: Apache-2.0
//

#include "molverdict/rl/train.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "molverdict/util/binio.hpp"
#include "molverdict/util/hash.hpp"

namespace molverdict {

void TrainConfig::validate() const {
  if (group_size < 2) throw std::invalid_argument("group_size must be >= 2");
  if (clip_epsilon <= 0.0) throw std::invalid_argument("clip_epsilon must be > 0");
  if (kl_beta < 0.0) throw std::invalid_argument("kl_beta must be >= 0");
  if (warmup_steps > total_steps)
    throw std::invalid_argument("warmup_steps must not exceed total_steps");
  if (batch_prompts < 1) throw std::invalid_argument("batch_prompts must be >= 1");
}

double lr_at_step(int step, const TrainConfig& config) {
  if (config.warmup_steps > 0 && step < config.warmup_steps)
    return config.learning_rate * static_cast<double>(step) / config.warmup_steps;
  const int span = std::max(1, config.total_steps - config.warmup_steps);
  const double progress =
      std::min(1.0, static_cast<double>(step - config.warmup_steps) / span);
  return config.learning_rate * 0.5 * (1.0 + std::cos(M_PI * progress));
}

namespace {

double global_norm(const std::vector<double>& grad) {
  double s = 0.0;
  for (double g : grad) s += g * g;
  return std::sqrt(s);
}

bool finite(double x) { return std::isfinite(x); }

}  // namespace

TrainResult train_policy(const ToyPolicy& initial, const std::vector<TrainPrompt>& prompts,
                         const RewardFn& reward_fn, const TrainConfig& config,
                         const CheckpointSink& checkpoint_sink) {
  config.validate();
  if (prompts.empty()) throw std::invalid_argument("prompt set is empty");

  TrainResult result;
  result.policy = initial;
  ToyPolicy& policy = result.policy;
  const ToyPolicy reference = initial;

  AdamState adam;
  adam.m.assign(policy.params().size(), 0.0);
  adam.v.assign(policy.params().size(), 0.0);

  ToyPolicy last_good = policy;
  const int n = static_cast<int>(prompts.size());

  for (int step = 0; step < config.total_steps; ++step) {
    // sample the batch under the pre-update policy (theta_old == theta here)
    Rng batch_rng(mix_seed(config.seed, 0x5a5a0000ull + static_cast<std::uint64_t>(step)));
    std::vector<int> chosen(config.batch_prompts);
    for (int& c : chosen) c = static_cast<int>(batch_rng.uniform_int(n));

    std::vector<GroupRollout> rollouts(config.batch_prompts);
    const std::int64_t batch = config.batch_prompts;
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t slot = 0; slot < batch; ++slot) {
      const TrainPrompt& prompt = prompts[chosen[slot]];
      GroupRollout rollout;
      rollout.prompt_id = prompt.id;
      rollout.context = prompt.context;
      rollout.truth = prompt.truth;
      rollout.completions = sample_group(
          policy, prompt.context, config.group_size, config.sampling,
          mix_seed(config.seed, (static_cast<std::uint64_t>(step) << 20) + 7919ull * slot));
      rollouts[slot] = std::move(rollout);
    }

    // reward scoring in slot order (keeps the qualitative log deterministic)
    TraceRow row;
    row.step = step;
    int n_completions = 0;
    for (auto& rollout : rollouts) {
      rollout.rewards.reserve(rollout.completions.size());
      for (const auto& seq : rollout.completions) {
        const std::string text = policy.vocab().render(seq.tokens);
        const RewardBreakdown b = reward_fn(text, rollout.truth, rollout.prompt_id, step);
        rollout.rewards.push_back(b.total);
        row.mean_total += b.total;
        row.mean_correctness += b.correctness;
        row.mean_xml_format += b.xml_format;
        row.mean_soft_format += b.soft_format;
        row.mean_interpretability += b.interpretability;
        row.mean_confidence_alignment += b.confidence_alignment;
        ++n_completions;
      }
      rollout.advantages = group_advantages(rollout.rewards);
    }
    row.mean_total /= n_completions;
    row.mean_correctness /= n_completions;
    row.mean_xml_format /= n_completions;
    row.mean_soft_format /= n_completions;
    row.mean_interpretability /= n_completions;
    row.mean_confidence_alignment /= n_completions;

    LossGrad lg = grpo_loss(rollouts, policy, policy, config.clip_epsilon, config.kl_beta,
                            config.kl_reference_initial ? &reference : nullptr);
    bool ok = finite(lg.loss);
    for (double g : lg.grad)
      if (!finite(g)) ok = false;
    if (!ok) {
      policy = last_good;
      result.status = TrainStatus::kDiverged;
      result.last_step = step;
      return result;
    }

    double norm = global_norm(lg.grad);
    if (norm > config.grad_clip_norm && norm > 0.0) {
      const double scale = config.grad_clip_norm / norm;
      for (double& g : lg.grad) g *= scale;
      norm = config.grad_clip_norm;
    }

    const double lr = lr_at_step(step, config);
    adam.t += 1;
    const double bc1 = 1.0 - std::pow(config.adam_beta1, adam.t);
    const double bc2 = 1.0 - std::pow(config.adam_beta2, adam.t);
    auto& params = policy.params();
    for (std::size_t i = 0; i < params.size(); ++i) {
      adam.m[i] = config.adam_beta1 * adam.m[i] + (1.0 - config.adam_beta1) * lg.grad[i];
      adam.v[i] =
          config.adam_beta2 * adam.v[i] + (1.0 - config.adam_beta2) * lg.grad[i] * lg.grad[i];
      const double m_hat = adam.m[i] / bc1;
      const double v_hat = adam.v[i] / bc2;
      params[i] -= lr * (m_hat / (std::sqrt(v_hat) + 1e-8) + config.weight_decay * params[i]);
    }

    row.lr = lr;
    row.loss = lg.loss;
    row.kl = lg.kl;
    row.grad_norm = norm;
    result.trace.push_back(row);
    result.last_step = step;

    const int done = step + 1;
    if ((config.checkpoint_interval > 0 && done % config.checkpoint_interval == 0) ||
        done == config.total_steps) {
      if (checkpoint_sink) checkpoint_sink(done, policy, adam);
      last_good = policy;
    }
  }
  return result;
}

namespace {
constexpr char kCheckpointMagic[8] = {'M', 'V', 'C', 'K', 'P', 'T', '0', '1'};
}

void save_checkpoint(const std::string& path, const ToyPolicy& policy, const AdamState& adam,
                     int step) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
  write_magic(out, kCheckpointMagic);
  write_pod<std::uint32_t>(out, 1);
  write_pod<std::int32_t>(out, policy.n_contexts());
  write_pod<std::int32_t>(out, policy.max_len());
  write_pod<std::int32_t>(out, policy.vocab_size());
  write_pod<std::int32_t>(out, step);
  write_pod<std::int32_t>(out, adam.t);
  auto write_vec = [&](const std::vector<double>& v) {
    write_pod<std::uint64_t>(out, v.size());
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(sizeof(double) * v.size()));
  };
  write_vec(policy.params());
  write_vec(adam.m);
  write_vec(adam.v);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
  expect_magic(in, kCheckpointMagic, path);
  const auto version = read_pod<std::uint32_t>(in);
  if (version != 1) throw std::runtime_error("unsupported checkpoint version in " + path);
  const auto n_contexts = read_pod<std::int32_t>(in);
  const auto max_len = read_pod<std::int32_t>(in);
  const auto vocab_size = read_pod<std::int32_t>(in);

  Checkpoint ckpt;
  ckpt.step = read_pod<std::int32_t>(in);
  ckpt.adam.t = read_pod<std::int32_t>(in);
  ckpt.policy = ToyPolicy(n_contexts, max_len);
  if (ckpt.policy.vocab_size() != vocab_size)
    throw std::runtime_error("checkpoint vocabulary size mismatch in " + path);
  auto read_vec = [&](std::vector<double>& v) {
    const auto size = read_pod<std::uint64_t>(in);
    v.resize(size);
    in.read(reinterpret_cast<char*>(v.data()),
            static_cast<std::streamsize>(sizeof(double) * size));
    if (!in) throw std::runtime_error("truncated checkpoint: " + path);
  };
  read_vec(ckpt.policy.params());
  read_vec(ckpt.adam.m);
  read_vec(ckpt.adam.v);
  return ckpt;
}

}  // namespace molverdict
