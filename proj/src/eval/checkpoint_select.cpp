//
// Project MolVerdict - Copyright 2026 MolVerdict Developers.
// SPDX-License-Identifier: Apache-2.0
//

#include "molverdict/eval/checkpoint_select.hpp"

#include <vector>

namespace molverdict {

namespace {

double auc_or_low(const Metrics& m) { return m.auc.value_or(-1.0); }

// true when a beats b under (auc, f1, step)
bool better(const CheckpointMetrics& a, const CheckpointMetrics& b) {
  if (auc_or_low(a.metrics) != auc_or_low(b.metrics))
    return auc_or_low(a.metrics) > auc_or_low(b.metrics);
  if (a.metrics.f1 != b.metrics.f1) return a.metrics.f1 > b.metrics.f1;
  return a.step > b.step;
}

}  // namespace

CheckpointChoice select_checkpoint(std::span<const CheckpointMetrics> checkpoints) {
  if (checkpoints.empty())
    throw EvalError(EvalErrorKind::kNoCheckpoints, "no checkpoints to select from");

  const CheckpointMetrics* best = nullptr;
  for (const auto& c : checkpoints) {
    if (c.metrics.format_adherence_rate < 1.0) continue;
    if (best == nullptr || better(c, *best)) best = &c;
  }
  if (best != nullptr) return CheckpointChoice{best->step, true, ""};

  // fallback: maximum adherence, then the usual ordering
  for (const auto& c : checkpoints) {
    if (best == nullptr || c.metrics.format_adherence_rate > best->metrics.format_adherence_rate ||
        (c.metrics.format_adherence_rate == best->metrics.format_adherence_rate &&
         better(c, *best)))
      best = &c;
  }
  return CheckpointChoice{
      best->step, false,
      "no fully format-adherent checkpoint; fell back to maximum adherence"};
}

}  // namespace molverdict
