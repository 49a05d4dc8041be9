//
// Project MolVerdict - Copyright 2026 MolVerdict Developers.
// SPDX-License-Identifier: Apache-2.0
//

#include "molverdict/eval/metrics.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

namespace molverdict {

Metrics confusion_metrics(std::span<const Label> predictions, std::span<const Label> truths) {
  if (predictions.size() != truths.size() || truths.empty())
    throw EvalError(EvalErrorKind::kLengthMismatch,
                    "predictions and truths must have equal nonzero length");
  int tp = 0, fp = 0, fn = 0, tn = 0;
  for (std::size_t i = 0; i < truths.size(); ++i) {
    const bool pred_pos = predictions[i] == Label::kApproved;
    const bool truth_pos = truths[i] == Label::kApproved;
    if (pred_pos && truth_pos) ++tp;
    else if (pred_pos && !truth_pos) ++fp;
    else if (!pred_pos && truth_pos) ++fn;
    else ++tn;
  }
  Metrics m;
  m.n_pos = tp + fn;
  m.n_neg = fp + tn;
  const auto rate = [](int num, int den) {
    return den > 0 ? static_cast<double>(num) / den : 0.0;
  };
  m.accuracy = rate(tp + tn, tp + fp + fn + tn);
  m.precision = rate(tp, tp + fp);
  m.recall = rate(tp, tp + fn);
  m.specificity = rate(tn, tn + fp);
  m.f1 = (m.precision + m.recall) > 0.0
             ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
             : 0.0;
  return m;
}

namespace {

void check_auc_inputs(std::span<const double> scores, std::span<const Label> truths,
                      std::int64_t& n_pos, std::int64_t& n_neg) {
  if (scores.size() != truths.size() || truths.empty())
    throw EvalError(EvalErrorKind::kLengthMismatch,
                    "scores and truths must have equal nonzero length");
  n_pos = n_neg = 0;
  for (Label l : truths) (l == Label::kApproved ? n_pos : n_neg) += 1;
  if (n_pos == 0 || n_neg == 0)
    throw EvalError(EvalErrorKind::kSingleClassInput, "AUC needs both classes");
}

}  // namespace

double auc(std::span<const double> scores, std::span<const Label> truths) {
  std::int64_t n_pos = 0, n_neg = 0;
  check_auc_inputs(scores, truths, n_pos, n_neg);

  const std::size_t n = scores.size();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return scores[a] < scores[b]; });

  // doubled midranks stay integral, so the accumulation is exact
  std::int64_t double_rank_sum_pos = 0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const std::int64_t doubled_midrank =
        static_cast<std::int64_t>(i + 1) + static_cast<std::int64_t>(j + 1);
    for (std::size_t k = i; k <= j; ++k)
      if (truths[order[k]] == Label::kApproved) double_rank_sum_pos += doubled_midrank;
    i = j + 1;
  }
  const std::int64_t numerator2 = double_rank_sum_pos - n_pos * (n_pos + 1);
  return static_cast<double>(numerator2) / (2.0 * static_cast<double>(n_pos * n_neg));
}

namespace {

double pair_count_impl(std::span<const double> scores, std::span<const Label> truths,
                       [[maybe_unused]] bool parallel) {
  std::int64_t n_pos = 0, n_neg = 0;
  check_auc_inputs(scores, truths, n_pos, n_neg);

  std::vector<double> pos, neg;
  for (std::size_t i = 0; i < truths.size(); ++i)
    (truths[i] == Label::kApproved ? pos : neg).push_back(scores[i]);

  // wins2 = 2*wins + ties, an integer, so reduction order cannot matter
  std::int64_t wins2 = 0;
  const std::int64_t np = static_cast<std::int64_t>(pos.size());
#pragma omp parallel for schedule(static) reduction(+ : wins2) if (parallel)
  for (std::int64_t i = 0; i < np; ++i) {
    for (double nv : neg) {
      if (pos[i] > nv) wins2 += 2;
      else if (pos[i] == nv) wins2 += 1;
    }
  }
  return static_cast<double>(wins2) / (2.0 * static_cast<double>(n_pos * n_neg));
}

}  // namespace

double auc_pair_count_serial(std::span<const double> scores, std::span<const Label> truths) {
  return pair_count_impl(scores, truths, false);
}

double auc_pair_count(std::span<const double> scores, std::span<const Label> truths) {
  return pair_count_impl(scores, truths, true);
}

}  // namespace molverdict
