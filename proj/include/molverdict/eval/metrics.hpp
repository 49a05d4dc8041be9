//
// Project MolVerdict - Copyright 2026 MolVerdict Developers.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>

#include "molverdict/label.hpp"

namespace molverdict {

enum class EvalErrorKind {
  kLengthMismatch,
  kSingleClassInput,
  kClassTooSmall,
  kNoCheckpoints,
};

class EvalError : public std::runtime_error {
 public:
  EvalError(EvalErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
  EvalErrorKind kind() const { return kind_; }

 private:
  EvalErrorKind kind_;
};

// Binary-classification metrics; "approved" is the positive class.
struct Metrics {
  std::optional<double> auc;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;       // sensitivity on the approved class
  double specificity = 0.0;
  double f1 = 0.0;
  int n_pos = 0;
  int n_neg = 0;
  double format_adherence_rate = 1.0;
};

// Confusion-count metrics (AUC left unset). Zero denominators yield 0.
Metrics confusion_metrics(std::span<const Label> predictions, std::span<const Label> truths);

// Mann-Whitney AUC with half-credit ties, computed from midranks in
// O(n log n). Exactly equals pairwise counting.
double auc(std::span<const double> scores, std::span<const Label> truths);

// Pairwise-counting reference kernels (exact; integer pair accumulation, so
// the parallel reduction is bit-deterministic).
double auc_pair_count_serial(std::span<const double> scores, std::span<const Label> truths);
double auc_pair_count(std::span<const double> scores, std::span<const Label> truths);

}  // namespace molverdict
