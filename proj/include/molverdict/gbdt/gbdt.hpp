//
// Project MolVerdict - Copyright 2026 MolVerdict Developers.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "molverdict/util/matrix.hpp"

namespace molverdict {

enum class GbdtErrorKind {
  kSingleClassInput,
  kDimensionMismatch,
  kLengthMismatch,
  kInsufficientPool,
  kNoCompletedTrials,
};

class GbdtError : public std::runtime_error {
 public:
  GbdtError(GbdtErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  GbdtErrorKind kind() const { return kind_; }

 private:
  GbdtErrorKind kind_;
};

struct GbdtParams {
  double learning_rate = 0.1;
  int max_depth = 4;
  double l1_reg = 0.0;
  double l2_reg = 1.0;
  double row_subsample = 1.0;  // (0,1]
  double col_subsample = 1.0;  // (0,1]
  int n_rounds = 100;
  int early_stop_rounds = 0;  // 0 disables early stopping
  std::uint64_t seed = 0;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;  // leaf weight, unscaled

  bool leaf() const { return feature < 0; }
};

struct Tree {
  std::vector<TreeNode> nodes;  // node 0 is the root

  // Index of the terminal node reached by x.
  int leaf_of(std::span<const float> x) const;
};

struct GbdtModel {
  GbdtParams params;
  double base_score = 0.0;  // log-odds
  int n_features = 0;
  std::vector<Tree> trees;
  int best_iteration = -1;  // set when early stopping truncated the model
  std::vector<double> train_loss_curve;
  std::vector<double> eval_loss_curve;
};

struct FitOptions {
  const Matrix* eval_X = nullptr;
  const std::vector<int>* eval_y = nullptr;
  // Called after each round with the eval log-loss; returning false aborts
  // the fit (used by the tuner's median pruner).
  std::function<bool(int round, double eval_loss)> round_callback;
  bool parallel = true;  // OpenMP split scan; the serial path is the reference
};

// Newton boosting on the logistic loss with exact greedy splits,
// L2-regularized leaf weights and soft-threshold L1. Deterministic given
// (data, params, seed) regardless of thread count.
GbdtModel fit_gbdt(const Matrix& X, const std::vector<int>& y, const GbdtParams& params,
                   const FitOptions& options = {});

double predict_margin(const GbdtModel& model, std::span<const float> x);
double predict_proba(const GbdtModel& model, std::span<const float> x);

// Per-tree terminal leaf indices.
struct LeafVector {
  std::vector<std::int32_t> leaves;

  int size() const { return static_cast<int>(leaves.size()); }
};

LeafVector leaf_embedding(const GbdtModel& model, std::span<const float> x);

// Count of coordinates at which the two leaf vectors differ.
int hamming(const LeafVector& a, const LeafVector& b);

double log_loss(std::span<const double> probs, std::span<const int> labels);

// Versioned binary model file ("MVGBDT01").
void save_gbdt(const std::string& path, const GbdtModel& model);
GbdtModel load_gbdt(const std::string& path);

}  // namespace molverdict
