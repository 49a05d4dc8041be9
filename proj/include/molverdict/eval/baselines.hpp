//
// Project MolVerdict - Copyright 2026 MolVerdict Developers.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <span>
#include <string>
#include <vector>

#include "molverdict/eval/metrics.hpp"
#include "molverdict/gbdt/gbdt.hpp"
#include "molverdict/label.hpp"
#include "molverdict/util/matrix.hpp"

namespace molverdict {

enum class BaselineKind { kLogistic, kLinearSvm, kKnn, kGbdt };

std::string to_string(BaselineKind kind);

struct BaselineParams {
  // logistic regression (full-batch gradient descent on log-loss + L2)
  double logistic_lr = 0.5;
  int logistic_iterations = 2000;
  double logistic_l2 = 1e-4;
  // linear SVM (subgradient descent on hinge loss + L2)
  double svm_lr = 0.5;
  int svm_iterations = 2000;
  double svm_l2 = 1e-3;
  // k-nearest neighbors
  int knn_k = 5;
  // boosted trees
  GbdtParams gbdt;
};

struct BaselineModel {
  BaselineKind kind = BaselineKind::kLogistic;
  std::vector<double> weights;  // logistic / svm
  double bias = 0.0;
  Matrix train_X;  // knn keeps its training set
  std::vector<int> train_y;
  int knn_k = 5;
  GbdtModel gbdt;
  bool converged = true;  // reported, not fatal
};

struct ScoredPrediction {
  Label label = Label::kUnapproved;
  // P(approved) for logistic/knn/gbdt; signed margin for the SVM (sign
  // agrees with the label).
  double score = 0.0;
};

// Throws SingleClassInput unless both classes are present.
BaselineModel fit_baseline(BaselineKind kind, const Matrix& X, std::span<const int> y,
                           const BaselineParams& params = {});

ScoredPrediction predict_baseline(const BaselineModel& model, std::span<const float> x);

}  // namespace molverdict
