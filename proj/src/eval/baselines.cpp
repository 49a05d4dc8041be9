//
// Project MolVerdict - Copyright 2026 MolVerdict Developers.
// SPDX-License-Identifier: Apache-2.0
//

#include "molverdict/eval/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace molverdict {

std::string to_string(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::kLogistic: return "logistic_regression";
    case BaselineKind::kLinearSvm: return "linear_svm";
    case BaselineKind::kKnn: return "knn";
    case BaselineKind::kGbdt: return "gbdt";
  }
  return "unknown";
}

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double dot(std::span<const double> w, std::span<const float> x) {
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * x[i];
  return s;
}

void fit_logistic(BaselineModel& model, const Matrix& X, std::span<const int> y,
                  const BaselineParams& params) {
  const int n = X.rows, d = X.cols;
  model.weights.assign(d, 0.0);
  model.bias = 0.0;
  std::vector<double> grad(d);
  double grad_b = 0.0;
  for (int iter = 0; iter < params.logistic_iterations; ++iter) {
    std::fill(grad.begin(), grad.end(), 0.0);
    grad_b = 0.0;
    for (int r = 0; r < n; ++r) {
      const double err = sigmoid(dot(model.weights, X.row(r)) + model.bias) - y[r];
      const auto row = X.row(r);
      for (int c = 0; c < d; ++c) grad[c] += err * row[c];
      grad_b += err;
    }
    for (int c = 0; c < d; ++c) {
      grad[c] = grad[c] / n + params.logistic_l2 * model.weights[c];
      model.weights[c] -= params.logistic_lr * grad[c];
    }
    grad_b /= n;
    model.bias -= params.logistic_lr * grad_b;
  }
  double max_grad = std::abs(grad_b);
  for (double g : grad) max_grad = std::max(max_grad, std::abs(g));
  model.converged = max_grad < 1e-3;
}

void fit_svm(BaselineModel& model, const Matrix& X, std::span<const int> y,
             const BaselineParams& params) {
  const int n = X.rows, d = X.cols;
  model.weights.assign(d, 0.0);
  model.bias = 0.0;
  std::vector<double> grad(d);
  double violation_fraction = 1.0;
  for (int iter = 0; iter < params.svm_iterations; ++iter) {
    std::fill(grad.begin(), grad.end(), 0.0);
    double grad_b = 0.0;
    int violations = 0;
    for (int r = 0; r < n; ++r) {
      const double target = y[r] == 1 ? 1.0 : -1.0;
      const double margin = target * (dot(model.weights, X.row(r)) + model.bias);
      if (margin < 1.0) {
        const auto row = X.row(r);
        for (int c = 0; c < d; ++c) grad[c] -= target * row[c];
        grad_b -= target;
        ++violations;
      }
    }
    const double lr = params.svm_lr / (1.0 + 0.01 * iter);
    for (int c = 0; c < d; ++c)
      model.weights[c] -= lr * (grad[c] / n + params.svm_l2 * model.weights[c]);
    model.bias -= lr * grad_b / n;
    violation_fraction = static_cast<double>(violations) / n;
  }
  model.converged = violation_fraction < 0.5;
}

}  // namespace

BaselineModel fit_baseline(BaselineKind kind, const Matrix& X, std::span<const int> y,
                           const BaselineParams& params) {
  if (X.rows != static_cast<int>(y.size()) || X.rows == 0)
    throw EvalError(EvalErrorKind::kLengthMismatch, "feature/label row count mismatch");
  const int n_pos = static_cast<int>(std::count(y.begin(), y.end(), 1));
  if (n_pos == 0 || n_pos == X.rows)
    throw EvalError(EvalErrorKind::kSingleClassInput,
                    "baseline fitting needs both classes");

  BaselineModel model;
  model.kind = kind;
  switch (kind) {
    case BaselineKind::kLogistic:
      fit_logistic(model, X, y, params);
      break;
    case BaselineKind::kLinearSvm:
      fit_svm(model, X, y, params);
      break;
    case BaselineKind::kKnn:
      model.train_X = X;
      model.train_y.assign(y.begin(), y.end());
      model.knn_k = params.knn_k;
      break;
    case BaselineKind::kGbdt:
      model.gbdt = fit_gbdt(X, std::vector<int>(y.begin(), y.end()), params.gbdt);
      break;
  }
  return model;
}

ScoredPrediction predict_baseline(const BaselineModel& model, std::span<const float> x) {
  ScoredPrediction out;
  switch (model.kind) {
    case BaselineKind::kLogistic: {
      out.score = sigmoid(dot(model.weights, x) + model.bias);
      out.label = out.score >= 0.5 ? Label::kApproved : Label::kUnapproved;
      break;
    }
    case BaselineKind::kLinearSvm: {
      out.score = dot(model.weights, x) + model.bias;
      out.label = out.score >= 0.0 ? Label::kApproved : Label::kUnapproved;
      break;
    }
    case BaselineKind::kKnn: {
      const int n = model.train_X.rows;
      std::vector<std::pair<double, int>> dist(n);
      for (int r = 0; r < n; ++r) {
        const auto row = model.train_X.row(r);
        double d2 = 0.0;
        for (std::size_t c = 0; c < x.size(); ++c) {
          const double diff = static_cast<double>(row[c]) - x[c];
          d2 += diff * diff;
        }
        dist[r] = {d2, r};
      }
      const int k = std::min(model.knn_k, n);
      std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
      int positives = 0;
      for (int i = 0; i < k; ++i) positives += model.train_y[dist[i].second];
      out.score = static_cast<double>(positives) / k;
      out.label = out.score >= 0.5 ? Label::kApproved : Label::kUnapproved;
      break;
    }
    case BaselineKind::kGbdt: {
      out.score = predict_proba(model.gbdt, x);
      out.label = out.score >= 0.5 ? Label::kApproved : Label::kUnapproved;
      break;
    }
  }
  return out;
}

}  // namespace molverdict
