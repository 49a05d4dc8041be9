//
// Project MolVerdict - Copyright 2026 MolVerdict Developers.
// SPDX-License-Identifier: Apache-2.0
//

#include "molverdict/gbdt/gbdt.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include "molverdict/util/binio.hpp"
#include "molverdict/util/hash.hpp"
#include "molverdict/util/rng.hpp"

namespace molverdict {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double soft_threshold(double g, double alpha) {
  if (g > alpha) return g - alpha;
  if (g < -alpha) return g + alpha;
  return 0.0;
}

struct SplitCandidate {
  double gain = -std::numeric_limits<double>::infinity();
  int feature = -1;
  double threshold = 0.0;

  bool better_than(const SplitCandidate& other) const {
    if (gain != other.gain) return gain > other.gain;
    if (feature != other.feature) return feature < other.feature;
    return threshold < other.threshold;
  }
};

struct TreeBuilder {
  const Matrix& X;
  const std::vector<double>& grad;
  const std::vector<double>& hess;
  const std::vector<std::vector<int>>& feature_order;  // presorted row indices
  const std::vector<int>& columns;                     // column subsample
  const GbdtParams& params;
  bool parallel;

  Tree tree;

  double leaf_weight(double g, double h) const {
    return -soft_threshold(g, params.l1_reg) / (h + params.l2_reg + 1e-16);
  }

  double score(double g, double h) const {
    const double s = soft_threshold(g, params.l1_reg);
    return s * s / (h + params.l2_reg + 1e-16);
  }

  SplitCandidate scan_feature(int f, const std::vector<char>& in_node, double g_total,
                              double h_total) const {
    SplitCandidate best;
    double g_left = 0.0, h_left = 0.0;
    int n_left = 0, n_total = 0;
    for (int r : feature_order[f])
      if (in_node[r]) ++n_total;
    if (n_total < 2) return best;

    const double parent = score(g_total, h_total);
    double prev_value = 0.0;
    bool have_prev = false;
    for (int r : feature_order[f]) {
      if (!in_node[r]) continue;
      const double value = X.at(r, f);
      if (have_prev && value > prev_value && n_left > 0 && n_left < n_total) {
        const double gain =
            0.5 * (score(g_left, h_left) + score(g_total - g_left, h_total - h_left) - parent);
        SplitCandidate cand{gain, f, 0.5 * (prev_value + value)};
        if (gain > 1e-12 && cand.better_than(best)) best = cand;
      }
      g_left += grad[r];
      h_left += hess[r];
      ++n_left;
      prev_value = value;
      have_prev = true;
    }
    return best;
  }

  SplitCandidate best_split(const std::vector<char>& in_node, double g_total,
                            double h_total) const {
    SplitCandidate best;
    const int n_cols = static_cast<int>(columns.size());
    if (parallel) {
#pragma omp parallel
      {
        SplitCandidate local;
#pragma omp for schedule(static) nowait
        for (int ci = 0; ci < n_cols; ++ci) {
          const SplitCandidate cand = scan_feature(columns[ci], in_node, g_total, h_total);
          if (cand.better_than(local)) local = cand;
        }
#pragma omp critical
        if (local.better_than(best)) best = local;
      }
    } else {
      for (int ci = 0; ci < n_cols; ++ci) {
        const SplitCandidate cand = scan_feature(columns[ci], in_node, g_total, h_total);
        if (cand.better_than(best)) best = cand;
      }
    }
    return best;
  }

  int build(const std::vector<char>& in_node, int n_rows, double g_total, double h_total,
            int depth) {
    const int index = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();

    if (depth >= params.max_depth || n_rows < 2) {
      tree.nodes[index].value = leaf_weight(g_total, h_total);
      return index;
    }
    const SplitCandidate split = best_split(in_node, g_total, h_total);
    if (split.feature < 0) {
      tree.nodes[index].value = leaf_weight(g_total, h_total);
      return index;
    }

    std::vector<char> left(in_node.size(), 0), right(in_node.size(), 0);
    int n_left = 0, n_right = 0;
    double g_left = 0.0, h_left = 0.0;
    for (std::size_t r = 0; r < in_node.size(); ++r) {
      if (!in_node[r]) continue;
      if (X.at(static_cast<int>(r), split.feature) < split.threshold) {
        left[r] = 1;
        ++n_left;
        g_left += grad[r];
        h_left += hess[r];
      } else {
        right[r] = 1;
        ++n_right;
      }
    }

    tree.nodes[index].feature = split.feature;
    tree.nodes[index].threshold = split.threshold;
    const int l = build(left, n_left, g_left, h_left, depth + 1);
    const int r = build(right, n_right, g_total - g_left, h_total - h_left, depth + 1);
    tree.nodes[index].left = l;
    tree.nodes[index].right = r;
    return index;
  }
};

std::vector<char> sample_mask(int n, double fraction, Rng& rng) {
  std::vector<char> mask(n, 1);
  if (fraction >= 1.0) return mask;
  const int keep = std::max(1, static_cast<int>(std::floor(fraction * n)));
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  rng.shuffle(idx);
  std::fill(mask.begin(), mask.end(), 0);
  for (int i = 0; i < keep; ++i) mask[idx[i]] = 1;
  return mask;
}

}  // namespace

int Tree::leaf_of(std::span<const float> x) const {
  int node = 0;
  while (!nodes[node].leaf())
    node = x[nodes[node].feature] < nodes[node].threshold ? nodes[node].left
                                                          : nodes[node].right;
  return node;
}

double log_loss(std::span<const double> probs, std::span<const int> labels) {
  double total = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const double p = std::clamp(probs[i], 1e-12, 1.0 - 1e-12);
    total += labels[i] == 1 ? -std::log(p) : -std::log(1.0 - p);
  }
  return total / static_cast<double>(probs.size());
}

GbdtModel fit_gbdt(const Matrix& X, const std::vector<int>& y, const GbdtParams& params,
                   const FitOptions& options) {
  const int n = X.rows;
  if (n != static_cast<int>(y.size()))
    throw GbdtError(GbdtErrorKind::kDimensionMismatch, "feature/label row count mismatch");
  if (n < 2)
    throw GbdtError(GbdtErrorKind::kDimensionMismatch, "need at least two rows");
  // Single-class input is a legal degenerate fit: the base score saturates
  // and every tree collapses to near-zero leaves.
  const int n_pos = static_cast<int>(std::count(y.begin(), y.end(), 1));
  const bool have_eval = options.eval_X != nullptr && options.eval_y != nullptr;
  if (have_eval && options.eval_X->cols != X.cols)
    throw GbdtError(GbdtErrorKind::kDimensionMismatch, "eval feature width mismatch");

  GbdtModel model;
  model.params = params;
  model.n_features = X.cols;
  const double mean = std::clamp(static_cast<double>(n_pos) / n, 1e-6, 1.0 - 1e-6);
  model.base_score = std::log(mean / (1.0 - mean));

  // Presorted row order per feature (ties by row index) shared by all rounds.
  std::vector<std::vector<int>> feature_order(X.cols);
  for (int f = 0; f < X.cols; ++f) {
    feature_order[f].resize(n);
    std::iota(feature_order[f].begin(), feature_order[f].end(), 0);
    std::stable_sort(feature_order[f].begin(), feature_order[f].end(),
                     [&](int a, int b) { return X.at(a, f) < X.at(b, f); });
  }

  std::vector<double> margin(n, model.base_score);
  std::vector<double> eval_margin;
  if (have_eval) eval_margin.assign(options.eval_X->rows, model.base_score);

  std::vector<double> grad(n), hess(n);
  double best_eval = std::numeric_limits<double>::infinity();
  int best_round = -1;
  bool aborted = false;

  for (int round = 0; round < params.n_rounds && !aborted; ++round) {
    Rng rng(mix_seed(params.seed, static_cast<std::uint64_t>(round)));
    const auto row_mask = sample_mask(n, params.row_subsample, rng);
    std::vector<int> columns;
    {
      const auto col_mask = sample_mask(X.cols, params.col_subsample, rng);
      for (int f = 0; f < X.cols; ++f)
        if (col_mask[f]) columns.push_back(f);
    }

    std::vector<char> in_node(n, 0);
    int n_rows = 0;
    double g_total = 0.0, h_total = 0.0;
    for (int r = 0; r < n; ++r) {
      const double p = sigmoid(margin[r]);
      grad[r] = p - y[r];
      hess[r] = p * (1.0 - p);
      if (row_mask[r]) {
        in_node[r] = 1;
        ++n_rows;
        g_total += grad[r];
        h_total += hess[r];
      }
    }

    TreeBuilder builder{X, grad, hess, feature_order, columns, params, options.parallel, {}};
    builder.build(in_node, n_rows, g_total, h_total, 0);
    model.trees.push_back(std::move(builder.tree));
    const Tree& tree = model.trees.back();

    for (int r = 0; r < n; ++r)
      margin[r] += params.learning_rate * tree.nodes[tree.leaf_of(X.row(r))].value;
    {
      std::vector<double> probs(n);
      for (int r = 0; r < n; ++r) probs[r] = sigmoid(margin[r]);
      model.train_loss_curve.push_back(log_loss(probs, y));
    }

    if (have_eval) {
      const Matrix& eX = *options.eval_X;
      for (int r = 0; r < eX.rows; ++r)
        eval_margin[r] += params.learning_rate * tree.nodes[tree.leaf_of(eX.row(r))].value;
      std::vector<double> probs(eX.rows);
      for (int r = 0; r < eX.rows; ++r) probs[r] = sigmoid(eval_margin[r]);
      const double eval_loss = log_loss(probs, *options.eval_y);
      model.eval_loss_curve.push_back(eval_loss);

      if (eval_loss < best_eval) {
        best_eval = eval_loss;
        best_round = round;
      }
      if (options.round_callback && !options.round_callback(round, eval_loss)) {
        aborted = true;
        break;
      }
      if (params.early_stop_rounds > 0 && round - best_round >= params.early_stop_rounds) {
        model.trees.resize(best_round + 1);
        model.best_iteration = best_round;
        break;
      }
    }
  }

  if (have_eval && model.best_iteration < 0 && best_round >= 0 &&
      params.early_stop_rounds > 0) {
    model.trees.resize(best_round + 1);
    model.best_iteration = best_round;
  }
  return model;
}

double predict_margin(const GbdtModel& model, std::span<const float> x) {
  if (static_cast<int>(x.size()) != model.n_features)
    throw GbdtError(GbdtErrorKind::kDimensionMismatch, "input dimension mismatch");
  double margin = model.base_score;
  for (const Tree& tree : model.trees)
    margin += model.params.learning_rate * tree.nodes[tree.leaf_of(x)].value;
  return margin;
}

double predict_proba(const GbdtModel& model, std::span<const float> x) {
  return sigmoid(predict_margin(model, x));
}

LeafVector leaf_embedding(const GbdtModel& model, std::span<const float> x) {
  if (static_cast<int>(x.size()) != model.n_features)
    throw GbdtError(GbdtErrorKind::kDimensionMismatch, "input dimension mismatch");
  LeafVector lv;
  lv.leaves.reserve(model.trees.size());
  for (const Tree& tree : model.trees)
    lv.leaves.push_back(static_cast<std::int32_t>(tree.leaf_of(x)));
  return lv;
}

int hamming(const LeafVector& a, const LeafVector& b) {
  if (a.leaves.size() != b.leaves.size())
    throw GbdtError(GbdtErrorKind::kLengthMismatch, "leaf vector length mismatch");
  int d = 0;
  for (std::size_t i = 0; i < a.leaves.size(); ++i)
    if (a.leaves[i] != b.leaves[i]) ++d;
  return d;
}

namespace {
constexpr char kModelMagic[8] = {'M', 'V', 'G', 'B', 'D', 'T', '0', '1'};
}

void save_gbdt(const std::string& path, const GbdtModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write model file: " + path);
  write_magic(out, kModelMagic);
  write_pod<std::uint32_t>(out, 1);  // version
  write_pod(out, model.params.learning_rate);
  write_pod<std::int32_t>(out, model.params.max_depth);
  write_pod(out, model.params.l1_reg);
  write_pod(out, model.params.l2_reg);
  write_pod(out, model.params.row_subsample);
  write_pod(out, model.params.col_subsample);
  write_pod<std::int32_t>(out, model.params.n_rounds);
  write_pod<std::int32_t>(out, model.params.early_stop_rounds);
  write_pod<std::uint64_t>(out, model.params.seed);
  write_pod(out, model.base_score);
  write_pod<std::int32_t>(out, model.n_features);
  write_pod<std::int32_t>(out, model.best_iteration);
  write_pod<std::uint64_t>(out, model.trees.size());
  for (const Tree& tree : model.trees) {
    write_pod<std::uint64_t>(out, tree.nodes.size());
    for (const TreeNode& node : tree.nodes) {
      write_pod<std::int32_t>(out, node.feature);
      write_pod(out, node.threshold);
      write_pod<std::int32_t>(out, node.left);
      write_pod<std::int32_t>(out, node.right);
      write_pod(out, node.value);
    }
  }
}

GbdtModel load_gbdt(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  expect_magic(in, kModelMagic, path);
  const auto version = read_pod<std::uint32_t>(in);
  if (version != 1) throw std::runtime_error("unsupported model version in " + path);
  GbdtModel model;
  model.params.learning_rate = read_pod<double>(in);
  model.params.max_depth = read_pod<std::int32_t>(in);
  model.params.l1_reg = read_pod<double>(in);
  model.params.l2_reg = read_pod<double>(in);
  model.params.row_subsample = read_pod<double>(in);
  model.params.col_subsample = read_pod<double>(in);
  model.params.n_rounds = read_pod<std::int32_t>(in);
  model.params.early_stop_rounds = read_pod<std::int32_t>(in);
  model.params.seed = read_pod<std::uint64_t>(in);
  model.base_score = read_pod<double>(in);
  model.n_features = read_pod<std::int32_t>(in);
  model.best_iteration = read_pod<std::int32_t>(in);
  const auto n_trees = read_pod<std::uint64_t>(in);
  model.trees.resize(n_trees);
  for (auto& tree : model.trees) {
    const auto n_nodes = read_pod<std::uint64_t>(in);
    tree.nodes.resize(n_nodes);
    for (auto& node : tree.nodes) {
      node.feature = read_pod<std::int32_t>(in);
      node.threshold = read_pod<double>(in);
      node.left = read_pod<std::int32_t>(in);
      node.right = read_pod<std::int32_t>(in);
      node.value = read_pod<double>(in);
    }
  }
  return model;
}

}  // namespace molverdict
