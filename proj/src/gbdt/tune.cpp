//
// Project MolVerdict - Copyright 2026 MolVerdict Developers.
// SPDX-License-Identifier: Apache-2.0
//

#include "molverdict/gbdt/tune.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "molverdict/util/hash.hpp"
#include "molverdict/util/rng.hpp"

namespace molverdict {

namespace {

double sample_range(const ParamRange& range, Rng& rng) {
  return range.log_scale ? rng.log_uniform(range.lo, range.hi)
                         : rng.uniform(range.lo, range.hi);
}

GbdtParams sample_params(const SearchSpace& space, Rng& rng, std::uint64_t fit_seed) {
  GbdtParams p;
  p.learning_rate = sample_range(space.learning_rate, rng);
  p.max_depth = rng.uniform_int(space.max_depth_min, space.max_depth_max);
  p.l1_reg = sample_range(space.l1_reg, rng);
  p.l2_reg = sample_range(space.l2_reg, rng);
  p.row_subsample = sample_range(space.row_subsample, rng);
  p.col_subsample = sample_range(space.col_subsample, rng);
  p.n_rounds = space.n_rounds;
  p.early_stop_rounds = space.early_stop_rounds;
  p.seed = fit_seed;
  return p;
}

// Class-stratified row subset, seeded.
void subset_rows(const Matrix& X, const std::vector<int>& y, double fraction,
                 std::uint64_t seed, Matrix& out_X, std::vector<int>& out_y) {
  if (fraction >= 1.0) {
    out_X = X;
    out_y = y;
    return;
  }
  Rng rng(seed);
  std::vector<int> keep;
  for (int label : {0, 1}) {
    std::vector<int> members;
    for (int r = 0; r < X.rows; ++r)
      if (y[r] == label) members.push_back(r);
    rng.shuffle(members);
    const int take = std::max(1, static_cast<int>(std::floor(fraction * members.size())));
    keep.insert(keep.end(), members.begin(), members.begin() + take);
  }
  std::sort(keep.begin(), keep.end());
  out_X = Matrix(static_cast<int>(keep.size()), X.cols);
  out_y.resize(keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    std::copy(X.row(keep[i]).begin(), X.row(keep[i]).end(), out_X.row(static_cast<int>(i)).begin());
    out_y[i] = y[keep[i]];
  }
}

// Upper median of the completed-trial losses observed at a round.
double median_at_round(const std::vector<std::vector<double>>& curves, int round) {
  std::vector<double> values;
  for (const auto& curve : curves)
    if (round < static_cast<int>(curve.size())) values.push_back(curve[round]);
  if (values.empty()) return std::numeric_limits<double>::infinity();
  std::sort(values.begin(), values.end());
  return values[values.size() / 2];
}

}  // namespace

TuneResult tune_gbdt(const Matrix& X, const std::vector<int>& y, const Matrix& eval_X,
                     const std::vector<int>& eval_y, const SearchSpace& space, int n_trials,
                     std::uint64_t seed, double train_fraction, int pruning_startup_trials) {
  if (n_trials < 1) throw std::invalid_argument("n_trials must be >= 1");

  Matrix trial_X;
  std::vector<int> trial_y;
  subset_rows(X, y, train_fraction, mix_seed(seed, 0xda7a), trial_X, trial_y);

  TuneResult result;
  std::vector<std::vector<double>> completed_curves;
  double best_loss = std::numeric_limits<double>::infinity();
  int best_trial = -1;

  for (int trial = 0; trial < n_trials; ++trial) {
    Rng rng(mix_seed(seed, 1000 + static_cast<std::uint64_t>(trial)));
    const GbdtParams params = sample_params(space, rng, mix_seed(seed, trial));

    FitOptions options;
    options.eval_X = &eval_X;
    options.eval_y = &eval_y;
    bool pruned = false;
    const bool prunable =
        static_cast<int>(completed_curves.size()) >= pruning_startup_trials;
    options.round_callback = [&](int round, double eval_loss) {
      if (prunable && eval_loss > median_at_round(completed_curves, round)) {
        pruned = true;
        return false;
      }
      return true;
    };

    const GbdtModel model = fit_gbdt(trial_X, trial_y, params, options);

    TrialRecord record;
    record.index = trial;
    record.params = params;
    record.rounds_run = static_cast<int>(model.eval_loss_curve.size());
    record.pruned = pruned;
    record.eval_loss = pruned ? std::numeric_limits<double>::infinity()
                              : *std::min_element(model.eval_loss_curve.begin(),
                                                  model.eval_loss_curve.end());
    result.trials.push_back(record);

    if (!pruned) {
      completed_curves.push_back(model.eval_loss_curve);
      if (record.eval_loss < best_loss) {
        best_loss = record.eval_loss;
        best_trial = trial;
      }
    }
  }

  if (best_trial < 0)
    throw GbdtError(GbdtErrorKind::kNoCompletedTrials, "all tuning trials were pruned");
  result.best_params = result.trials[best_trial].params;
  result.best_loss = best_loss;
  return result;
}

}  // namespace molverdict
