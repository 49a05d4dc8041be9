//
// Project MolVerdict - Copyright 2026 MolVerdict Developers.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <vector>

#include "molverdict/gbdt/gbdt.hpp"

namespace molverdict {

struct ParamRange {
  double lo = 0.0;
  double hi = 1.0;
  bool log_scale = false;
};

struct SearchSpace {
  ParamRange learning_rate{0.01, 0.3, true};
  int max_depth_min = 2;
  int max_depth_max = 8;
  ParamRange l1_reg{0.0, 1.0, false};
  ParamRange l2_reg{1e-3, 10.0, true};
  ParamRange row_subsample{0.5, 1.0, false};
  ParamRange col_subsample{0.5, 1.0, false};
  int n_rounds = 200;
  int early_stop_rounds = 20;
};

struct TrialRecord {
  int index = 0;
  GbdtParams params;
  double eval_loss = 0.0;  // best round's held-out log-loss
  int rounds_run = 0;
  bool pruned = false;
};

struct TuneResult {
  GbdtParams best_params;
  double best_loss = 0.0;
  std::vector<TrialRecord> trials;
};

// Seeded random search with median pruning: a trial is aborted once its
// per-round eval log-loss exceeds the median of completed trials at the same
// round (after `pruning_startup_trials` trials have completed). Trials are
// fitted on a `train_fraction` class-stratified subset of the training rows
// and scored on the eval set. Deterministic given the seed; trials run
// sequentially so the pruning decisions are reproducible.
TuneResult tune_gbdt(const Matrix& X, const std::vector<int>& y, const Matrix& eval_X,
                     const std::vector<int>& eval_y, const SearchSpace& space, int n_trials,
                     std::uint64_t seed, double train_fraction = 1.0,
                     int pruning_startup_trials = 5);

}  // namespace molverdict
