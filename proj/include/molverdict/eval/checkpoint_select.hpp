//
// Project MolVerdict - Copyright 2026 MolVerdict Developers.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <span>
#include <string>

#include "molverdict/eval/metrics.hpp"

namespace molverdict {

struct CheckpointMetrics {
  int step = 0;
  Metrics metrics;
};

struct CheckpointChoice {
  int step = 0;
  bool fully_adherent = false;
  std::string warning;  // set when no fully-adherent checkpoint existed
};

// Among checkpoints with format_adherence_rate == 1.0, pick maximum AUC;
// ties broken by maximum F1, then the latest step. When none is fully
// adherent, fall back to maximum adherence (then AUC, then latest step) and
// set a warning.
CheckpointChoice select_checkpoint(std::span<const CheckpointMetrics> checkpoints);

}  // namespace molverdict
