//
// Project MolVerdict - Copyright 2026 MolVerdict Developers.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "molverdict/pipe/config.hpp"

namespace molverdict {

enum class Stage {
  kPrepare = 0,
  kEmbed,
  kTrainGbdt,
  kNeighbors,
  kTrainGrpo,
  kEvaluate,
  kReport,
};

std::string to_string(Stage stage);
Stage stage_from_name(const std::string& name);

// Error labeled with the stage it occurred in; earlier stages' artifacts
// stay on disk and are reusable with resume.
class StageError : public std::runtime_error {
 public:
  StageError(Stage stage, const std::string& msg)
      : std::runtime_error("[stage " + molverdict::to_string(stage) + "] " + msg),
        stage_(stage) {}
  Stage stage() const { return stage_; }

 private:
  Stage stage_;
};

struct PipelineResult {
  Stage last_completed = Stage::kPrepare;
  std::vector<Stage> executed;  // stages actually run (not skipped by resume)
};

// Executes the stage chain up to `up_to`. Each stage reads its inputs from
// the previous stage's artifact files, so with `resume` a stage whose
// outputs already exist is skipped. The output directory is locked for the
// duration of the run.
PipelineResult run_pipeline(const RunConfig& config, Stage up_to = Stage::kReport,
                            bool resume = false);

// Exponential moving average: y_0 = x_0, y_t = alpha*x_t + (1-alpha)*y_{t-1}.
std::vector<double> ema(std::span<const double> series, double alpha);

// Single-molecule inference against a completed run's artifacts. Returns the
// prediction JSON text (also used by the CLI).
std::string predict_single(const RunConfig& config, const std::string& smiles,
                           std::uint64_t sample_seed);

}  // namespace molverdict
