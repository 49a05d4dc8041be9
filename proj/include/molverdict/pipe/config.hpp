//
// Project MolVerdict - Copyright 2026 MolVerdict Developers.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "molverdict/gbdt/gbdt.hpp"
#include "molverdict/gbdt/tune.hpp"
#include "molverdict/rl/train.hpp"

namespace molverdict {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Full run configuration. File format is line-oriented `key = value` with
// '#' comments; dotted keys namespace the modules (see data/configs). Any
// key can be overridden with an environment variable named
// MOLVERDICT_<KEY> where dots become underscores and letters are upper-cased
// (e.g. MOLVERDICT_GBDT_LEARNING_RATE).
struct RunConfig {
  std::uint64_t seed = 42;
  std::string out_dir = "out";

  struct Paths {
    std::string dataset;
    std::string external_dataset;  // optional; empty skips external evaluation
    std::string pains;
    std::string brenk;
    std::string logp_table;
    std::string mr_table;
    std::string tpsa_table;
    std::string prompt_template;
    std::string constants;
  } paths;

  int embed_radius = 2;
  int embed_dim = 768;
  int neighbor_k = 5;

  GbdtParams gbdt;
  int tune_trials = 0;  // 0 skips hyperparameter search
  double tune_train_fraction = 0.1;
  SearchSpace tune_space;

  TrainConfig grpo;
  int n_contexts = 16;
  double format_prior = 4.0;  // initial position-table bias toward the tag template
  SamplingParams eval_sampling{1.0, 9, 0.9};
  double ema_alpha = 0.05;

  // Defaults rooted at the bundled data directory.
  static RunConfig defaults();
  // Load + env overrides; relative paths resolve against the config file's
  // directory.
  static RunConfig load(const std::string& path);

  void apply_env_overrides(const char* prefix = "MOLVERDICT_");

  // Sorted key=value dump of every effective setting; two configs with equal
  // text behave identically.
  std::string canonical_text() const;
  std::uint64_t hash() const;
  std::string hash_hex() const;
};

}  // namespace molverdict
