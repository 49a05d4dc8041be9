//
// Project MolVerdict - Copyright 2026 MolVerdict Developers.
// SPDX-License-Identifier: Apache-2.0
//

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "molverdict/pipe/pipeline.hpp"

namespace {

using molverdict::RunConfig;
using molverdict::Stage;

struct CommonOptions {
  std::string config_path;
  std::string seed_override;
  bool resume = false;
};

RunConfig load_config(const CommonOptions& options) {
  RunConfig config = options.config_path.empty() ? RunConfig::defaults()
                                                 : RunConfig::load(options.config_path);
  if (!options.seed_override.empty()) config.seed = std::stoull(options.seed_override);
  return config;
}

void add_common(CLI::App* cmd, CommonOptions& options) {
  cmd->add_option("--config", options.config_path, "run configuration file");
  cmd->add_option("--seed", options.seed_override, "override the configured seed");
  cmd->add_flag("--resume", options.resume, "skip stages whose artifacts already exist");
}

int run_stages(const CommonOptions& options, Stage up_to) {
  const RunConfig config = load_config(options);
  const auto result = molverdict::run_pipeline(config, up_to, options.resume);
  for (Stage s : result.executed)
    std::cout << "stage " << molverdict::to_string(s) << ": done\n";
  std::cout << "pipeline complete through " << molverdict::to_string(result.last_completed)
            << " (config " << config.hash_hex() << ", seed " << config.seed << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"molecular approval-likelihood workbench"};
  app.require_subcommand(1);

  CommonOptions options;
  std::string stage_name;
  std::string smiles;
  std::string predict_seed = "0";

  // per-stage subcommands mirror the pipeline stages
  struct StageCommand {
    const char* name;
    const char* help;
    Stage stage;
  };
  const StageCommand stage_commands[] = {
      {"prepare", "ingest, deduplicate, undersample and split the dataset", Stage::kPrepare},
      {"embed", "compute molecular embeddings for every split", Stage::kEmbed},
      {"train-gbdt", "tune and fit the boosted-tree classifier", Stage::kTrainGbdt},
      {"neighbors", "leaf-similarity search and prompt construction", Stage::kNeighbors},
      {"train-grpo", "policy optimization with the five-part reward", Stage::kTrainGrpo},
      {"evaluate", "score the selected checkpoint and the baselines", Stage::kEvaluate},
      {"report", "reward-trace smoothing and the run manifest", Stage::kReport},
  };
  for (const auto& sc : stage_commands) {
    CLI::App* cmd = app.add_subcommand(sc.name, sc.help);
    add_common(cmd, options);
    cmd->callback([&options, &sc] {
      CommonOptions piecewise = options;
      piecewise.resume = true;  // piecewise commands reuse earlier artifacts
      std::exit(run_stages(piecewise, sc.stage));
    });
  }

  CLI::App* run = app.add_subcommand("run", "execute the full pipeline");
  add_common(run, options);
  run->add_option("--stage", stage_name, "run only up to this stage");
  run->callback([&] {
    const Stage up_to =
        stage_name.empty() ? Stage::kReport : molverdict::stage_from_name(stage_name);
    std::exit(run_stages(options, up_to));
  });

  CLI::App* predict = app.add_subcommand("predict", "score one molecule from a finished run");
  add_common(predict, options);
  predict->add_option("--smiles", smiles, "query structure")->required();
  predict->add_option("--sample-seed", predict_seed, "sampling seed for the completion");
  predict->callback([&] {
    const RunConfig config = load_config(options);
    std::cout << molverdict::predict_single(config, smiles, std::stoull(predict_seed))
              << "\n";
    std::exit(0);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
