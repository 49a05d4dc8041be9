//
// Project MolVerdict - Copyright 2026 MolVerdict Developers.
// SPDX-License-Identifier: Apache-2.0
//

#include "molverdict/pipe/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <vector>

#include "molverdict/data_dir.hpp"
#include "molverdict/util/hash.hpp"
#include "molverdict/util/text.hpp"

namespace molverdict {

namespace {

struct KeyBinding {
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key " + key + ": cannot parse number '" + value + "'");
  }
}

long long parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key " + key + ": cannot parse integer '" + value + "'");
  }
}

const std::map<std::string, KeyBinding>& key_table() {
  static const std::map<std::string, KeyBinding> table = [] {
    std::map<std::string, KeyBinding> t;
    auto add_string = [&t](const std::string& key, std::string RunConfig::Paths::* field) {
      t[key] = {[field](RunConfig& c, const std::string& v) { c.paths.*field = v; },
                [field](const RunConfig& c) { return c.paths.*field; }};
    };
    auto add_double = [&t](const std::string& key, auto getter_setter) {
      t[key] = {[getter_setter, key](RunConfig& c, const std::string& v) {
                  *getter_setter(c) = parse_double(key, v);
                },
                [getter_setter](const RunConfig& c) {
                  return format_double(*getter_setter(const_cast<RunConfig&>(c)));
                }};
    };
    auto add_int = [&t](const std::string& key, auto getter_setter) {
      t[key] = {[getter_setter, key](RunConfig& c, const std::string& v) {
                  *getter_setter(c) = static_cast<int>(parse_int(key, v));
                },
                [getter_setter](const RunConfig& c) {
                  return std::to_string(*getter_setter(const_cast<RunConfig&>(c)));
                }};
    };

    t["seed"] = {[](RunConfig& c, const std::string& v) {
                   c.seed = static_cast<std::uint64_t>(parse_int("seed", v));
                 },
                 [](const RunConfig& c) { return std::to_string(c.seed); }};
    t["out_dir"] = {[](RunConfig& c, const std::string& v) { c.out_dir = v; },
                    [](const RunConfig& c) { return c.out_dir; }};

    add_string("paths.dataset", &RunConfig::Paths::dataset);
    add_string("paths.external_dataset", &RunConfig::Paths::external_dataset);
    add_string("paths.pains", &RunConfig::Paths::pains);
    add_string("paths.brenk", &RunConfig::Paths::brenk);
    add_string("paths.logp_table", &RunConfig::Paths::logp_table);
    add_string("paths.mr_table", &RunConfig::Paths::mr_table);
    add_string("paths.tpsa_table", &RunConfig::Paths::tpsa_table);
    add_string("paths.prompt_template", &RunConfig::Paths::prompt_template);
    add_string("paths.constants", &RunConfig::Paths::constants);

    add_int("embed.radius", [](RunConfig& c) { return &c.embed_radius; });
    add_int("embed.dim", [](RunConfig& c) { return &c.embed_dim; });
    add_int("neighbors.k", [](RunConfig& c) { return &c.neighbor_k; });

    add_double("gbdt.learning_rate", [](RunConfig& c) { return &c.gbdt.learning_rate; });
    add_int("gbdt.max_depth", [](RunConfig& c) { return &c.gbdt.max_depth; });
    add_double("gbdt.l1_reg", [](RunConfig& c) { return &c.gbdt.l1_reg; });
    add_double("gbdt.l2_reg", [](RunConfig& c) { return &c.gbdt.l2_reg; });
    add_double("gbdt.row_subsample", [](RunConfig& c) { return &c.gbdt.row_subsample; });
    add_double("gbdt.col_subsample", [](RunConfig& c) { return &c.gbdt.col_subsample; });
    add_int("gbdt.n_rounds", [](RunConfig& c) { return &c.gbdt.n_rounds; });
    add_int("gbdt.early_stop_rounds",
            [](RunConfig& c) { return &c.gbdt.early_stop_rounds; });

    add_int("tune.trials", [](RunConfig& c) { return &c.tune_trials; });
    add_double("tune.train_fraction", [](RunConfig& c) { return &c.tune_train_fraction; });
    add_int("tune.n_rounds", [](RunConfig& c) { return &c.tune_space.n_rounds; });
    add_int("tune.early_stop_rounds",
            [](RunConfig& c) { return &c.tune_space.early_stop_rounds; });

    add_int("grpo.group_size", [](RunConfig& c) { return &c.grpo.group_size; });
    add_double("grpo.learning_rate", [](RunConfig& c) { return &c.grpo.learning_rate; });
    add_double("grpo.adam_beta1", [](RunConfig& c) { return &c.grpo.adam_beta1; });
    add_double("grpo.adam_beta2", [](RunConfig& c) { return &c.grpo.adam_beta2; });
    add_double("grpo.weight_decay", [](RunConfig& c) { return &c.grpo.weight_decay; });
    add_int("grpo.warmup_steps", [](RunConfig& c) { return &c.grpo.warmup_steps; });
    add_double("grpo.grad_clip_norm", [](RunConfig& c) { return &c.grpo.grad_clip_norm; });
    add_double("grpo.clip_epsilon", [](RunConfig& c) { return &c.grpo.clip_epsilon; });
    add_double("grpo.kl_beta", [](RunConfig& c) { return &c.grpo.kl_beta; });
    add_int("grpo.total_steps", [](RunConfig& c) { return &c.grpo.total_steps; });
    add_int("grpo.batch_prompts", [](RunConfig& c) { return &c.grpo.batch_prompts; });
    add_int("grpo.checkpoint_interval",
            [](RunConfig& c) { return &c.grpo.checkpoint_interval; });
    add_int("grpo.n_contexts", [](RunConfig& c) { return &c.n_contexts; });
    add_double("grpo.format_prior", [](RunConfig& c) { return &c.format_prior; });

    add_double("eval.temperature", [](RunConfig& c) { return &c.eval_sampling.temperature; });
    add_int("eval.top_k", [](RunConfig& c) { return &c.eval_sampling.top_k; });
    add_double("eval.top_p", [](RunConfig& c) { return &c.eval_sampling.top_p; });
    add_double("ema.alpha", [](RunConfig& c) { return &c.ema_alpha; });
    return t;
  }();
  return table;
}

const std::vector<std::string>& path_keys() {
  static const std::vector<std::string> keys = {
      "out_dir",          "paths.dataset",      "paths.external_dataset",
      "paths.pains",      "paths.brenk",        "paths.logp_table",
      "paths.mr_table",   "paths.tpsa_table",   "paths.prompt_template",
      "paths.constants"};
  return keys;
}

}  // namespace

RunConfig RunConfig::defaults() {
  RunConfig c;
  const std::string data = default_data_dir();
  c.paths.dataset = data + "/fixtures/fixture60.csv";
  c.paths.external_dataset = data + "/fixtures/external9.csv";
  c.paths.pains = data + "/alerts/pains.tsv";
  c.paths.brenk = data + "/alerts/brenk.tsv";
  c.paths.logp_table = data + "/params/logp_contrib.csv";
  c.paths.mr_table = data + "/params/mr_contrib.csv";
  c.paths.tpsa_table = data + "/params/tpsa_contrib.csv";
  c.paths.prompt_template = data + "/templates/system_prompt.txt";
  c.paths.constants = data + "/constants/published_scores.json";
  c.grpo.checkpoint_interval = 500;
  return c;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  RunConfig config = defaults();
  const auto& table = key_table();

  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    const auto it = table.find(key);
    if (it == table.end())
      throw ConfigError(path + ":" + std::to_string(lineno) + ": unknown config key '" +
                        key + "'");
    it->second.set(config, value);
  }

  // resolve paths relative to the config file location
  const auto base = std::filesystem::path(path).parent_path();
  for (const std::string& key : path_keys()) {
    const std::string value = table.at(key).get(config);
    if (value.empty()) continue;
    const std::filesystem::path p(value);
    if (p.is_relative()) table.at(key).set(config, (base / p).lexically_normal().string());
  }

  config.apply_env_overrides();
  return config;
}

void RunConfig::apply_env_overrides(const char* prefix) {
  for (const auto& [key, binding] : key_table()) {
    std::string name = prefix;
    for (char c : key)
      name += c == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    const char* value = std::getenv(name.c_str());
    if (value != nullptr) binding.set(*this, value);
  }
}

std::string RunConfig::canonical_text() const {
  std::string out;
  for (const auto& [key, binding] : key_table())
    out += key + " = " + binding.get(*this) + "\n";
  return out;
}

std::uint64_t RunConfig::hash() const { return fnv1a64(canonical_text()); }

std::string RunConfig::hash_hex() const {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash()));
  return buf;
}

}  // namespace molverdict
