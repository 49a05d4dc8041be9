//
// Project MolVerdict - Copyright 2026 MolVerdict Developers.
// SPDX-License-Identifier: Apache-2.0
//

#include "molverdict/pipe/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <unordered_map>

#include "json.hpp"
#include "molverdict/chem/canonical.hpp"
#include "molverdict/chem/descriptors.hpp"
#include "molverdict/chem/smiles.hpp"
#include "molverdict/data_dir.hpp"
#include "molverdict/embed/embedding_io.hpp"
#include "molverdict/embed/fingerprint.hpp"
#include "molverdict/eval/baselines.hpp"
#include "molverdict/eval/checkpoint_select.hpp"
#include "molverdict/eval/metrics.hpp"
#include "molverdict/eval/splits.hpp"
#include "molverdict/gbdt/neighbors.hpp"
#include "molverdict/gbdt/tune.hpp"
#include "molverdict/pipe/dataset.hpp"
#include "molverdict/reason/prompt.hpp"
#include "molverdict/reason/rewards.hpp"
#include "molverdict/rl/train.hpp"
#include "molverdict/util/csv.hpp"
#include "molverdict/util/hash.hpp"

namespace fs = std::filesystem;

namespace molverdict {

std::string to_string(Stage stage) {
  switch (stage) {
    case Stage::kPrepare: return "prepare";
    case Stage::kEmbed: return "embed";
    case Stage::kTrainGbdt: return "train-gbdt";
    case Stage::kNeighbors: return "neighbors";
    case Stage::kTrainGrpo: return "train-grpo";
    case Stage::kEvaluate: return "evaluate";
    case Stage::kReport: return "report";
  }
  return "unknown";
}

Stage stage_from_name(const std::string& name) {
  for (Stage s : {Stage::kPrepare, Stage::kEmbed, Stage::kTrainGbdt, Stage::kNeighbors,
                  Stage::kTrainGrpo, Stage::kEvaluate, Stage::kReport})
    if (to_string(s) == name) return s;
  throw std::invalid_argument("unknown stage name: " + name);
}

std::vector<double> ema(std::span<const double> series, double alpha) {
  std::vector<double> out;
  out.reserve(series.size());
  double y = 0.0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    y = i == 0 ? series[0] : alpha * series[i] + (1.0 - alpha) * y;
    out.push_back(y);
  }
  return out;
}

namespace {

struct ArtifactPaths {
  fs::path out, prepared, embeddings, gbdt_dir, neighbors_dir, grpo_dir, eval_dir;

  explicit ArtifactPaths(const std::string& out_dir) : out(out_dir) {
    prepared = out / "prepared";
    embeddings = out / "embeddings";
    gbdt_dir = out / "gbdt";
    neighbors_dir = out / "neighbors";
    grpo_dir = out / "grpo";
    eval_dir = out / "eval";
  }

  void create_all() const {
    for (const fs::path& p :
         {out, prepared, embeddings, gbdt_dir, neighbors_dir, grpo_dir, eval_dir})
      fs::create_directories(p);
  }
};

// Single-process ownership of the output directory.
class LockFile {
 public:
  explicit LockFile(const fs::path& dir) : path_(dir / ".lock") {
    if (fs::exists(path_))
      throw std::runtime_error("output directory is locked (" + path_.string() +
                               "); remove the stale lock if no run is active");
    std::ofstream out(path_);
    out << "locked\n";
  }
  ~LockFile() {
    std::error_code ec;
    fs::remove(path_, ec);
  }

 private:
  fs::path path_;
};

const std::vector<std::string> kSplits = {"train", "val", "test"};

std::string stamp(const RunConfig& cfg) {
  return "config_hash=" + cfg.hash_hex() + " seed=" + std::to_string(cfg.seed);
}

bool has_external(const RunConfig& cfg) { return !cfg.paths.external_dataset.empty(); }

std::vector<std::string> split_names(const RunConfig& cfg) {
  auto names = kSplits;
  if (has_external(cfg)) names.push_back("external");
  return names;
}

ContributionTables load_tables_checked(const RunConfig& cfg, Stage stage) {
  try {
    return ContributionTables::load(cfg.paths.logp_table, cfg.paths.mr_table,
                                    cfg.paths.tpsa_table);
  } catch (const std::exception& e) {
    throw StageError(stage, std::string("molparse: ") + e.what());
  }
}

std::pair<std::vector<AlertPattern>, std::vector<AlertPattern>> load_alerts_checked(
    const RunConfig& cfg, Stage stage) {
  try {
    return {load_alert_file(cfg.paths.pains), load_alert_file(cfg.paths.brenk)};
  } catch (const std::exception& e) {
    throw StageError(stage, std::string("molparse: ") + e.what());
  }
}

void write_descriptor_table(const fs::path& path, const RunConfig& cfg,
                            const std::vector<std::pair<std::string, DescriptorVector>>& rows) {
  std::ofstream out(path);
  out << "# " << stamp(cfg) << "\n";
  out << "id,molecular_weight,logp,tpsa,hbd,hba,rotatable_bonds,molar_refractivity,"
         "chiral_centers,heavy_atoms,ring_count,formal_charge,pains_alert,brenk_alert\n";
  char buf[64];
  for (const auto& [id, d] : rows) {
    auto num = [&](double v) {
      std::snprintf(buf, sizeof(buf), "%.6f", v);
      return std::string(buf);
    };
    out << csv_escape(id) << "," << num(d.molecular_weight) << "," << num(d.logp) << ","
        << num(d.tpsa) << "," << d.hbd << "," << d.hba << "," << d.rotatable_bonds << ","
        << num(d.molar_refractivity) << "," << d.chiral_centers << "," << d.heavy_atoms
        << "," << d.ring_count << "," << d.formal_charge << "," << (d.pains_alert ? 1 : 0)
        << "," << (d.brenk_alert ? 1 : 0) << "\n";
  }
}

std::unordered_map<std::string, DescriptorVector> read_descriptor_table(const fs::path& path) {
  const CsvTable table = read_csv(path.string());
  std::unordered_map<std::string, DescriptorVector> out;
  auto col = [&](const char* name) {
    const int c = table.column(name);
    if (c < 0) throw std::runtime_error(std::string("descriptor table missing ") + name);
    return c;
  };
  const int id_c = col("id");
  const int mw_c = col("molecular_weight"), logp_c = col("logp"), tpsa_c = col("tpsa");
  const int hbd_c = col("hbd"), hba_c = col("hba"), rot_c = col("rotatable_bonds");
  const int mr_c = col("molar_refractivity"), chiral_c = col("chiral_centers");
  const int heavy_c = col("heavy_atoms"), ring_c = col("ring_count");
  const int charge_c = col("formal_charge"), pains_c = col("pains_alert");
  const int brenk_c = col("brenk_alert");
  for (const auto& row : table.rows) {
    DescriptorVector d;
    d.molecular_weight = std::stod(row[mw_c]);
    d.logp = std::stod(row[logp_c]);
    d.tpsa = std::stod(row[tpsa_c]);
    d.hbd = std::stoi(row[hbd_c]);
    d.hba = std::stoi(row[hba_c]);
    d.rotatable_bonds = std::stoi(row[rot_c]);
    d.molar_refractivity = std::stod(row[mr_c]);
    d.chiral_centers = std::stoi(row[chiral_c]);
    d.heavy_atoms = std::stoi(row[heavy_c]);
    d.ring_count = std::stoi(row[ring_c]);
    d.formal_charge = std::stoi(row[charge_c]);
    d.pains_alert = row[pains_c] == "1";
    d.brenk_alert = row[brenk_c] == "1";
    out.emplace(row[id_c], d);
  }
  return out;
}

// Discretized prompt features: per-descriptor votes on whether the query
// sits closer to the approved or the unapproved neighbor mean.
int context_bucket(const DescriptorVector& q, const NeighborSet& neighbors,
                   const std::unordered_map<std::string, DescriptorVector>& descriptors,
                   int n_contexts) {
  auto mean_of = [&](const std::vector<Neighbor>& group, auto field) {
    double sum = 0.0;
    for (const Neighbor& n : group) sum += field(descriptors.at(n.id));
    return group.empty() ? 0.0 : sum / group.size();
  };
  auto closer_bit = [&](auto field) {
    const double qa = field(q);
    const double da = std::abs(qa - mean_of(neighbors.approved, field));
    const double du = std::abs(qa - mean_of(neighbors.unapproved, field));
    return da <= du ? 1 : 0;
  };
  int bucket = 0;
  bucket |= closer_bit([](const DescriptorVector& d) { return d.molecular_weight; });
  bucket |= closer_bit([](const DescriptorVector& d) { return d.logp; }) << 1;
  bucket |= closer_bit([](const DescriptorVector& d) { return d.tpsa; }) << 2;
  bucket |= closer_bit([](const DescriptorVector& d) {
              return static_cast<double>(d.hbd + d.hba);
            })
            << 3;
  return bucket % std::max(1, n_contexts);
}

Matrix embeddings_to_matrix(const std::vector<Embedding>& embeddings) {
  Matrix m(static_cast<int>(embeddings.size()),
           embeddings.empty() ? 0 : embeddings[0].dim());
  for (int r = 0; r < m.rows; ++r)
    for (int c = 0; c < m.cols; ++c)
      m.at(r, c) = static_cast<float>(embeddings[r].values[c]);
  return m;
}

struct PromptEntry {
  std::string id;
  Label truth = Label::kUnapproved;
  int context = 0;
};

void write_prompts_jsonl(const fs::path& path, const RunConfig& cfg,
                         const std::vector<PromptRecord>& prompts,
                         const std::vector<int>& contexts) {
  std::ofstream out(path);
  out << nlohmann::json{{"_provenance",
                         {{"config_hash", cfg.hash_hex()}, {"seed", cfg.seed}}}}
             .dump()
      << "\n";
  for (std::size_t i = 0; i < prompts.size(); ++i) {
    nlohmann::json obj = {
        {"query_id", prompts[i].query_id},
        {"context", contexts[i]},
        {"system_text", prompts[i].system_text},
        {"user_text", prompts[i].user_text},
    };
    if (prompts[i].truth) obj["truth"] = to_string(*prompts[i].truth);
    out << obj.dump() << "\n";
  }
}

std::vector<PromptEntry> read_prompt_entries(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open prompts file: " + path.string());
  std::vector<PromptEntry> entries;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto obj = nlohmann::json::parse(line);
    if (obj.contains("_provenance")) continue;
    PromptEntry e;
    e.id = obj.at("query_id").get<std::string>();
    e.context = obj.at("context").get<int>();
    const auto truth = parse_label(obj.value("truth", ""));
    if (truth) e.truth = *truth;
    entries.push_back(std::move(e));
  }
  return entries;
}

void write_neighbors_jsonl(const fs::path& path, const RunConfig& cfg,
                           const std::vector<NeighborQuery>& queries,
                           const std::vector<NeighborSet>& sets) {
  std::ofstream out(path);
  out << nlohmann::json{{"_provenance",
                         {{"config_hash", cfg.hash_hex()}, {"seed", cfg.seed}}}}
             .dump()
      << "\n";
  auto group = [](const std::vector<Neighbor>& ns) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Neighbor& n : ns) arr.push_back({{"id", n.id}, {"distance", n.distance}});
    return arr;
  };
  for (std::size_t i = 0; i < queries.size(); ++i)
    out << nlohmann::json{{"query_id", queries[i].id},
                          {"approved", group(sets[i].approved)},
                          {"unapproved", group(sets[i].unapproved)}}
               .dump()
        << "\n";
}

// ---- policy evaluation on prompt entries -------------------------------

struct PolicyEvalResult {
  Metrics metrics;
  std::vector<nlohmann::json> per_query;
};

PolicyEvalResult evaluate_policy(const ToyPolicy& policy,
                                 const std::vector<PromptEntry>& entries,
                                 const SamplingParams& sampling, std::uint64_t seed) {
  PolicyEvalResult out;
  std::vector<Label> predictions, truths;
  std::vector<double> scores;
  int adherent = 0;
  for (const PromptEntry& e : entries) {
    Rng rng(mix_seed(seed, fnv1a64(e.id)));
    const SampledSequence seq = sample_sequence(policy, e.context, sampling, rng);
    const std::string text = policy.vocab().render(seq.tokens);
    const StrictParse parsed = parse_strict(text);
    if (parsed.ok()) ++adherent;
    // invalid completions count as an unapproved call at even odds
    const Label predicted = parsed.response.label.value_or(Label::kUnapproved);
    const double confidence = parsed.response.score.value_or(0.5);
    const double p_approved =
        predicted == Label::kApproved ? confidence : 1.0 - confidence;
    predictions.push_back(predicted);
    truths.push_back(e.truth);
    scores.push_back(p_approved);
    out.per_query.push_back({{"query_id", e.id},
                             {"completion", text},
                             {"strict_valid", parsed.ok()},
                             {"predicted", to_string(predicted)},
                             {"truth", to_string(e.truth)},
                             {"p_approved", p_approved}});
  }
  out.metrics = confusion_metrics(predictions, truths);
  out.metrics.format_adherence_rate =
      entries.empty() ? 1.0 : static_cast<double>(adherent) / entries.size();
  bool both = out.metrics.n_pos > 0 && out.metrics.n_neg > 0;
  if (both) out.metrics.auc = auc(scores, truths);
  return out;
}

nlohmann::json metrics_to_json(const Metrics& m, const RunConfig& cfg) {
  nlohmann::json obj = {
      {"accuracy", m.accuracy},
      {"precision", m.precision},
      {"recall", m.recall},
      {"specificity", m.specificity},
      {"f1", m.f1},
      {"n_pos", m.n_pos},
      {"n_neg", m.n_neg},
      {"format_adherence_rate", m.format_adherence_rate},
      {"config_hash", cfg.hash_hex()},
      {"seed", cfg.seed},
  };
  if (m.auc) obj["auc"] = *m.auc;
  return obj;
}

void write_metrics_files(const fs::path& base, const Metrics& m, const RunConfig& cfg) {
  {
    std::ofstream out(base.string() + ".json");
    out << metrics_to_json(m, cfg).dump(2) << "\n";
  }
  std::ofstream out(base.string() + ".csv");
  out << "# " << stamp(cfg) << "\n";
  out << "metric,value\n";
  if (m.auc) out << "auc," << *m.auc << "\n";
  out << "accuracy," << m.accuracy << "\nprecision," << m.precision << "\nrecall,"
      << m.recall << "\nspecificity," << m.specificity << "\nf1," << m.f1
      << "\nformat_adherence_rate," << m.format_adherence_rate << "\nn_pos," << m.n_pos
      << "\nn_neg," << m.n_neg << "\n";
}

// ---- stages -------------------------------------------------------------

void stage_prepare(const RunConfig& cfg, const ArtifactPaths& paths) {
  const Stage stage = Stage::kPrepare;
  const ContributionTables tables = load_tables_checked(cfg, stage);
  const auto alerts = load_alerts_checked(cfg, stage);
  const std::vector<AlertPattern>& pains = alerts.first;
  const std::vector<AlertPattern>& brenk = alerts.second;

  IngestResult ingest;
  try {
    ingest = ingest_dataset(cfg.paths.dataset, (paths.prepared / "quarantine.csv").string(),
                            (paths.prepared / "dedup_log.txt").string());
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }

  std::vector<Label> labels;
  for (const auto& r : ingest.records) labels.push_back(r.label);
  const auto kept = undersample_indices(labels, cfg.seed);
  std::vector<DatasetRecord> balanced;
  std::vector<Label> balanced_labels;
  for (int i : kept) {
    balanced.push_back(ingest.records[i]);
    balanced_labels.push_back(labels[i]);
  }

  SplitIndices split;
  try {
    split = stratified_split(balanced_labels, SplitRatios{}, cfg.seed);
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
  auto take = [&](const std::vector<int>& idx) {
    std::vector<DatasetRecord> out;
    for (int i : idx) out.push_back(balanced[i]);
    return out;
  };
  const auto train = take(split.train);
  const auto val = take(split.val);
  const auto test = take(split.test);
  write_records_csv((paths.prepared / "train.csv").string(), train, stamp(cfg));
  write_records_csv((paths.prepared / "val.csv").string(), val, stamp(cfg));
  write_records_csv((paths.prepared / "test.csv").string(), test, stamp(cfg));

  std::vector<DatasetRecord> external;
  if (has_external(cfg)) {
    IngestResult ext;
    try {
      ext = ingest_dataset(cfg.paths.external_dataset,
                           (paths.prepared / "quarantine_external.csv").string());
    } catch (const std::exception& e) {
      throw StageError(stage, e.what());
    }
    std::vector<std::string> internal_canonical, external_canonical;
    for (const auto& r : ingest.records) internal_canonical.push_back(r.canonical);
    for (const auto& r : ext.records) external_canonical.push_back(r.canonical);
    for (int i : remove_overlap(external_canonical, internal_canonical))
      external.push_back(ext.records[i]);
    write_records_csv((paths.prepared / "external.csv").string(), external, stamp(cfg));
  }

  std::vector<std::pair<std::string, DescriptorVector>> descriptor_rows;
  auto add_descriptors = [&](const std::vector<DatasetRecord>& records) {
    for (const auto& r : records)
      descriptor_rows.emplace_back(r.id, compute_descriptors(r.mol, tables, pains, brenk));
  };
  add_descriptors(train);
  add_descriptors(val);
  add_descriptors(test);
  add_descriptors(external);
  write_descriptor_table(paths.prepared / "descriptors.csv", cfg, descriptor_rows);
}

std::vector<DatasetRecord> load_split(const ArtifactPaths& paths, const std::string& name,
                                      bool reparse = true) {
  return read_records_csv((paths.prepared / (name + ".csv")).string(), reparse);
}

void stage_embed(const RunConfig& cfg, const ArtifactPaths& paths) {
  const Stage stage = Stage::kEmbed;
  for (const std::string& name : split_names(cfg)) {
    const auto records = load_split(paths, name);
    std::vector<Molecule> molecules;
    for (const auto& r : records) molecules.push_back(r.mol);
    auto items = embed_batch(molecules, cfg.embed_radius, cfg.embed_dim);
    std::vector<Embedding> embeddings;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (!items[i].ok)
        throw StageError(stage, "embedding failed for " + records[i].id + ": " +
                                    items[i].error);
      items[i].embedding.molecule_id = records[i].id;
      embeddings.push_back(std::move(items[i].embedding));
    }
    write_embeddings((paths.embeddings / (name + ".bin")).string(), embeddings,
                     cfg.embed_dim);
  }
}

std::vector<int> labels_as_int(const std::vector<DatasetRecord>& records) {
  std::vector<int> y;
  for (const auto& r : records) y.push_back(r.label == Label::kApproved ? 1 : 0);
  return y;
}

void stage_train_gbdt(const RunConfig& cfg, const ArtifactPaths& paths) {
  const Stage stage = Stage::kTrainGbdt;
  try {
    const auto train_records = load_split(paths, "train", false);
    const auto val_records = load_split(paths, "val", false);
    const Matrix X = embeddings_to_matrix(
        read_embeddings((paths.embeddings / "train.bin").string()));
    const Matrix val_X =
        embeddings_to_matrix(read_embeddings((paths.embeddings / "val.bin").string()));
    const auto y = labels_as_int(train_records);
    const auto val_y = labels_as_int(val_records);

    GbdtParams params = cfg.gbdt;
    params.seed = cfg.seed;
    if (cfg.tune_trials > 0) {
      const TuneResult tuned = tune_gbdt(X, y, val_X, val_y, cfg.tune_space,
                                         cfg.tune_trials, cfg.seed, cfg.tune_train_fraction);
      params = tuned.best_params;
      params.n_rounds = cfg.gbdt.n_rounds;
      params.early_stop_rounds = cfg.gbdt.early_stop_rounds;
      params.seed = cfg.seed;
      std::ofstream trials(paths.gbdt_dir / "tune_trials.csv");
      trials << "# " << stamp(cfg) << "\n";
      trials << "trial,learning_rate,max_depth,l1_reg,l2_reg,row_subsample,col_subsample,"
                "eval_loss,rounds_run,pruned\n";
      for (const auto& t : tuned.trials)
        trials << t.index << "," << t.params.learning_rate << "," << t.params.max_depth
               << "," << t.params.l1_reg << "," << t.params.l2_reg << ","
               << t.params.row_subsample << "," << t.params.col_subsample << ","
               << t.eval_loss << "," << t.rounds_run << "," << (t.pruned ? 1 : 0) << "\n";
    }

    FitOptions options;
    options.eval_X = &val_X;
    options.eval_y = &val_y;
    const GbdtModel model = fit_gbdt(X, y, params, options);
    save_gbdt((paths.gbdt_dir / "model.bin").string(), model);

    std::ofstream curves(paths.gbdt_dir / "fit_curves.csv");
    curves << "# " << stamp(cfg) << "\n";
    curves << "round,train_log_loss,eval_log_loss\n";
    for (std::size_t i = 0; i < model.train_loss_curve.size(); ++i) {
      curves << i << "," << model.train_loss_curve[i] << ",";
      if (i < model.eval_loss_curve.size()) curves << model.eval_loss_curve[i];
      curves << "\n";
    }
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

void stage_neighbors(const RunConfig& cfg, const ArtifactPaths& paths) {
  const Stage stage = Stage::kNeighbors;
  try {
    const GbdtModel model = load_gbdt((paths.gbdt_dir / "model.bin").string());
    const auto descriptors = read_descriptor_table(paths.prepared / "descriptors.csv");
    PromptTemplate system_template;
    try {
      system_template = PromptTemplate::load(cfg.paths.prompt_template);
    } catch (const std::exception& e) {
      throw StageError(stage, std::string("reasonio: ") + e.what());
    }

    // training pool leaf vectors
    const auto train_records = load_split(paths, "train", false);
    const auto train_embeddings =
        read_embeddings((paths.embeddings / "train.bin").string());
    std::vector<PoolEntry> pool(train_records.size());
    for (std::size_t i = 0; i < train_records.size(); ++i) {
      std::vector<float> x(train_embeddings[i].values.begin(),
                           train_embeddings[i].values.end());
      pool[i] = {train_records[i].id, train_records[i].label, leaf_embedding(model, x)};
    }

    const DescriptorLookup lookup = [&](const std::string& id) {
      const auto it = descriptors.find(id);
      return it == descriptors.end() ? std::optional<DescriptorVector>{}
                                     : std::optional<DescriptorVector>{it->second};
    };

    for (const std::string& name : split_names(cfg)) {
      const auto records = load_split(paths, name, false);
      const auto embeddings =
          read_embeddings((paths.embeddings / (name + ".bin")).string());
      std::vector<NeighborQuery> queries(records.size());
      for (std::size_t i = 0; i < records.size(); ++i) {
        std::vector<float> x(embeddings[i].values.begin(), embeddings[i].values.end());
        queries[i] = {records[i].id, leaf_embedding(model, x)};
      }
      // train uses self-comparison against its own pool; other splits are
      // query-based against the training pool
      const auto sets = neighbors_for_all(queries, pool, cfg.neighbor_k);
      write_neighbors_jsonl(paths.neighbors_dir / (name + ".jsonl"), cfg, queries, sets);

      std::vector<PromptRecord> prompts;
      std::vector<int> contexts;
      for (std::size_t i = 0; i < records.size(); ++i) {
        const DescriptorVector& q = descriptors.at(records[i].id);
        prompts.push_back(build_prompt(q, records[i].id, records[i].label, sets[i], lookup,
                                       system_template));
        contexts.push_back(context_bucket(q, sets[i], descriptors, cfg.n_contexts));
      }
      write_prompts_jsonl(paths.neighbors_dir / ("prompts_" + name + ".jsonl"), cfg,
                          prompts, contexts);
    }
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

fs::path checkpoint_path(const ArtifactPaths& paths, int step) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "ckpt_%06d.bin", step);
  return paths.grpo_dir / buf;
}

void stage_train_grpo(const RunConfig& cfg, const ArtifactPaths& paths) {
  const Stage stage = Stage::kTrainGrpo;
  try {
    const auto entries = read_prompt_entries(paths.neighbors_dir / "prompts_train.jsonl");
    std::vector<TrainPrompt> prompts;
    for (const auto& e : entries) prompts.push_back({e.id, e.context, e.truth});

    const fs::path log_path = paths.grpo_dir / "qualitative.jsonl";
    fs::remove(log_path);
    QualitativeLog qualitative(log_path.string());

    const RewardFn reward = [&](const std::string& text, Label truth,
                                const std::string& prompt_id, int step) {
      RewardContext ctx{&qualitative, prompt_id, step};
      return composite_reward(text, truth, ctx);
    };

    TrainConfig train_cfg = cfg.grpo;
    train_cfg.seed = cfg.seed;
    std::vector<int> checkpoint_steps;
    const CheckpointSink sink = [&](int step, const ToyPolicy& policy,
                                    const AdamState& adam) {
      save_checkpoint(checkpoint_path(paths, step).string(), policy, adam, step);
      checkpoint_steps.push_back(step);
    };

    const ToyPolicy initial =
        ToyPolicy::with_format_prior(cfg.n_contexts, 16, cfg.format_prior);
    const TrainResult result = train_policy(initial, prompts, reward, train_cfg, sink);

    {
      std::ofstream trace(paths.grpo_dir / "reward_trace.csv");
      trace << "# " << stamp(cfg) << "\n";
      trace << "step,lr,loss,kl,grad_norm,mean_total,mean_correctness,mean_xml_format,"
               "mean_soft_format,mean_interpretability,mean_confidence_alignment\n";
      trace.precision(17);
      for (const TraceRow& r : result.trace)
        trace << r.step << "," << r.lr << "," << r.loss << "," << r.kl << "," << r.grad_norm
              << "," << r.mean_total << "," << r.mean_correctness << ","
              << r.mean_xml_format << "," << r.mean_soft_format << ","
              << r.mean_interpretability << "," << r.mean_confidence_alignment << "\n";
    }

    if (result.status == TrainStatus::kDiverged)
      throw StageError(stage, "loss diverged at step " + std::to_string(result.last_step) +
                                  "; trace and last good checkpoint retained");

    // score every checkpoint on the validation prompts
    const auto val_entries =
        read_prompt_entries(paths.neighbors_dir / "prompts_val.jsonl");
    std::vector<CheckpointMetrics> checkpoint_metrics;
    std::ofstream per_ckpt(paths.grpo_dir / "checkpoint_metrics.csv");
    per_ckpt << "# " << stamp(cfg) << "\n";
    per_ckpt << "step,auc,accuracy,precision,recall,specificity,f1,"
                "format_adherence_rate\n";
    for (int step : checkpoint_steps) {
      const Checkpoint ckpt = load_checkpoint(checkpoint_path(paths, step).string());
      const PolicyEvalResult eval = evaluate_policy(ckpt.policy, val_entries,
                                                    cfg.eval_sampling,
                                                    mix_seed(cfg.seed, 0xe7a1));
      checkpoint_metrics.push_back({step, eval.metrics});
      per_ckpt << step << "," << eval.metrics.auc.value_or(-1.0) << ","
               << eval.metrics.accuracy << "," << eval.metrics.precision << ","
               << eval.metrics.recall << "," << eval.metrics.specificity << ","
               << eval.metrics.f1 << "," << eval.metrics.format_adherence_rate << "\n";
    }

    const CheckpointChoice choice = select_checkpoint(checkpoint_metrics);
    std::ofstream selected(paths.grpo_dir / "selected.json");
    selected << nlohmann::json{{"step", choice.step},
                               {"path", checkpoint_path(paths, choice.step).string()},
                               {"fully_adherent", choice.fully_adherent},
                               {"warning", choice.warning},
                               {"config_hash", cfg.hash_hex()},
                               {"seed", cfg.seed}}
                    .dump(2)
             << "\n";
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

nlohmann::json load_constants(const RunConfig& cfg) {
  if (cfg.paths.constants.empty()) return {};
  std::ifstream in(cfg.paths.constants);
  if (!in) return {};
  return nlohmann::json::parse(in, nullptr, false);
}

void write_comparison_csv(const fs::path& path, const RunConfig& cfg,
                          const std::vector<std::pair<std::string, Metrics>>& computed,
                          const nlohmann::json& published_rows) {
  std::ofstream out(path);
  out << "# " << stamp(cfg) << "\n";
  out << "model,auc,accuracy,precision,recall,specificity,f1,source\n";
  for (const auto& [name, m] : computed) {
    out << name << ",";
    if (m.auc) out << *m.auc;
    out << "," << m.accuracy << "," << m.precision << "," << m.recall << ","
        << m.specificity << "," << m.f1 << ",computed\n";
  }
  if (published_rows.is_object()) {
    for (const auto& item : published_rows.items()) {
      const std::string& name = item.key();
      const nlohmann::json& row = item.value();
      auto field = [&row](const char* key) {
        return row.contains(key) ? std::to_string(row[key].get<double>()) : std::string();
      };
      out << name << "," << field("auc") << "," << field("accuracy") << ","
          << field("precision") << "," << field("recall") << "," << field("specificity")
          << "," << field("f1") << ",published\n";
    }
  }
}

void stage_evaluate(const RunConfig& cfg, const ArtifactPaths& paths) {
  const Stage stage = Stage::kEvaluate;
  try {
    const auto selected = [&] {
      std::ifstream in(paths.grpo_dir / "selected.json");
      if (!in) throw std::runtime_error("missing selected checkpoint; run train-grpo first");
      return nlohmann::json::parse(in);
    }();
    const Checkpoint ckpt = load_checkpoint(selected.at("path").get<std::string>());

    // baselines fitted on the training embeddings
    const auto train_records = load_split(paths, "train", false);
    const Matrix train_X = embeddings_to_matrix(
        read_embeddings((paths.embeddings / "train.bin").string()));
    const auto train_y = labels_as_int(train_records);
    std::vector<std::pair<std::string, BaselineModel>> baselines;
    for (BaselineKind kind : {BaselineKind::kLogistic, BaselineKind::kLinearSvm,
                              BaselineKind::kKnn}) {
      BaselineParams params;
      baselines.emplace_back(to_string(kind), fit_baseline(kind, train_X, train_y, params));
    }
    // the boosted-tree baseline reuses the tuned pipeline model
    BaselineModel gbdt_baseline;
    gbdt_baseline.kind = BaselineKind::kGbdt;
    gbdt_baseline.gbdt = load_gbdt((paths.gbdt_dir / "model.bin").string());
    baselines.emplace_back("gbdt", std::move(gbdt_baseline));

    const nlohmann::json constants = load_constants(cfg);

    std::vector<std::string> eval_splits = {"val", "test"};
    if (has_external(cfg)) eval_splits.push_back("external");
    for (const std::string& name : eval_splits) {
      const auto entries =
          read_prompt_entries(paths.neighbors_dir / ("prompts_" + name + ".jsonl"));
      const PolicyEvalResult policy_eval = evaluate_policy(
          ckpt.policy, entries, cfg.eval_sampling, mix_seed(cfg.seed, fnv1a64(name)));
      write_metrics_files(paths.eval_dir / ("metrics_" + name), policy_eval.metrics, cfg);
      {
        std::ofstream per_query(paths.eval_dir / ("predictions_" + name + ".jsonl"));
        per_query << nlohmann::json{{"_provenance",
                                     {{"config_hash", cfg.hash_hex()},
                                      {"seed", cfg.seed}}}}
                         .dump()
                  << "\n";
        for (const auto& row : policy_eval.per_query) per_query << row.dump() << "\n";
      }

      // baseline metrics on this split
      const auto records = load_split(paths, name, false);
      const Matrix X = embeddings_to_matrix(
          read_embeddings((paths.embeddings / (name + ".bin")).string()));
      std::vector<Label> truths;
      for (const auto& r : records) truths.push_back(r.label);

      std::vector<std::pair<std::string, Metrics>> computed;
      computed.emplace_back("molverdict", policy_eval.metrics);
      for (const auto& [bname, model] : baselines) {
        std::vector<Label> predictions;
        std::vector<double> scores;
        for (int r = 0; r < X.rows; ++r) {
          const ScoredPrediction p = predict_baseline(model, X.row(r));
          predictions.push_back(p.label);
          scores.push_back(p.score);
        }
        Metrics m = confusion_metrics(predictions, truths);
        if (m.n_pos > 0 && m.n_neg > 0) m.auc = auc(scores, truths);
        m.format_adherence_rate = 1.0;
        computed.emplace_back(bname, m);
      }

      nlohmann::json published;
      if (constants.is_object() && constants.contains("published")) {
        const auto& pub = constants["published"];
        const char* key = name == "val" ? "validation" : name.c_str();
        if (pub.contains(key)) published = pub[key];
      }
      write_comparison_csv(paths.eval_dir / ("comparison_" + name + ".csv"), cfg, computed,
                           published);
    }
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

void stage_report(const RunConfig& cfg, const ArtifactPaths& paths) {
  const Stage stage = Stage::kReport;
  try {
    // EMA over the reward trace for external plotting
    const CsvTable trace = read_csv((paths.grpo_dir / "reward_trace.csv").string());
    const int step_col = trace.column("step");
    const int total_col = trace.column("mean_total");
    if (step_col < 0 || total_col < 0)
      throw std::runtime_error("reward trace is missing step/mean_total columns");
    std::vector<double> totals;
    for (const auto& row : trace.rows) totals.push_back(std::stod(row[total_col]));
    const auto smoothed = ema(totals, cfg.ema_alpha);
    {
      std::ofstream out(paths.grpo_dir / "reward_trace_ema.csv");
      out << "# " << stamp(cfg) << "\n";
      out << "step,mean_total,ema_total\n";
      out.precision(17);
      for (std::size_t i = 0; i < totals.size(); ++i)
        out << trace.rows[i][step_col] << "," << totals[i] << "," << smoothed[i] << "\n";
    }

    // long-format reward trace (step,component,value)
    {
      std::ofstream out(paths.grpo_dir / "reward_trace_long.csv");
      out << "# " << stamp(cfg) << "\n";
      out << "step,component,value\n";
      out.precision(17);
      const char* components[] = {"mean_total",         "mean_correctness",
                                  "mean_xml_format",    "mean_soft_format",
                                  "mean_interpretability", "mean_confidence_alignment"};
      for (const auto& row : trace.rows) {
        for (const char* component : components) {
          const int col = trace.column(component);
          if (col >= 0)
            out << row[step_col] << "," << component << "," << row[col] << "\n";
        }
      }
    }

    nlohmann::json manifest = {
        {"config_hash", cfg.hash_hex()},
        {"seed", cfg.seed},
        {"config", cfg.canonical_text()},
    };
    nlohmann::json artifacts = nlohmann::json::array();
    for (const auto& entry : fs::recursive_directory_iterator(paths.out)) {
      if (!entry.is_regular_file()) continue;
      const std::string rel = fs::relative(entry.path(), paths.out).string();
      if (rel == ".lock" || rel == "run_manifest.json") continue;
      artifacts.push_back(rel);
    }
    std::sort(artifacts.begin(), artifacts.end());
    manifest["artifacts"] = artifacts;
    std::ofstream out(paths.out / "run_manifest.json");
    out << manifest.dump(2) << "\n";
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

bool stage_done(Stage stage, const RunConfig& cfg, const ArtifactPaths& paths) {
  switch (stage) {
    case Stage::kPrepare:
      return fs::exists(paths.prepared / "train.csv") &&
             fs::exists(paths.prepared / "descriptors.csv");
    case Stage::kEmbed: {
      for (const std::string& name : split_names(cfg))
        if (!fs::exists(paths.embeddings / (name + ".bin"))) return false;
      return true;
    }
    case Stage::kTrainGbdt:
      return fs::exists(paths.gbdt_dir / "model.bin");
    case Stage::kNeighbors: {
      for (const std::string& name : split_names(cfg))
        if (!fs::exists(paths.neighbors_dir / ("prompts_" + name + ".jsonl"))) return false;
      return true;
    }
    case Stage::kTrainGrpo:
      return fs::exists(paths.grpo_dir / "selected.json");
    case Stage::kEvaluate:
      return fs::exists(paths.eval_dir / "metrics_val.json") &&
             fs::exists(paths.eval_dir / "metrics_test.json");
    case Stage::kReport:
      return fs::exists(paths.out / "run_manifest.json");
  }
  return false;
}

}  // namespace

PipelineResult run_pipeline(const RunConfig& cfg, Stage up_to, bool resume) {
  const ArtifactPaths paths(cfg.out_dir);
  paths.create_all();
  LockFile lock(paths.out);

  PipelineResult result;
  for (Stage stage : {Stage::kPrepare, Stage::kEmbed, Stage::kTrainGbdt, Stage::kNeighbors,
                      Stage::kTrainGrpo, Stage::kEvaluate, Stage::kReport}) {
    if (static_cast<int>(stage) > static_cast<int>(up_to)) break;
    if (resume && stage_done(stage, cfg, paths)) {
      result.last_completed = stage;
      continue;
    }
    switch (stage) {
      case Stage::kPrepare: stage_prepare(cfg, paths); break;
      case Stage::kEmbed: stage_embed(cfg, paths); break;
      case Stage::kTrainGbdt: stage_train_gbdt(cfg, paths); break;
      case Stage::kNeighbors: stage_neighbors(cfg, paths); break;
      case Stage::kTrainGrpo: stage_train_grpo(cfg, paths); break;
      case Stage::kEvaluate: stage_evaluate(cfg, paths); break;
      case Stage::kReport: stage_report(cfg, paths); break;
    }
    result.executed.push_back(stage);
    result.last_completed = stage;
  }
  return result;
}

std::string predict_single(const RunConfig& cfg, const std::string& smiles,
                           std::uint64_t sample_seed) {
  const ArtifactPaths paths(cfg.out_dir);
  const ContributionTables tables = load_tables_checked(cfg, Stage::kEvaluate);
  const auto [pains, brenk] = load_alerts_checked(cfg, Stage::kEvaluate);
  const GbdtModel model = load_gbdt((paths.gbdt_dir / "model.bin").string());
  const auto descriptors = read_descriptor_table(paths.prepared / "descriptors.csv");
  const PromptTemplate system_template = PromptTemplate::load(cfg.paths.prompt_template);

  const auto train_records = load_split(paths, "train", false);
  const auto train_embeddings = read_embeddings((paths.embeddings / "train.bin").string());
  std::vector<PoolEntry> pool(train_records.size());
  for (std::size_t i = 0; i < train_records.size(); ++i) {
    std::vector<float> x(train_embeddings[i].values.begin(),
                         train_embeddings[i].values.end());
    pool[i] = {train_records[i].id, train_records[i].label, leaf_embedding(model, x)};
  }

  const Molecule mol = parse_smiles(smiles);
  const DescriptorVector query = compute_descriptors(mol, tables, pains, brenk);
  const Embedding embedding = circular_fingerprint(mol, cfg.embed_radius, cfg.embed_dim);
  std::vector<float> x(embedding.values.begin(), embedding.values.end());
  const NeighborSet neighbors =
      top_k_neighbors(leaf_embedding(model, x), "query", pool, cfg.neighbor_k);

  const DescriptorLookup lookup = [&](const std::string& id) {
    const auto it = descriptors.find(id);
    return it == descriptors.end() ? std::optional<DescriptorVector>{}
                                   : std::optional<DescriptorVector>{it->second};
  };
  const PromptRecord prompt =
      build_prompt(query, "query", std::nullopt, neighbors, lookup, system_template);
  const int context = context_bucket(query, neighbors, descriptors, cfg.n_contexts);

  const auto selected = [&] {
    std::ifstream in(paths.grpo_dir / "selected.json");
    if (!in)
      throw std::runtime_error("missing selected checkpoint; run the pipeline first");
    return nlohmann::json::parse(in);
  }();
  const Checkpoint ckpt = load_checkpoint(selected.at("path").get<std::string>());

  Rng rng(mix_seed(sample_seed, fnv1a64(smiles)));
  const SampledSequence seq =
      sample_sequence(ckpt.policy, context, cfg.eval_sampling, rng);
  const std::string completion = ckpt.policy.vocab().render(seq.tokens);
  const StrictParse parsed = parse_strict(completion);

  auto group = [](const std::vector<Neighbor>& ns) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Neighbor& n : ns) arr.push_back({{"id", n.id}, {"distance", n.distance}});
    return arr;
  };
  nlohmann::json out = {
      {"input_smiles", smiles},
      {"canonical", canonical_form(mol)},
      {"strict_valid", parsed.ok()},
      {"completion", completion},
      {"think", parsed.response.think},
      {"context", context},
      {"neighbors",
       {{"approved", group(neighbors.approved)}, {"unapproved", group(neighbors.unapproved)}}},
      {"system_text", prompt.system_text},
      {"config_hash", cfg.hash_hex()},
      {"seed", sample_seed},
  };
  if (parsed.response.label) out["label"] = to_string(*parsed.response.label);
  if (parsed.response.score) out["score"] = *parsed.response.score;
  return out.dump(2);
}

}  // namespace molverdict
