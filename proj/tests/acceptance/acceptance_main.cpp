//
// Project MolVerdict - Copyright 2026 MolVerdict Developers.
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: every release criterion as one pass/fail line, with its
// tolerance pinned in code. Returns the number of failed criteria.
//

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "molverdict/chem/canonical.hpp"
#include "molverdict/chem/smiles.hpp"
#include "molverdict/chem/substructure.hpp"
#include "molverdict/data_dir.hpp"
#include "molverdict/eval/metrics.hpp"
#include "molverdict/eval/splits.hpp"
#include "molverdict/gbdt/gbdt.hpp"
#include "molverdict/gbdt/neighbors.hpp"
#include "molverdict/pipe/config.hpp"
#include "molverdict/pipe/pipeline.hpp"
#include "molverdict/reason/rewards.hpp"
#include "molverdict/rl/grpo.hpp"
#include "molverdict/rl/train.hpp"
#include "molverdict/util/hash.hpp"
#include "molverdict/util/rng.hpp"

using namespace molverdict;
namespace fs = std::filesystem;

namespace {

struct Check {
  std::string name;
  double time_limit_s;  // <= 0 means no limit
  std::function<std::string()> run;
};

[[noreturn]] void fail(const std::string& message) { throw std::runtime_error(message); }

void expect(bool condition, const std::string& message) {
  if (!condition) fail(message);
}

std::string fmt(const char* pattern, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), pattern, a, b);
  return buf;
}

// ---------------------------------------------------------------- rewards

std::string check_reward_exactness() {
  struct Row {
    const char* text;
    Label truth;
    double correctness, xml, soft, interp, confidence;
  };
  const Label A = Label::kApproved;
  const Label U = Label::kUnapproved;
  auto v = [](const char* label, const char* score) {
    static std::vector<std::string> keep;
    keep.push_back(std::string("<think>x</think><label>") + label + "</label><score>" +
                   score + "</score>");
    return keep.back().c_str();
  };
  const std::vector<Row> rows = {
      {v("approved", "0.9"), A, 2, 0.75, 0.5, 0.5, 2},
      {v("approved", "0.7"), A, 2, 0.75, 0.5, 0.5, 2},   // >= 0.7 boundary
      {v("approved", "0.5"), A, 2, 0.75, 0.5, 0.5, 1},
      {v("approved", "0.4"), A, 2, 0.75, 0.5, 0.5, 1},   // 0.4 boundary
      {v("approved", "0.39"), A, 2, 0.75, 0.5, 0.5, 0},
      {v("approved", "0.0"), A, 2, 0.75, 0.5, 0.5, 0},
      {v("approved", "1.0"), A, 2, 0.75, 0.5, 0.5, 2},
      {v("unapproved", "0.3"), A, 0, 0.75, 0.5, 0.5, 1},
      {v("unapproved", "0.5"), A, 0, 0.75, 0.5, 0.5, 0.5},
      {v("unapproved", "0.9"), A, 0, 0.75, 0.5, 0.5, 0},
      {v("unapproved", "0.7"), A, 0, 0.75, 0.5, 0.5, 0},
      {v("approved", "0.9"), U, 0, 0.75, 0.5, 0.5, 0},
      {v("approved", "0.4"), U, 0, 0.75, 0.5, 0.5, 0.5},
      {v("unapproved", "0.9"), U, 2, 0.75, 0.5, 0.5, 2},
      {v("unapproved", "0.0"), U, 2, 0.75, 0.5, 0.5, 0},
      {v("maybe", "0.9"), A, 0, 0.75, 0.5, 0, 0},
      {v("maybe", "0.2"), A, 0, 0.75, 0.5, 0, 0},
      {v("APPROVED", "0.8"), A, 2, 0.75, 0.5, 0.5, 2},
      {v(" Unapproved ", "0.2"), A, 0, 0.75, 0.5, 0.5, 1},
      {v("approved", "abc"), A, 2, 0.75, 0.5, 0.5, 0},   // unusable score: low band
      {v("approved", "1.5"), A, 2, 0.75, 0.5, 0.5, 0},   // out of range: low band
      {"<think>x</think><label>approved</label>", A, 2, 0.5, 0, 0.5, 0},
      {"<think>x</think>", A, 0, 0.25, 0, 0, 0},
      {"", A, 0, 0, 0, 0, 0},
      {"hello world", A, 0, 0, 0, 0, 0},
      {"<label>approved</label><think>x</think><score>0.9</score>", A, 2, 0.75, 0, 0.5, 2},
      {"<think>a</think><think>b</think><label>approved</label><score>0.9</score>", A,
       2, 0.5, 0.5, 0.5, 2},
      {"Sure!\n<think>x</think><label>approved</label><score>0.9</score>\nthanks", A,
       2, 0.75, 0.5, 0.5, 2},
      {"<think>x</think><label>approved<score>0.9</score>", A, 0, 0.625, 0, 0, 0},
      {"<score>0.9</score>", A, 0, 0.25, 0, 0, 0},
      {"<think>x</think><score>0.9</score>", A, 0, 0.5, 0, 0, 0},
      {"<think><label>approved</label></think><score>0.9</score>", A, 2, 0.75, 0, 0.5, 2},
      {"x</think><label>approved</label><score>0.9</score>", A, 2, 0.625, 0, 0.5, 2},
  };
  expect(rows.size() >= 30, "fixture must enumerate at least 30 completions");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Row& row = rows[i];
    const RewardBreakdown b = composite_reward(row.text, row.truth);
    const double expected_total =
        row.correctness + row.xml + row.soft + row.interp + row.confidence;
    if (b.correctness != row.correctness || b.xml_format != row.xml ||
        b.soft_format != row.soft || b.interpretability != row.interp ||
        b.confidence_alignment != row.confidence || b.total != expected_total)
      fail("deviation at fixture row " + std::to_string(i) + " ('" +
           std::string(row.text).substr(0, 40) + "...'): got total " +
           std::to_string(b.total) + ", want " + std::to_string(expected_total));
  }
  return std::to_string(rows.size()) + " completions, zero deviation";
}

// ----------------------------------------------------------- GRPO checks

std::vector<GroupRollout> sample_rollouts(const ToyPolicy& policy, int n_prompts, int k,
                                          std::uint64_t seed) {
  std::vector<GroupRollout> rollouts;
  Rng reward_rng(mix_seed(seed, 17));
  for (int j = 0; j < n_prompts; ++j) {
    GroupRollout r;
    r.prompt_id = "p" + std::to_string(j);
    r.context = j % policy.n_contexts();
    r.completions =
        sample_group(policy, r.context, k, SamplingParams{}, mix_seed(seed, j));
    for (int i = 0; i < k; ++i) r.rewards.push_back(reward_rng.uniform(0.0, 5.75));
    r.advantages = group_advantages(r.rewards);
    rollouts.push_back(std::move(r));
  }
  return rollouts;
}

std::string check_gradient() {
  ToyPolicy policy_old(4, 12);
  Rng init(2026);
  for (double& p : policy_old.params()) p = 0.3 * init.gaussian();
  const auto rollouts = sample_rollouts(policy_old, 4, 4, 99);

  ToyPolicy policy = policy_old;
  Rng noise(7);
  for (double& p : policy.params()) p += 0.05 * noise.gaussian();

  const double epsilon = 0.2, beta = 0.04, h = 1e-5;
  const LossGrad analytic = grpo_loss(rollouts, policy, policy_old, epsilon, beta);

  auto loss_at = [&](int coord, double delta) {
    ToyPolicy probe = policy;
    probe.params()[coord] += delta;
    return grpo_loss(rollouts, probe, policy_old, epsilon, beta).loss;
  };

  Rng pick(31337);
  double worst = 0.0;
  int checked = 0;
  while (checked < 120) {
    const int i = static_cast<int>(pick.uniform_int(policy.params().size()));
    const double fd = (loss_at(i, h) - loss_at(i, -h)) / (2.0 * h);
    const double a = analytic.grad[i];
    const double rel = std::abs(a - fd) / std::max({std::abs(a), std::abs(fd), 1e-8});
    worst = std::max(worst, rel);
    if (rel > 1e-4)
      fail("coordinate " + std::to_string(i) + " rel err " + std::to_string(rel));
    ++checked;
  }
  return fmt("%.0f coordinates, max rel err %.2e", checked, worst);
}

std::string check_learning() {
  std::vector<TrainPrompt> prompts;
  for (int c = 0; c < 16; ++c)
    prompts.push_back({"synth-" + std::to_string(c), c,
                       (__builtin_popcount(c) & 1) ? Label::kApproved : Label::kUnapproved});
  const RewardFn reward = [](const std::string& text, Label truth, const std::string&, int) {
    return composite_reward(text, truth);
  };
  TrainConfig config;  // K = 4 and the trainer defaults
  config.seed = 8;
  const ToyPolicy initial = ToyPolicy::with_format_prior(16, 16);
  const TrainResult result = train_policy(initial, prompts, reward, config);
  expect(result.status == TrainStatus::kOk, "training diverged");

  std::vector<double> totals;
  for (const auto& row : result.trace) totals.push_back(row.mean_total);
  const auto smoothed = ema(totals, 0.05);
  const double peak = *std::max_element(smoothed.begin(), smoothed.end());
  expect(peak >= 0.9 * kMaxRewardTotal,
         fmt("EMA peaked at %.3f < %.3f", peak, 0.9 * kMaxRewardTotal));

  const SamplingParams eval{1.0, 9, 0.9};
  int valid = 0, total = 0;
  for (const auto& p : prompts)
    for (int k = 0; k < 64; ++k) {
      Rng rng(mix_seed(4242, fnv1a64(p.id) + k));
      const auto seq = sample_sequence(result.policy, p.context, eval, rng);
      valid += parse_strict(result.policy.vocab().render(seq.tokens)).ok();
      ++total;
    }
  const double adherence = static_cast<double>(valid) / total;
  expect(adherence >= 0.99, fmt("final-checkpoint adherence %.4f < 0.99", adherence));
  return fmt("EMA peak %.3f of 5.75, adherence %.4f", peak, adherence);
}

std::string check_group_centering() {
  Rng rng(55);
  double worst = 0.0;
  for (int trial = 0; trial < 10000; ++trial) {
    const int k = 2 + static_cast<int>(rng.uniform_int(7));
    std::vector<double> rewards(k);
    for (double& r : rewards) r = rng.uniform(0.0, 5.75);
    double sum = 0.0;
    for (double a : group_advantages(rewards)) sum += a;
    worst = std::max(worst, std::abs(sum));
    if (std::abs(sum) > 1e-9) fail(fmt("|sum advantages| = %.3e at trial", std::abs(sum)));
  }
  return fmt("10000 groups, max |sum| %.2e", worst);
}

// ------------------------------------------------------------------ GBDT

void separable_1d(Matrix& X, std::vector<int>& y, int per_class, std::uint64_t seed) {
  Rng rng(seed);
  X = Matrix(2 * per_class, 1);
  y.assign(2 * per_class, 0);
  for (int i = 0; i < per_class; ++i) {
    X.at(i, 0) = static_cast<float>(-rng.uniform(0.5, 10.0));
    X.at(per_class + i, 0) = static_cast<float>(rng.uniform(0.5, 10.0));
    y[per_class + i] = 1;
  }
}

std::string check_gbdt() {
  // monotone training loss on a noisy full-sample fit
  {
    Rng rng(5);
    Matrix X(120, 4);
    std::vector<int> y(120);
    for (int r = 0; r < 120; ++r) {
      for (int c = 0; c < 4; ++c) X.at(r, c) = static_cast<float>(rng.gaussian());
      y[r] = (X.at(r, 0) + 0.7 * rng.gaussian()) > 0 ? 1 : 0;
    }
    GbdtParams params;
    params.n_rounds = 80;
    const GbdtModel model = fit_gbdt(X, y, params);
    for (std::size_t i = 1; i < model.train_loss_curve.size(); ++i)
      expect(model.train_loss_curve[i] <= model.train_loss_curve[i - 1] + 1e-12,
             "train log-loss increased at round " + std::to_string(i));
  }

  // separable fixture accuracy within 50 rounds
  double accuracy;
  {
    Matrix X;
    std::vector<int> y;
    separable_1d(X, y, 40, 9);
    GbdtParams params;
    params.n_rounds = 50;
    const GbdtModel model = fit_gbdt(X, y, params);
    int correct = 0;
    for (int r = 0; r < X.rows; ++r)
      correct += (predict_proba(model, X.row(r)) >= 0.5 ? 1 : 0) == y[r];
    accuracy = static_cast<double>(correct) / X.rows;
    expect(accuracy >= 0.95, fmt("train accuracy %.3f < 0.95", accuracy));
  }

  // neighbor search equals the brute-force oracle on every pool size <= 100
  Rng rng(808);
  auto random_leaves = [&rng](int n_trees) {
    LeafVector lv;
    for (int i = 0; i < n_trees; ++i)
      lv.leaves.push_back(static_cast<std::int32_t>(rng.uniform_int(4)));
    return lv;
  };
  int pools_checked = 0;
  for (int pool_size = 12; pool_size <= 100; pool_size += 4) {
    std::vector<PoolEntry> pool;
    for (int i = 0; i < pool_size; ++i) {
      char id[16];
      std::snprintf(id, sizeof(id), "m%03d", i);
      pool.push_back({id, i % 2 == 0 ? Label::kApproved : Label::kUnapproved,
                      random_leaves(12)});
    }
    for (int q = 0; q < 5; ++q) {
      const LeafVector query = random_leaves(12);
      const NeighborSet got = top_k_neighbors(query, "q", pool, 5);
      // oracle: full sort of (distance, id)
      auto oracle = [&](Label cls) {
        std::vector<std::pair<int, std::string>> all;
        for (const auto& e : pool) {
          if (e.label != cls) continue;
          int d = 0;
          for (std::size_t i = 0; i < query.leaves.size(); ++i)
            if (query.leaves[i] != e.leaves.leaves[i]) ++d;
          all.emplace_back(d, e.id);
        }
        std::sort(all.begin(), all.end());
        all.resize(5);
        return all;
      };
      const auto want_a = oracle(Label::kApproved);
      const auto want_u = oracle(Label::kUnapproved);
      for (int i = 0; i < 5; ++i) {
        expect(got.approved[i].id == want_a[i].second &&
                   got.approved[i].distance == want_a[i].first,
               "approved neighbor mismatch vs oracle");
        expect(got.unapproved[i].id == want_u[i].second &&
                   got.unapproved[i].distance == want_u[i].first,
               "unapproved neighbor mismatch vs oracle");
      }
    }
    ++pools_checked;
  }
  return fmt("monotone loss, %.0f%% separable accuracy vs oracle on ", accuracy * 100.0) +
         std::to_string(pools_checked) + " pools";
}

std::string check_label_affinity() {
  // 500 synthetic molecules with class-correlated features
  const int n = 500, dim = 32;
  Rng rng(321);
  Matrix X(n, dim);
  std::vector<int> y(n);
  for (int r = 0; r < n; ++r) {
    y[r] = r % 2;
    for (int c = 0; c < dim; ++c) {
      const double shift = (c < 8 && y[r] == 1) ? 0.8 : 0.0;
      X.at(r, c) = static_cast<float>(shift + rng.gaussian());
    }
  }
  // train on 400, query with 100 held-out molecules
  Matrix train_X(400, dim);
  std::vector<int> train_y(400);
  for (int r = 0; r < 400; ++r) {
    std::copy(X.row(r).begin(), X.row(r).end(), train_X.row(r).begin());
    train_y[r] = y[r];
  }
  GbdtParams params;
  params.n_rounds = 30;
  params.max_depth = 3;
  const GbdtModel model = fit_gbdt(train_X, train_y, params);

  std::vector<PoolEntry> pool(400), shuffled_pool;
  for (int r = 0; r < 400; ++r) {
    char id[16];
    std::snprintf(id, sizeof(id), "t%03d", r);
    pool[r] = {id, train_y[r] == 1 ? Label::kApproved : Label::kUnapproved,
               leaf_embedding(model, train_X.row(r))};
  }
  shuffled_pool = pool;
  {
    std::vector<Label> labels;
    for (const auto& e : pool) labels.push_back(e.label);
    Rng shuffle_rng(77);
    shuffle_rng.shuffle(labels);
    for (int r = 0; r < 400; ++r) shuffled_pool[r].label = labels[r];
  }

  auto mean_distance = [](const std::vector<Neighbor>& ns) {
    double s = 0.0;
    for (const auto& x : ns) s += x.distance;
    return s / ns.size();
  };

  double paired_sum = 0.0;
  int queries = 0;
  for (int r = 400; r < n; ++r) {
    const LeafVector leaves = leaf_embedding(model, X.row(r));
    const Label truth = y[r] == 1 ? Label::kApproved : Label::kUnapproved;
    const NeighborSet real = top_k_neighbors(leaves, "query", pool, 5);
    const NeighborSet random = top_k_neighbors(leaves, "query", shuffled_pool, 5);
    // margin: how much closer the same-class neighbor set sits than the
    // opposite-class one
    auto margin = [&](const NeighborSet& set) {
      const double same =
          truth == Label::kApproved ? mean_distance(set.approved) : mean_distance(set.unapproved);
      const double other =
          truth == Label::kApproved ? mean_distance(set.unapproved) : mean_distance(set.approved);
      return other - same;
    };
    paired_sum += margin(real) - margin(random);
    ++queries;
  }
  expect(queries >= 100, "need at least 100 paired queries");
  const double paired_mean = paired_sum / queries;
  expect(paired_mean > 0.0,
         fmt("same-class affinity does not beat the shuffled baseline (%.4f)", paired_mean));
  return fmt("paired margin gain %.3f over %.0f queries", paired_mean,
             static_cast<double>(queries));
}

// --------------------------------------------------------------- metrics

std::string check_metrics_oracle() {
  Rng rng(2468);
  int instances = 0;
  while (instances < 1000) {
    const int n = 2 + static_cast<int>(rng.uniform_int(200));
    std::vector<double> scores(n);
    std::vector<Label> truths(n);
    int pos = 0;
    for (int i = 0; i < n; ++i) {
      scores[i] = std::floor(rng.uniform() * 10.0) / 10.0;  // ties on a grid
      truths[i] = rng.uniform() < 0.5 ? Label::kApproved : Label::kUnapproved;
      pos += truths[i] == Label::kApproved;
    }
    if (pos == 0 || pos == n) continue;
    if (auc(scores, truths) != auc_pair_count_serial(scores, truths))
      fail("auc mismatch vs pairwise counting at instance " + std::to_string(instances));
    ++instances;
  }

  // hand-computed confusion fixture
  const Label A = Label::kApproved, U = Label::kUnapproved;
  const std::vector<Label> pred = {A, A, A, U, U, U};
  const std::vector<Label> truth = {A, A, U, A, U, U};
  const Metrics m = confusion_metrics(pred, truth);
  expect(m.precision == 2.0 / 3.0 && m.recall == 2.0 / 3.0 && m.specificity == 2.0 / 3.0,
         "confusion fixture mismatch");
  expect(m.accuracy == 4.0 / 6.0 && m.f1 == 2.0 / 3.0, "confusion fixture mismatch");

  // stratified split within +/-1 per class for sizes spanning 20..10000
  int splits_checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int n_pos = 10 + static_cast<int>(rng.uniform_int(4991));
    const int n_neg = 10 + static_cast<int>(rng.uniform_int(4991));
    std::vector<Label> labels;
    for (int i = 0; i < n_pos; ++i) labels.push_back(A);
    for (int i = 0; i < n_neg; ++i) labels.push_back(U);
    const SplitIndices s = stratified_split(labels, SplitRatios{}, trial);
    for (const auto& pair : {std::pair{n_pos, A}, std::pair{n_neg, U}}) {
      const int count = pair.first;
      const Label which = pair.second;
      auto in = [&labels, which](const std::vector<int>& part) {
        int c = 0;
        for (int i : part) c += labels[i] == which;
        return c;
      };
      expect(std::abs(in(s.train) - count * 0.8) <= 1.0 + 1e-9, "train bucket off by > 1");
      expect(std::abs(in(s.val) - count * 0.1) <= 1.0 + 1e-9, "val bucket off by > 1");
      expect(std::abs(in(s.test) - count * 0.1) <= 1.0 + 1e-9, "test bucket off by > 1");
    }
    ++splits_checked;
  }
  // boundary sizes
  for (int per_class : {10, 2255, 5000}) {
    std::vector<Label> labels;
    for (int i = 0; i < per_class; ++i) labels.push_back(A);
    for (int i = 0; i < per_class; ++i) labels.push_back(U);
    stratified_split(labels, SplitRatios{}, 1);
  }
  return fmt("1000 auc instances exact, %.0f stratified splits within 1",
             static_cast<double>(splits_checked));
}

// ---------------------------------------------------------------- parser

std::string random_tree_smiles(Rng& rng) {
  // valence-safe recursive construction over C/N/O with single bonds; all
  // children but the last are parenthesized so siblings never chain onto a
  // saturated tail atom
  std::function<std::string(int, bool)> gen = [&](int depth, bool has_parent) {
    static const char* atoms[] = {"C", "N", "O"};
    static const int valence[] = {4, 3, 2};
    const int pick = static_cast<int>(rng.uniform_int(3));
    const int slots = valence[pick] - (has_parent ? 1 : 0);
    std::vector<std::string> kids;
    while (static_cast<int>(kids.size()) < slots && depth < 4 && rng.uniform() < 0.5)
      kids.push_back(gen(depth + 1, true));
    std::string out = atoms[pick];
    for (std::size_t i = 0; i < kids.size(); ++i)
      out += i + 1 < kids.size() ? "(" + kids[i] + ")" : kids[i];
    return out;
  };
  return gen(0, false);
}

std::string check_parser_suite() {
  std::vector<std::string> corpus = {
      "C", "CC", "CCO", "OCC", "CC(C)C", "CC(C)(C)C", "C1CCCCC1", "c1ccccc1",
      "Cc1ccccc1", "Oc1ccccc1", "Nc1ccccc1", "c1ccncc1", "c1ccoc1", "c1ccsc1",
      "CC(=O)O", "CC(=O)OC", "CC(N)C(=O)O", "C#N", "N#Cc1ccccc1", "CC=CC",
      "C1CC1", "C1CCC1", "C1CCNCC1", "CN1CCCC1", "c1ccc2ccccc2c1",
      "c1ccc2[nH]ccc2c1", "[NH4+].[Cl-]", "[O-]C(=O)C", "OO", "SS", "CSC",
      "FC(F)F", "ClCCl", "BrCCBr", "ICI", "C=C", "C#C", "CC#CC", "O=C=O",
      "CNC(=O)C", "CCOCC", "OCC(O)CO", "c1ccccc1c1ccccc1", "CC(C)N",
      "NS(=O)(=O)c1ccccc1", "[O-][N+](=O)c1ccccc1", "C[C@H](N)C(=O)O",
      "c1cc[nH]c1", "Cn1cccc1", "C%10CCCC%10", "O=C1C=CC(=O)C=C1",
      "Oc1ccc(O)cc1", "N=[N+]=[N-]", "C=CC=O", "CC(Cl)Br", "NCCc1ccc(O)cc1",
      "CC(=O)NCCc1ccccc1", "COC(=O)CN", "CN1CCOCC1", "OC(=O)c1ccncc1",
  };
  Rng gen_rng(13579);
  while (corpus.size() < 220) corpus.push_back(random_tree_smiles(gen_rng));

  Rng perm_rng(8642);
  int checked = 0;
  for (const std::string& smiles : corpus) {
    const Molecule m = parse_smiles(smiles);
    const std::string canonical = canonical_form(m);
    // round trip: the canonical form reparses to the same canonical form
    const Molecule round = parse_smiles(canonical);
    expect(canonical_form(round) == canonical, "fixpoint violated for " + smiles);
    expect(round.atom_count() == m.atom_count(), "atom count changed for " + smiles);
    // permutation invariance
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<int> perm(m.atom_count());
      for (int i = 0; i < m.atom_count(); ++i) perm[i] = i;
      perm_rng.shuffle(perm);
      std::vector<int> inverse(m.atom_count());
      for (int i = 0; i < m.atom_count(); ++i) inverse[perm[i]] = i;
      Molecule shuffled;
      shuffled.atoms.resize(m.atoms.size());
      for (int old = 0; old < m.atom_count(); ++old)
        shuffled.atoms[inverse[old]] = m.atoms[old];
      for (const Bond& b : m.bonds) {
        Bond nb = b;
        nb.a = inverse[b.a];
        nb.b = inverse[b.b];
        shuffled.bonds.push_back(nb);
      }
      finalize_molecule(shuffled);
      expect(canonical_form(shuffled) == canonical,
             "permutation changed the canonical form of " + smiles);
    }
    ++checked;
  }

  // valence and structural error cases
  const std::vector<std::pair<std::string, SmilesErrorKind>> errors = {
      {"CO(C)C", SmilesErrorKind::kValenceExceeded},
      {"C(F)(F)(F)(F)F", SmilesErrorKind::kValenceExceeded},
      {"[CH5]", SmilesErrorKind::kValenceExceeded},
      {"I(C)C", SmilesErrorKind::kValenceExceeded},
      {"Cl(C)C", SmilesErrorKind::kValenceExceeded},
      {"B(C)(C)(C)C", SmilesErrorKind::kValenceExceeded},
      {"S(C)(C)(C)(C)(C)(C)C", SmilesErrorKind::kValenceExceeded},
      {"[OH3]", SmilesErrorKind::kValenceExceeded},
      {"N(=O)(=O)(=O)C", SmilesErrorKind::kValenceExceeded},
      {"C(C", SmilesErrorKind::kUnbalancedParenthesis},
      {"CC)", SmilesErrorKind::kUnbalancedParenthesis},
      {"C1CCC", SmilesErrorKind::kUnclosedRingBond},
      {"CXC", SmilesErrorKind::kUnknownAtomSymbol},
      {"[Zz]", SmilesErrorKind::kUnknownAtomSymbol},
      {"", SmilesErrorKind::kEmptyInput},
  };
  for (const auto& [text, kind] : errors) {
    try {
      parse_smiles(text);
      fail("expected error for '" + text + "'");
    } catch (const SmilesError& e) {
      expect(e.kind() == kind, "wrong error kind for '" + text + "'");
    }
  }

  // matcher vs brute-force enumeration on molecules <= 14 atoms
  std::vector<AlertPattern> patterns =
      load_alert_file(default_data_dir() + "/alerts/pains.tsv");
  const auto brenk = load_alert_file(default_data_dir() + "/alerts/brenk.tsv");
  patterns.insert(patterns.end(), brenk.begin(), brenk.end());
  patterns.push_back(AlertPattern::compile("benzene", "c1ccccc1"));
  patterns.push_back(AlertPattern::compile("amide", "C(=O)N"));
  patterns.push_back(AlertPattern::compile("ring-carbon", "[C;R]"));
  patterns.push_back(AlertPattern::compile("chain-oxygen", "[O;!R]"));

  std::function<bool(const Molecule&, const AlertPattern&, std::vector<int>&,
                     std::vector<bool>&, int)>
      assign = [&](const Molecule& m, const AlertPattern& p, std::vector<int>& map,
                   std::vector<bool>& used, int pa) -> bool {
    if (pa == p.graph.atom_count()) {
      for (const Bond& pb : p.graph.bonds) {
        const Bond* mb = m.bond_between(map[pb.a], map[pb.b]);
        if (mb == nullptr || mb->order != pb.order) return false;
      }
      return true;
    }
    for (int ma = 0; ma < m.atom_count(); ++ma) {
      if (used[ma]) continue;
      const Atom& a = m.atoms[ma];
      const Atom& q = p.graph.atoms[pa];
      if (a.element != q.element || a.aromatic != q.aromatic ||
          a.formal_charge != q.formal_charge)
        continue;
      if (p.ring_req[pa] == RingConstraint::kInRing && !a.in_ring) continue;
      if (p.ring_req[pa] == RingConstraint::kNotInRing && a.in_ring) continue;
      map[pa] = ma;
      used[ma] = true;
      if (assign(m, p, map, used, pa + 1)) return true;
      used[ma] = false;
    }
    return false;
  };

  int matcher_pairs = 0;
  for (const std::string& smiles : corpus) {
    const Molecule m = parse_smiles(smiles);
    if (m.atom_count() > 14) continue;
    for (const AlertPattern& p : patterns) {
      bool brute = false;
      if (p.graph.atom_count() <= m.atom_count()) {
        std::vector<int> map(p.graph.atom_count(), -1);
        std::vector<bool> used(m.atom_count(), false);
        brute = assign(m, p, map, used, 0);
      }
      expect(match_pattern(m, p) == brute, "matcher disagrees with brute force on " +
                                               smiles + " / " + p.name);
      ++matcher_pairs;
    }
  }
  return fmt("%.0f molecules round-trip + permutation, %.0f matcher pairs vs brute force",
             static_cast<double>(checked), static_cast<double>(matcher_pairs));
}

// --------------------------------------------------------------- end-to-end

fs::path g_e2e_dir;  // retained for the constants criterion

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  expect(static_cast<bool>(in), "missing artifact " + path.string());
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

std::string check_end_to_end() {
  RunConfig cfg = RunConfig::load(default_data_dir() + "/configs/fixture.conf");
  g_e2e_dir = fs::temp_directory_path() / "molverdict_acceptance_e2e";
  cfg.out_dir = g_e2e_dir.string();
  fs::remove_all(g_e2e_dir);

  run_pipeline(cfg);
  const std::vector<std::string> reports = {
      "eval/metrics_val.json",     "eval/metrics_test.json",
      "eval/metrics_external.json", "eval/comparison_val.csv",
      "eval/comparison_test.csv",  "eval/comparison_external.csv",
  };
  std::vector<std::string> first;
  for (const auto& r : reports) first.push_back(slurp(g_e2e_dir / r));

  fs::remove_all(g_e2e_dir);
  run_pipeline(cfg);
  for (std::size_t i = 0; i < reports.size(); ++i)
    expect(slurp(g_e2e_dir / reports[i]) == first[i],
           "second run differs in " + reports[i]);
  return fmt("%.0f metrics reports identical across reruns",
             static_cast<double>(reports.size()));
}

std::string check_published_constants() {
  const std::string constants_path = default_data_dir() + "/constants/published_scores.json";
  std::ifstream in(constants_path);
  expect(static_cast<bool>(in), "constants file missing");
  const auto constants = nlohmann::json::parse(in);
  const auto& external = constants.at("published").at("external");
  expect(external.at("chemap").at("auc").get<double>() == 0.64,
         "external comparator AUC constant must be 0.64");
  expect(external.contains("reported_reasoner"), "reference reasoner row missing");

  // the harness rendered them side by side with computed rows
  const std::string table = slurp(g_e2e_dir / "eval/comparison_external.csv");
  expect(table.find("chemap,0.64") != std::string::npos, "comparator row not rendered");
  expect(table.find("published") != std::string::npos, "published marker missing");
  expect(table.find("molverdict") != std::string::npos &&
             table.find("computed") != std::string::npos,
         "computed rows missing");
  fs::remove_all(g_e2e_dir);
  return "constants loaded and rendered side by side, marked non-computed";
}

}  // namespace

int main() {
  const std::vector<Check> checks = {
      {"reward-schedule-exactness", 1.0, check_reward_exactness},
      {"grpo-gradient-vs-finite-differences", 10.0, check_gradient},
      {"group-advantage-centering", 0.0, check_group_centering},
      {"metrics-oracle", 0.0, check_metrics_oracle},
      {"parser-suite", 0.0, check_parser_suite},
      {"gbdt-training-and-neighbor-oracle", 0.0, check_gbdt},
      {"neighbor-label-affinity", 0.0, check_label_affinity},
      {"grpo-learning-on-synthetic-task", 300.0, check_learning},
      {"end-to-end-determinism", 300.0, check_end_to_end},
      {"published-constants-rendering", 0.0, check_published_constants},
  };

  int failures = 0;
  for (const Check& check : checks) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = true;
    try {
      detail = check.run();
    } catch (const std::exception& e) {
      ok = false;
      detail = e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (ok && check.time_limit_s > 0.0 && seconds > check.time_limit_s) {
      ok = false;
      detail = fmt("exceeded time limit: %.1fs > %.1fs", seconds, check.time_limit_s);
    }
    std::printf("[%s] %-38s (%6.2fs) %s\n", ok ? "PASS" : "FAIL", check.name.c_str(),
                seconds, detail.c_str());
    if (!ok) ++failures;
  }
  return failures;
}
