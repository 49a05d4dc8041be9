//
// Project MolVerdict - Copyright 2026 MolVerdict Developers.
// SPDX-License-Identifier: Apache-2.0
//
// Serial reference vs OpenMP kernel comparison. Each kernel's parallel path
// must produce bit-identical results; this binary times both and reports the
// speedup.
//

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "molverdict/chem/smiles.hpp"
#include "molverdict/embed/fingerprint.hpp"
#include "molverdict/eval/metrics.hpp"
#include "molverdict/gbdt/gbdt.hpp"
#include "molverdict/gbdt/neighbors.hpp"
#include "molverdict/util/rng.hpp"

using namespace molverdict;

namespace {

double seconds(const std::function<void()>& fn) {
  const auto start = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void report(const char* kernel, double serial_s, double parallel_s, bool identical) {
  std::printf("%-24s serial %8.3f ms   parallel %8.3f ms   speedup %5.2fx   identical: %s\n",
              kernel, serial_s * 1e3, parallel_s * 1e3, serial_s / parallel_s,
              identical ? "yes" : "NO");
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP threads: %d\n\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP; parallel paths run serially\n\n");
#endif

  // ---- batch fingerprinting ----------------------------------------------
  {
    const std::vector<std::string> seeds = {
        "CC(N)C(=O)Oc1ccc(Cl)cc1", "c1ccc2[nH]ccc2c1", "NS(=O)(=O)c1ccccc1",
        "CC(=O)NCCc1ccccc1",       "OCC(O)CO",         "c1ccc2ccccc2c1",
    };
    std::vector<Molecule> molecules;
    for (int i = 0; i < 2000; ++i) molecules.push_back(parse_smiles(seeds[i % seeds.size()]));

    std::vector<BatchItem> serial_out, parallel_out;
    const double t_serial = seconds([&] { serial_out = embed_batch_serial(molecules, 2, 768); });
    const double t_parallel = seconds([&] { parallel_out = embed_batch(molecules, 2, 768); });
    bool identical = serial_out.size() == parallel_out.size();
    for (std::size_t i = 0; identical && i < serial_out.size(); ++i)
      identical = serial_out[i].embedding.values == parallel_out[i].embedding.values;
    report("embed_batch", t_serial, t_parallel, identical);
  }

  // ---- leaf-vector neighbor search ---------------------------------------
  {
    Rng rng(1);
    auto random_leaves = [&rng] {
      LeafVector lv;
      for (int i = 0; i < 64; ++i)
        lv.leaves.push_back(static_cast<std::int32_t>(rng.uniform_int(8)));
      return lv;
    };
    std::vector<PoolEntry> pool;
    for (int i = 0; i < 4000; ++i)
      pool.push_back({"m" + std::to_string(i),
                      i % 2 == 0 ? Label::kApproved : Label::kUnapproved, random_leaves()});
    std::vector<NeighborQuery> queries;
    for (int i = 0; i < 400; ++i)
      queries.push_back({"q" + std::to_string(i), random_leaves()});

    std::vector<NeighborSet> serial_out, parallel_out;
    const double t_serial =
        seconds([&] { serial_out = neighbors_for_all_serial(queries, pool, 5); });
    const double t_parallel = seconds([&] { parallel_out = neighbors_for_all(queries, pool, 5); });
    bool identical = serial_out.size() == parallel_out.size();
    for (std::size_t i = 0; identical && i < serial_out.size(); ++i)
      for (int k = 0; k < 5 && identical; ++k)
        identical = serial_out[i].approved[k].id == parallel_out[i].approved[k].id &&
                    serial_out[i].unapproved[k].id == parallel_out[i].unapproved[k].id;
    report("neighbors_for_all", t_serial, t_parallel, identical);
  }

  // ---- boosted-tree split scan -------------------------------------------
  {
    Rng rng(2);
    Matrix X(1500, 256);
    std::vector<int> y(1500);
    for (int r = 0; r < X.rows; ++r) {
      for (int c = 0; c < X.cols; ++c) X.at(r, c) = static_cast<float>(rng.gaussian());
      y[r] = (X.at(r, 0) + 0.5 * rng.gaussian()) > 0 ? 1 : 0;
    }
    GbdtParams params;
    params.n_rounds = 12;
    params.max_depth = 4;
    GbdtModel serial_model, parallel_model;
    FitOptions serial_options;
    serial_options.parallel = false;
    const double t_serial = seconds([&] { serial_model = fit_gbdt(X, y, params, serial_options); });
    const double t_parallel = seconds([&] { parallel_model = fit_gbdt(X, y, params); });
    const bool identical = serial_model.train_loss_curve == parallel_model.train_loss_curve;
    report("gbdt_fit", t_serial, t_parallel, identical);
  }

  // ---- AUC pairwise counting ---------------------------------------------
  {
    Rng rng(3);
    const int n = 30000;
    std::vector<double> scores(n);
    std::vector<Label> truths(n);
    for (int i = 0; i < n; ++i) {
      scores[i] = std::floor(rng.uniform() * 64.0) / 64.0;
      truths[i] = rng.uniform() < 0.5 ? Label::kApproved : Label::kUnapproved;
    }
    double serial_value = 0.0, parallel_value = 0.0;
    const double t_serial = seconds([&] { serial_value = auc_pair_count_serial(scores, truths); });
    const double t_parallel = seconds([&] { parallel_value = auc_pair_count(scores, truths); });
    report("auc_pair_count", t_serial, t_parallel,
           serial_value == parallel_value && serial_value == auc(scores, truths));
  }
  return 0;
}
