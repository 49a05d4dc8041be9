//
// Project MolVerdict - Copyright 2026 MolVerdict Developers.
// SPDX-License-Identifier: Apache-2.0
//

#include "molverdict/rl/toy_policy.hpp"

#include <algorithm>
#include <cmath>

namespace molverdict {

const Vocabulary& Vocabulary::standard() {
  static const Vocabulary vocab = [] {
    Vocabulary v;
    v.tokens = {"<think>", "</think>", "<label>", "</label>", "<score>", "</score>",
                "approved", "unapproved"};
    v.think_open = 0;
    v.think_close = 1;
    v.label_open = 2;
    v.label_close = 3;
    v.score_open = 4;
    v.score_close = 5;
    v.approved = 6;
    v.unapproved = 7;
    v.score_first = static_cast<int>(v.tokens.size());
    for (int i = 0; i <= 10; ++i) {
      v.tokens.push_back(i == 10 ? "1.0" : "0." + std::to_string(i));
    }
    v.score_count = 11;
    v.tokens.push_back("the");
    v.tokens.push_back("profile");
    v.tokens.push_back("resembles");
    v.tokens.push_back("neighbors");
    v.eos = static_cast<int>(v.tokens.size());
    v.tokens.push_back("<eos>");
    return v;
  }();
  return vocab;
}

std::string Vocabulary::render(std::span<const int> sequence) const {
  std::string out;
  for (int token : sequence) {
    if (token == eos) break;
    if (!out.empty()) out += " ";
    out += tokens[token];
  }
  return out;
}

ToyPolicy::ToyPolicy(int n_contexts, int max_len, const Vocabulary& vocab)
    : n_contexts_(n_contexts), max_len_(max_len), vocab_(vocab) {
  if (vocab_.size() == 0)
    throw RlError(RlErrorKind::kEmptyVocabulary, "vocabulary is empty");
  params_.assign(static_cast<std::size_t>(n_contexts_ + max_len_ + vocab_.size() + 1) *
                     vocab_.size(),
                 0.0);
}

ToyPolicy ToyPolicy::with_format_prior(int n_contexts, int max_len, double strength,
                                       const Vocabulary& vocab) {
  ToyPolicy policy(n_contexts, max_len, vocab);
  const Vocabulary& v = policy.vocab_;
  auto bias = [&](int position, std::initializer_list<int> tokens) {
    if (position >= max_len) return;
    for (int token : tokens) policy.params_[policy.pos_index(position, token)] += strength;
  };
  // <think> filler </think> <label> ? </label> <score> ? </score> <eos>
  bias(0, {v.think_open});
  for (int t = v.score_first + v.score_count; t < v.eos; ++t)
    policy.params_[policy.pos_index(1, t)] += strength;  // filler words
  bias(2, {v.think_close});
  bias(3, {v.label_open});
  bias(4, {v.approved, v.unapproved});
  bias(5, {v.label_close});
  bias(6, {v.score_open});
  for (int t = v.score_first; t < v.score_first + v.score_count; ++t)
    policy.params_[policy.pos_index(7, t)] += strength;
  bias(8, {v.score_close});
  bias(9, {v.eos});
  return policy;
}

void ToyPolicy::logits(int context, int position, int prev, std::vector<double>& out) const {
  const int v = vocab_.size();
  out.assign(v, 0.0);
  const double* ctx = params_.data() + ctx_index(context, 0);
  const double* pos = params_.data() + pos_index(position, 0);
  const double* prv = params_.data() + prev_index(prev, 0);
  for (int i = 0; i < v; ++i) out[i] = ctx[i] + pos[i] + prv[i];
}

std::vector<double> ToyPolicy::log_distribution(int context, int position, int prev,
                                                double temperature) const {
  std::vector<double> logit;
  logits(context, position, prev, logit);
  if (temperature != 1.0)
    for (double& x : logit) x /= temperature;
  const double max = *std::max_element(logit.begin(), logit.end());
  double sum = 0.0;
  for (double x : logit) sum += std::exp(x - max);
  const double log_sum = max + std::log(sum);
  for (double& x : logit) x -= log_sum;
  return logit;
}

}  // namespace molverdict
