//
// Project MolVerdict - Copyright 2026 MolVerdict Developers.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace molverdict {

enum class RlErrorKind {
  kEmptyVocabulary,
  kGroupTooSmall,
  kVocabularyMismatch,
  kIncompleteRollout,
  kDivergedLoss,
};

class RlError : public std::runtime_error {
 public:
  RlError(RlErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
  RlErrorKind kind() const { return kind_; }

 private:
  RlErrorKind kind_;
};

// Token inventory of the toy completion language: tag tokens, label tokens,
// score-bucket tokens, filler, end-of-sequence.
struct Vocabulary {
  std::vector<std::string> tokens;
  int think_open = 0, think_close = 0;
  int label_open = 0, label_close = 0;
  int score_open = 0, score_close = 0;
  int approved = 0, unapproved = 0;
  int score_first = 0, score_count = 0;  // "0.0" .. "1.0"
  int eos = 0;

  static const Vocabulary& standard();
  int size() const { return static_cast<int>(tokens.size()); }

  // Tokens joined by spaces, stopping before end-of-sequence.
  std::string render(std::span<const int> sequence) const;
};

// Table-driven stand-in for an instruction-tuned language model. Logits for
// the next token are a linear function of three one-hot inputs:
//   logits[v] = ctx[c][v] + pos[p][v] + prev[t+1][v]
// (t = -1 denotes begin-of-sequence). Differentiable in closed form.
class ToyPolicy {
 public:
  ToyPolicy() = default;
  ToyPolicy(int n_contexts, int max_len, const Vocabulary& vocab = Vocabulary::standard());

  // Policy whose position table carries a weak prior toward the tag
  // template (the stand-in for an instruction-tuned base model that already
  // speaks the output format). Label choice, score choice and the context
  // tables stay uniform; those are what training has to learn.
  static ToyPolicy with_format_prior(int n_contexts, int max_len, double strength = 4.0,
                                     const Vocabulary& vocab = Vocabulary::standard());

  int n_contexts() const { return n_contexts_; }
  int max_len() const { return max_len_; }
  int vocab_size() const { return vocab_.size(); }
  const Vocabulary& vocab() const { return vocab_; }

  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }
  int n_params() const { return static_cast<int>(params_.size()); }

  // Flat parameter indices of the three table rows feeding one decision.
  int ctx_index(int context, int token) const { return context * vocab_.size() + token; }
  int pos_index(int position, int token) const {
    return (n_contexts_ + position) * vocab_.size() + token;
  }
  int prev_index(int prev, int token) const {  // prev in [-1, V)
    return (n_contexts_ + max_len_ + prev + 1) * vocab_.size() + token;
  }

  void logits(int context, int position, int prev, std::vector<double>& out) const;

  // log softmax of the (optionally temperature-scaled) logits
  std::vector<double> log_distribution(int context, int position, int prev,
                                       double temperature = 1.0) const;

 private:
  int n_contexts_ = 0;
  int max_len_ = 0;
  Vocabulary vocab_;
  std::vector<double> params_;
};

}  // namespace molverdict
