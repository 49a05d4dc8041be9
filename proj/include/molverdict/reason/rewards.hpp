//
// Project MolVerdict - Copyright 2026 MolVerdict Developers.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <fstream>
#include <mutex>
#include <string>
#include <string_view>

#include "molverdict/label.hpp"
#include "molverdict/reason/response.hpp"

namespace molverdict {

// Component values of the five-part reward schedule:
//   correctness            {0, 2}
//   xml_format             {0, 0.125, ..., 0.75}
//   soft_format            {0, 0.5}
//   interpretability       {0, 0.5}
//   confidence_alignment   {0, 0.5, 1, 2}
// Maximum total 5.75.
struct RewardBreakdown {
  double correctness = 0.0;
  double xml_format = 0.0;
  double soft_format = 0.0;
  double interpretability = 0.0;
  double confidence_alignment = 0.0;
  double total = 0.0;
};

inline constexpr double kMaxRewardTotal = 5.75;

// Append-only JSON-lines sink for qualitative inspection of completions.
// Writes are serialized.
class QualitativeLog {
 public:
  explicit QualitativeLog(const std::string& path);
  void append(int step, const std::string& prompt_id, std::string_view completion,
              const std::string& label, const std::string& truth);

 private:
  std::mutex mutex_;
  std::ofstream out_;
};

struct RewardContext {
  QualitativeLog* log = nullptr;
  std::string prompt_id;
  int step = 0;
};

// 2.0 iff the parsed label equals the truth. The logging overload also
// appends (prompt id, completion, label, truth) to the qualitative log.
double correctness_reward(const StructuredResponse& response, Label truth);
double correctness_reward(const StructuredResponse& response, Label truth,
                          const RewardContext& context, std::string_view completion);

// 0.125 per tag among the six that appears exactly once (duplicates earn 0
// for that tag).
double xml_format_reward(std::string_view text);

// 0.5 iff match_soft.
double soft_format_reward(std::string_view text);

// 0.5 iff the label text is semantically valid.
double interpretability_reward(const StructuredResponse& response);

// Label/confidence consistency table. A missing or unusable score falls in
// the low-confidence band; without a valid label there is nothing to align,
// so the reward is 0.
double confidence_alignment_reward(const StructuredResponse& response, Label truth);

// All five objectives on one completion; never throws, malformed text earns
// partial credit only.
RewardBreakdown composite_reward(std::string_view text, Label truth,
                                 const RewardContext& context = {});

}  // namespace molverdict
