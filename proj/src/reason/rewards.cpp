//
// Project MolVerdict - Copyright 2026 MolVerdict Developers.
// SPDX-License-Identifier: Apache-2.0
//

#include "molverdict/reason/rewards.hpp"

#include "json.hpp"
#include "molverdict/util/text.hpp"

namespace molverdict {

QualitativeLog::QualitativeLog(const std::string& path) : out_(path, std::ios::app) {
  if (!out_) throw std::runtime_error("cannot open qualitative log: " + path);
}

void QualitativeLog::append(int step, const std::string& prompt_id,
                            std::string_view completion, const std::string& label,
                            const std::string& truth) {
  nlohmann::json entry = {
      {"step", step},
      {"prompt_id", prompt_id},
      {"completion", std::string(completion)},
      {"label", label},
      {"truth", truth},
  };
  std::lock_guard<std::mutex> lock(mutex_);
  out_ << entry.dump() << "\n";
  out_.flush();
}

double correctness_reward(const StructuredResponse& response, Label truth) {
  return response.label && *response.label == truth ? 2.0 : 0.0;
}

double correctness_reward(const StructuredResponse& response, Label truth,
                          const RewardContext& context, std::string_view completion) {
  if (context.log != nullptr)
    context.log->append(context.step, context.prompt_id, completion,
                        response.label ? to_string(*response.label) : response.raw_label,
                        to_string(truth));
  return correctness_reward(response, truth);
}

double xml_format_reward(std::string_view text) {
  static const char* kTags[6] = {"<think>", "</think>", "<label>",
                                 "</label>", "<score>", "</score>"};
  double reward = 0.0;
  for (const char* tag : kTags)
    if (count_occurrences(text, tag) == 1) reward += 0.125;
  return reward;
}

double soft_format_reward(std::string_view text) {
  return match_soft(text) ? 0.5 : 0.0;
}

double interpretability_reward(const StructuredResponse& response) {
  return response.label ? 0.5 : 0.0;
}

double confidence_alignment_reward(const StructuredResponse& response, Label truth) {
  if (!response.label) return 0.0;
  const bool correct = *response.label == truth;
  // missing/unusable score -> low band
  const double score = response.score.value_or(0.0);
  if (correct) {
    if (score >= 0.7) return 2.0;
    if (score >= 0.4) return 1.0;
    return 0.0;
  }
  if (score >= 0.7) return 0.0;
  if (score >= 0.4) return 0.5;
  return 1.0;
}

RewardBreakdown composite_reward(std::string_view text, Label truth,
                                 const RewardContext& context) {
  const StrictParse parsed = parse_strict(text);
  RewardBreakdown breakdown;
  breakdown.correctness = correctness_reward(parsed.response, truth, context, text);
  breakdown.xml_format = xml_format_reward(text);
  breakdown.soft_format = soft_format_reward(text);
  breakdown.interpretability = interpretability_reward(parsed.response);
  breakdown.confidence_alignment = confidence_alignment_reward(parsed.response, truth);
  breakdown.total = breakdown.correctness + breakdown.xml_format + breakdown.soft_format +
                    breakdown.interpretability + breakdown.confidence_alignment;
  return breakdown;
}

}  // namespace molverdict
