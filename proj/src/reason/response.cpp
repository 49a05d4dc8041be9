//
// Project MolVerdict - Copyright 2026 MolVerdict Developers.
// SPDX-License-Identifier: Apache-2.0
//

#include "molverdict/reason/response.hpp"

#include <charconv>
#include <regex>
#include <vector>

#include "json.hpp"
#include "molverdict/util/text.hpp"

namespace molverdict {

namespace {

struct TagScan {
  std::string name;
  std::size_t open_count = 0, close_count = 0;
  std::size_t open_pos = std::string_view::npos, close_pos = std::string_view::npos;
  std::string inner;
  bool extracted = false;
};

TagScan scan_tag(std::string_view text, const std::string& name) {
  TagScan scan;
  scan.name = name;
  const std::string open = "<" + name + ">";
  const std::string close = "</" + name + ">";
  scan.open_count = count_occurrences(text, open);
  scan.close_count = count_occurrences(text, close);
  scan.open_pos = text.find(open);
  scan.close_pos = text.find(close);
  if (scan.open_count == 1 && scan.close_count == 1 && scan.open_pos < scan.close_pos) {
    const std::size_t start = scan.open_pos + open.size();
    scan.inner = std::string(text.substr(start, scan.close_pos - start));
    scan.extracted = true;
  }
  return scan;
}

std::optional<double> parse_score_text(std::string_view raw, bool& parseable) {
  const std::string t = trim(raw);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  parseable = ec == std::errc{} && ptr == t.data() + t.size();
  if (!parseable) return std::nullopt;
  return value;
}

}  // namespace

StrictParse parse_strict(std::string_view text) {
  StrictParse out;
  const TagScan think = scan_tag(text, "think");
  const TagScan label = scan_tag(text, "label");
  const TagScan score = scan_tag(text, "score");

  // best-effort field extraction regardless of final status
  if (think.extracted) out.response.think = think.inner;
  if (label.extracted) {
    out.response.raw_label = trim(label.inner);
    out.response.label = parse_label(label.inner);
  }
  bool score_parseable = false;
  std::optional<double> score_value;
  if (score.extracted) {
    score_value = parse_score_text(score.inner, score_parseable);
    if (score_value && *score_value >= 0.0 && *score_value <= 1.0)
      out.response.score = score_value;
  }

  auto set = [&](ParseStatus status, const std::string& detail) {
    out.status = status;
    out.detail = detail;
  };

  for (const TagScan* scan : {&think, &label, &score}) {
    if (scan->open_count > 1) return set(ParseStatus::kDuplicateTag, scan->name), out;
    if (scan->close_count > 1)
      return set(ParseStatus::kDuplicateTag, scan->name + "-close"), out;
    if (scan->open_count == 0) return set(ParseStatus::kMissingTag, scan->name + "-open"), out;
    if (scan->close_count == 0)
      return set(ParseStatus::kMissingTag, scan->name + "-close"), out;
  }

  // sequential block structure: think, then label, then score
  const std::size_t order[6] = {think.open_pos, think.close_pos, label.open_pos,
                                label.close_pos, score.open_pos, score.close_pos};
  const std::string names[6] = {"think", "think-close", "label",
                                "label-close", "score", "score-close"};
  for (int i = 1; i < 6; ++i)
    if (order[i] <= order[i - 1]) return set(ParseStatus::kMisorderedTag, names[i]), out;

  if (!out.response.label) return set(ParseStatus::kInvalidLabel, out.response.raw_label), out;
  if (!score_parseable) return set(ParseStatus::kUnparseableScore, trim(score.inner)), out;
  if (!out.response.score) return set(ParseStatus::kScoreOutOfRange, trim(score.inner)), out;
  return out;
}

bool match_soft(std::string_view text) {
  static const std::regex pattern(
      "<think>[\\s\\S]*?</think>[\\s\\S]*?"
      "<label>[\\s\\S]*?</label>[\\s\\S]*?"
      "<score>[\\s\\S]*?</score>");
  return std::regex_search(text.begin(), text.end(), pattern);
}

std::string render_response(const StructuredResponse& response) {
  const std::string label =
      response.label ? to_string(*response.label) : response.raw_label;
  std::string score = "";
  if (response.score) score = nlohmann::json(*response.score).dump();
  return "<think>" + response.think + "</think>\n<label>" + label + "</label>\n<score>" +
         score + "</score>";
}

}  // namespace molverdict
