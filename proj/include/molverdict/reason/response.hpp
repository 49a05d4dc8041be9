//
// Project MolVerdict - Copyright 2026 MolVerdict Developers.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "molverdict/label.hpp"

namespace molverdict {

// Parsed <think>/<label>/<score> completion. Fields are filled best-effort
// even when strict parsing fails, so reward computation can give partial
// credit.
struct StructuredResponse {
  std::string think;
  std::optional<Label> label;  // set only when the label text is valid
  std::string raw_label;       // label tag text as written (trimmed)
  std::optional<double> score; // set only when parseable and in [0,1]
};

enum class ParseStatus {
  kOk,
  kMissingTag,
  kDuplicateTag,
  kMisorderedTag,
  kUnparseableScore,
  kScoreOutOfRange,
  kInvalidLabel,
};

struct StrictParse {
  ParseStatus status = ParseStatus::kOk;
  std::string detail;  // offending tag, e.g. "score-close"
  StructuredResponse response;

  bool ok() const { return status == ParseStatus::kOk; }
};

// Strict parse: each tag pair exactly once, properly opened and closed, in
// think -> label -> score order; label normalized case-insensitively; score
// a decimal in [0,1]. InvalidLabel still carries think/score.
StrictParse parse_strict(std::string_view text);

// Soft format check: the three tag pairs occur in order with arbitrary
// surrounding or interleaved extra text. Total function, never throws.
bool match_soft(std::string_view text);

// Tag-text rendering; parse_strict(render_response(r)) round-trips valid
// responses.
std::string render_response(const StructuredResponse& response);

}  // namespace molverdict
