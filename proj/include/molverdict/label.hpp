//
// Project MolVerdict - Copyright 2026 MolVerdict Developers.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "molverdict/util/text.hpp"

namespace molverdict {

// Binary outcome class. "approved" is the positive class everywhere.
enum class Label : std::uint8_t { kApproved = 1, kUnapproved = 0 };

inline std::string to_string(Label l) {
  return l == Label::kApproved ? "approved" : "unapproved";
}

inline std::optional<Label> parse_label(std::string_view text) {
  const std::string t = to_lower(trim_view(text));
  if (t == "approved") return Label::kApproved;
  if (t == "unapproved") return Label::kUnapproved;
  return std::nullopt;
}

inline Label opposite(Label l) {
  return l == Label::kApproved ? Label::kUnapproved : Label::kApproved;
}

}  // namespace molverdict
