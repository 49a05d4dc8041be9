//
// Project MolVerdict - Copyright 2026 MolVerdict Developers.
// SPDX-License-Identifier: Apache-2.0
//

#include "doctest.h"

#include "molverdict/reason/response.hpp"
#include "molverdict/util/rng.hpp"

using namespace molverdict;

TEST_CASE("strict parse of a well-formed response") {
  const StrictParse p =
      parse_strict("<think>x</think><label>approved</label><score>0.9</score>");
  REQUIRE(p.ok());
  CHECK(p.response.think == "x");
  REQUIRE(p.response.label.has_value());
  CHECK(*p.response.label == Label::kApproved);
  REQUIRE(p.response.score.has_value());
  CHECK(*p.response.score == doctest::Approx(0.9));
}

TEST_CASE("label text is normalized case-insensitively") {
  const StrictParse p =
      parse_strict("<think>x</think><label> Approved </label><score>1</score>");
  REQUIRE(p.ok());
  CHECK(*p.response.label == Label::kApproved);
  CHECK(*p.response.score == 1.0);
}

TEST_CASE("strict parse errors") {
  SUBCASE("missing close tag") {
    const StrictParse p = parse_strict("<think>x</think><label>approved</label><score>0.9");
    CHECK(p.status == ParseStatus::kMissingTag);
    CHECK(p.detail == "score-close");
  }
  SUBCASE("duplicate label") {
    const StrictParse p = parse_strict(
        "<think>x</think><label>approved</label><label>approved</label><score>0.9</score>");
    CHECK(p.status == ParseStatus::kDuplicateTag);
    CHECK(p.detail == "label");
  }
  SUBCASE("misordered tags") {
    const StrictParse p =
        parse_strict("<label>approved</label><think>x</think><score>0.9</score>");
    CHECK(p.status == ParseStatus::kMisorderedTag);
  }
  SUBCASE("invalid label still returns think and score") {
    const StrictParse p =
        parse_strict("<think>reasoning</think><label>maybe</label><score>0.4</score>");
    CHECK(p.status == ParseStatus::kInvalidLabel);
    CHECK(p.response.think == "reasoning");
    CHECK(p.response.raw_label == "maybe");
    CHECK_FALSE(p.response.label.has_value());
    REQUIRE(p.response.score.has_value());
    CHECK(*p.response.score == doctest::Approx(0.4));
  }
  SUBCASE("unparseable score") {
    const StrictParse p =
        parse_strict("<think>x</think><label>approved</label><score>high</score>");
    CHECK(p.status == ParseStatus::kUnparseableScore);
    CHECK_FALSE(p.response.score.has_value());
  }
  SUBCASE("score out of range") {
    const StrictParse p =
        parse_strict("<think>x</think><label>approved</label><score>1.5</score>");
    CHECK(p.status == ParseStatus::kScoreOutOfRange);
    CHECK_FALSE(p.response.score.has_value());
  }
  SUBCASE("empty input") {
    CHECK(parse_strict("").status == ParseStatus::kMissingTag);
  }
}

TEST_CASE("soft format matching") {
  CHECK(match_soft("<think>x</think><label>approved</label><score>0.9</score>"));
  CHECK(match_soft("BANNER\n<think>x</think>noise<label>approved</label>\n"
                   "<score>0.9</score>\ntrailing\n"));
  CHECK_FALSE(match_soft("<label>approved</label><think>x</think><score>0.9</score>"));
  CHECK_FALSE(match_soft("<think>x</think><score>0.9</score>"));
  CHECK_FALSE(match_soft(""));
  // duplicated blocks still contain an in-order occurrence
  CHECK(match_soft("<think>a</think><think>b</think><label>x</label><score>1</score>"));
}

TEST_CASE("strict success implies soft match") {
  Rng rng(314);
  const std::vector<std::string> pieces = {
      "<think>",  "</think>", "<label>",     "</label>",   "<score>", "</score>",
      "approved", "0.5",      "unapproved",  "filler",     " ",       "\n",
      "<think>t</think>", "<label>approved</label>", "<score>0.25</score>"};
  for (int trial = 0; trial < 3000; ++trial) {
    std::string text;
    const int n = 1 + static_cast<int>(rng.uniform_int(8));
    for (int i = 0; i < n; ++i) text += pieces[rng.uniform_int(pieces.size())];
    if (parse_strict(text).ok()) CHECK(match_soft(text));
  }
}

TEST_CASE("render/parse round trip") {
  StructuredResponse r;
  r.think = "compares well to the approved group";
  r.label = Label::kUnapproved;
  r.raw_label = "unapproved";
  r.score = 0.35;
  const StrictParse p = parse_strict(render_response(r));
  REQUIRE(p.ok());
  CHECK(p.response.think == r.think);
  CHECK(*p.response.label == *r.label);
  CHECK(*p.response.score == *r.score);
}
