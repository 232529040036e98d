// Copyright 2026 The Oratag Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <random>
#include <string>
#include <vector>

#include "oratag/annotation.hpp"
#include "oratag/tagset.hpp"
#include "support/synthetic.hpp"

using namespace oratag;
using annot::Document;
using annot::Token;

namespace {

Token word(const char* text, double t_min, double t_max, const char* speaker = "s") {
  Token t;
  t.text = text;
  t.t_min = t_min;
  t.t_max = t_max;
  t.speaker = speaker;
  return t;
}

Token pause(double t_min, double t_max, const char* speaker = "s") {
  Token t = word("_", t_min, t_max, speaker);
  t.is_pause = true;
  return t;
}

// le chat _ dort with a long pause.
Document small_doc() {
  return annot::new_document(
      {word("le", 0.0, 0.2), word("chat", 0.2, 0.6), pause(0.6, 1.3), word("dort", 1.3, 1.7)});
}

}  // namespace

TEST_SUITE("annotation") {

TEST_CASE("new_document builds congruent singleton tiers") {
  const Document doc = small_doc();
  CHECK(doc.size() == 4);
  CHECK(doc.pos_min.size() == 4);
  CHECK(doc.disfluency.size() == 4);
  REQUIRE(doc.tok_mwu.size() == 4);
  CHECK(doc.pos_mwu.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(doc.tok_mwu[i].begin == i);
    CHECK(doc.tok_mwu[i].end == i + 1);
    CHECK(doc.tok_mwu[i].value == doc.tokens[i].text);
  }
  CHECK(annot::validate(doc).empty());
}

TEST_CASE("new_document rejects same-speaker overlap but not cross-speaker") {
  CHECK_THROWS_AS(annot::new_document({word("a", 0.0, 0.5), word("b", 0.4, 0.8)}),
                  annot::OverlapError);
  CHECK_THROWS_AS(annot::new_document({word("a", 0.3, 0.2)}), annot::OverlapError);
  const Document two = annot::new_document(
      {word("a", 0.0, 0.5, "s1"), word("b", 0.4, 0.8, "s2"), word("c", 0.5, 0.9, "s1")});
  CHECK(two.size() == 3);
  CHECK(annot::validate(two).empty());
}

TEST_CASE("token duration and pause classes") {
  const Token t = word("x", 1.25, 1.5);
  CHECK(t.duration() == doctest::Approx(0.25));
  CHECK(annot::PauseClass::None != annot::PauseClass::Short);
}

TEST_CASE("group_mwu merges spans and fills both mwu tiers") {
  Document doc = small_doc();
  doc.pos_min = {"DET:def", "NOM:com", "_", "VER:pres"};
  annot::group_mwu(doc, 0, 2, tagset::parse_pos_tag("NOM:com"));
  REQUIRE(doc.tok_mwu.size() == 3);
  CHECK(doc.tok_mwu[0].begin == 0);
  CHECK(doc.tok_mwu[0].end == 2);
  CHECK(doc.tok_mwu[0].value == "le chat");
  CHECK(doc.pos_mwu[0] == "NOM:com");
  CHECK(doc.tok_mwu[1].begin == 2);
  CHECK(doc.mwu_index_of(0) == 0);
  CHECK(doc.mwu_index_of(1) == 0);
  CHECK(doc.mwu_index_of(2) == 1);
  CHECK(doc.mwu_index_of(3) == 2);
  CHECK(annot::validate(doc).empty());
}

TEST_CASE("group_mwu rejects spans that cut existing groups") {
  Document doc = small_doc();
  annot::group_mwu(doc, 0, 2, tagset::parse_pos_tag("NOM:com"));
  CHECK_THROWS_AS(annot::group_mwu(doc, 1, 3, tagset::parse_pos_tag("NOM:com")),
                  annot::MisalignedSpan);
  CHECK_THROWS_AS(annot::group_mwu(doc, 2, 2, tagset::parse_pos_tag("NOM:com")),
                  annot::MisalignedSpan);
  CHECK_THROWS_AS(annot::group_mwu(doc, 2, 9, tagset::parse_pos_tag("NOM:com")),
                  annot::MisalignedSpan);
}

TEST_CASE("validate reports each congruence rule") {
  SUBCASE("tier length mismatch") {
    Document doc = small_doc();
    doc.pos_min.pop_back();
    const auto v = annot::validate(doc);
    REQUIRE(!v.empty());
    CHECK(v[0].tier == "pos-min");
    CHECK(v[0].rule == "CongruenceViolation");
  }
  SUBCASE("span partition broken") {
    Document doc = small_doc();
    doc.tok_mwu[1].begin = 2;
    bool hit = false;
    for (const auto& v : annot::validate(doc)) hit |= v.rule == "PartitionViolation";
    CHECK(hit);
  }
  SUBCASE("discourse spans must be ordered and disjoint") {
    Document doc = small_doc();
    doc.discourse.push_back({0, 2, "DM"});
    doc.discourse.push_back({1, 3, "DM"});
    bool hit = false;
    for (const auto& v : annot::validate(doc)) hit |= v.rule == "SpanViolation";
    CHECK(hit);
  }
  SUBCASE("time order and overlap") {
    Document doc = small_doc();
    doc.tokens[1].t_max = 0.1;  // before its own t_min
    bool order = false;
    for (const auto& v : annot::validate(doc)) order |= v.rule == "TimeOrderViolation";
    CHECK(order);
    Document doc2 = small_doc();
    doc2.tokens[1].t_min = 0.1;  // overlaps token 0
    bool overlap = false;
    for (const auto& v : annot::validate(doc2)) overlap |= v.rule == "OverlapViolation";
    CHECK(overlap);
  }
  SUBCASE("pause tokens must use the pause symbol") {
    Document doc = small_doc();
    doc.tokens[2].text = "<sil>";
    bool hit = false;
    for (const auto& v : annot::validate(doc)) hit |= v.rule == "PauseSymbolViolation";
    CHECK(hit);
  }
}

TEST_CASE("psu_segments split on long pauses and trim pause edges") {
  // w w _long w _short w _long
  const Document doc = annot::new_document({
      word("a", 0.0, 0.2),
      word("b", 0.2, 0.4),
      pause(0.4, 1.0),
      word("c", 1.0, 1.2),
      pause(1.2, 1.35),
      word("d", 1.35, 1.5),
      pause(1.5, 2.4),
  });
  const auto units = annot::psu_segments(doc, 500);
  REQUIRE(units.size() == 2);
  CHECK(units[0].first == 0);
  CHECK(units[0].second == 2);
  CHECK(units[1].first == 3);
  CHECK(units[1].second == 6);  // short pause stays inside the unit
}

TEST_CASE("psu_segments treats a pause exactly at threshold as a boundary") {
  const Document doc = annot::new_document(
      {word("a", 0.0, 0.2), pause(0.2, 0.7), word("b", 0.7, 0.9)});
  CHECK(annot::psu_segments(doc, 500).size() == 2);
  CHECK(annot::psu_segments(doc, 501).size() == 1);
}

TEST_CASE("psu_segments never place a pause inside unit bounds at the edges") {
  std::mt19937 rng(23);
  for (int it = 0; it < 100; ++it) {
    const Document doc = test::random_token_document(rng);
    for (const auto& [b, e] : annot::psu_segments(doc, 500)) {
      REQUIRE(b < e);
      CHECK_FALSE(doc.tokens[b].is_pause);
      CHECK_FALSE(doc.tokens[e - 1].is_pause);
    }
  }
}

TEST_CASE("every non-pause token falls in exactly one psu") {
  std::mt19937 rng(29);
  for (int it = 0; it < 100; ++it) {
    const Document doc = test::random_token_document(rng);
    const auto units = annot::psu_segments(doc, 500);
    std::vector<int> owner(doc.size(), 0);
    for (const auto& [b, e] : units) {
      for (std::size_t i = b; i < e; ++i) ++owner[i];
    }
    for (std::size_t i = 0; i < doc.size(); ++i) {
      if (doc.tokens[i].is_pause) {
        CHECK(owner[i] <= 1);  // interior short pauses belong to the unit
      } else {
        CHECK(owner[i] == 1);
      }
    }
  }
}

TEST_CASE("document equality covers tiers and metadata") {
  Document a = small_doc();
  Document b = small_doc();
  CHECK(a == b);
  b.meta.sample_id = "x";
  CHECK_FALSE(a == b);
  b = small_doc();
  b.pos_min[0] = "DET:def";
  CHECK_FALSE(a == b);
}

}  // TEST_SUITE
