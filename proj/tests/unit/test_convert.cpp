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

#include <string>
#include <vector>

#include "oratag/annotation.hpp"
#include "oratag/convert.hpp"
#include "oratag/textgrid.hpp"
#include "support/synthetic.hpp"

using namespace oratag;
using io::document_to_textgrid;
using io::textgrid_to_document;

namespace {

const io::IntervalTier* tier_named(const io::TextGrid& grid, std::string_view name) {
  for (const auto& t : grid.tiers) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

}  // namespace

TEST_SUITE("convert") {

TEST_CASE("a document maps to six contiguous annotation tiers") {
  const annot::Document doc = test::make_corpus(5, 400).docs[0];
  const io::TextGrid grid = document_to_textgrid(doc);
  REQUIRE(grid.tiers.size() == 6);
  for (const char* name :
       {"tok-min", "pos-min", "disfluency", "tok-mwu", "pos-mwu", "discourse"}) {
    const io::IntervalTier* tier = tier_named(grid, name);
    REQUIRE_MESSAGE(tier != nullptr, name);
    double at = grid.xmin;
    for (const auto& iv : tier->intervals) {
      CHECK(iv.xmin == at);
      at = iv.xmax;
    }
    CHECK(at == grid.xmax);
  }
  // The grid serializes without invariant complaints.
  CHECK_FALSE(io::write_textgrid(grid).empty());
}

TEST_CASE("grid round trip keeps every annotation tier of a gold document") {
  const auto corpus = test::make_corpus(67, 900);
  for (const annot::Document& gold : corpus.docs) {
    const annot::Document back = textgrid_to_document(document_to_textgrid(gold));
    REQUIRE(back.size() == gold.size());
    for (std::size_t i = 0; i < gold.size(); ++i) {
      CHECK(back.tokens[i].text == gold.tokens[i].text);
      CHECK(back.tokens[i].t_min == doctest::Approx(gold.tokens[i].t_min).epsilon(1e-9));
      CHECK(back.tokens[i].t_max == doctest::Approx(gold.tokens[i].t_max).epsilon(1e-9));
      CHECK(back.tokens[i].is_pause == gold.tokens[i].is_pause);
      CHECK(back.pos_min[i] == gold.pos_min[i]);
      CHECK(back.disfluency[i] == gold.disfluency[i]);
    }
    REQUIRE(back.tok_mwu.size() == gold.tok_mwu.size());
    for (std::size_t s = 0; s < gold.tok_mwu.size(); ++s) {
      CHECK(back.tok_mwu[s].begin == gold.tok_mwu[s].begin);
      CHECK(back.tok_mwu[s].end == gold.tok_mwu[s].end);
      CHECK(back.tok_mwu[s].value == gold.tok_mwu[s].value);
      CHECK(back.pos_mwu[s] == gold.pos_mwu[s]);
    }
    REQUIRE(back.discourse.size() == gold.discourse.size());
    for (std::size_t s = 0; s < gold.discourse.size(); ++s) {
      CHECK(back.discourse[s].begin == gold.discourse[s].begin);
      CHECK(back.discourse[s].end == gold.discourse[s].end);
      CHECK(back.discourse[s].value == gold.discourse[s].value);
    }
    CHECK(annot::validate(back).empty());
  }
}

TEST_CASE("speakers come from the named tier by midpoint containment") {
  io::TextGrid grid;
  grid.xmax = 1.0;
  io::IntervalTier toks;
  toks.name = "tok-min";
  toks.xmax = 1.0;
  toks.intervals = {{0.0, 0.4, "le"}, {0.4, 0.6, "chat"}, {0.6, 1.0, "dort"}};
  io::IntervalTier spk;
  spk.name = "who";
  spk.xmax = 1.0;
  spk.intervals = {{0.0, 0.5, "alice"}, {0.5, 1.0, "bruno"}};
  grid.tiers = {toks, spk};
  const annot::Document doc = textgrid_to_document(grid, "tok-min", "who");
  REQUIRE(doc.size() == 3);
  CHECK(doc.tokens[0].speaker == "alice");
  // The midpoint of [0.4, 0.6] sits on the 0.5 boundary, which belongs to
  // the interval that starts there.
  CHECK(doc.tokens[1].speaker == "bruno");
  CHECK(doc.tokens[2].speaker == "bruno");
}

TEST_CASE("empty intervals become gaps not tokens and the pause symbol marks pauses") {
  io::TextGrid grid;
  grid.xmax = 1.0;
  io::IntervalTier toks;
  toks.name = "words";
  toks.xmax = 1.0;
  toks.intervals = {{0.0, 0.3, "le"}, {0.3, 0.5, ""}, {0.5, 0.7, "_"}, {0.7, 1.0, "chat"}};
  grid.tiers = {toks};
  const annot::Document doc = textgrid_to_document(grid, "words");
  REQUIRE(doc.size() == 3);
  CHECK(doc.tokens[0].text == "le");
  CHECK(doc.tokens[1].is_pause);
  CHECK_FALSE(doc.tokens[2].is_pause);
}

TEST_CASE("missing token tier is an invariant error") {
  io::TextGrid grid;
  grid.xmax = 1.0;
  CHECK_THROWS_AS(textgrid_to_document(grid, "tok-min"), io::InvariantError);
}

TEST_CASE("overlapping tokens cannot be laid out as a grid") {
  annot::Token a, b;
  a.text = "a";
  a.t_min = 0.0;
  a.t_max = 0.6;
  a.speaker = "s1";
  b.text = "b";
  b.t_min = 0.4;
  b.t_max = 1.0;
  b.speaker = "s2";
  const annot::Document doc = annot::new_document({a, b});
  CHECK_THROWS_AS(document_to_textgrid(doc), io::InvariantError);
}

TEST_CASE("span intervals group by midpoint and conflicting groups are dropped") {
  io::TextGrid grid;
  grid.xmax = 1.0;
  io::IntervalTier toks;
  toks.name = "tok-min";
  toks.xmax = 1.0;
  toks.intervals = {{0.0, 0.25, "a"}, {0.25, 0.5, "b"}, {0.5, 0.75, "c"}, {0.75, 1.0, "d"}};
  io::IntervalTier mwu;
  mwu.name = "tok-mwu";
  mwu.xmax = 1.0;

  SUBCASE("an interval ending mid-token still groups the midpoint-covered tokens") {
    // Ends at 0.4, inside token b, whose midpoint 0.375 it covers.
    mwu.intervals = {{0.0, 0.4, "a b"}, {0.4, 1.0, ""}};
    grid.tiers = {toks, mwu};
    const annot::Document doc = textgrid_to_document(grid);
    REQUIRE(doc.tok_mwu.size() == 3);
    CHECK(doc.tok_mwu[0].begin == 0);
    CHECK(doc.tok_mwu[0].end == 2);
    CHECK(annot::validate(doc).empty());
  }
  SUBCASE("an interval straddling an existing group is dropped") {
    // The first interval takes a, b, c; the second covers c and d but cuts
    // across that group, so it cannot be applied.
    mwu.intervals = {{0.0, 0.7, "g1"}, {0.6, 1.0, "g2"}};
    grid.tiers = {toks, mwu};
    const annot::Document doc = textgrid_to_document(grid);
    REQUIRE(doc.tok_mwu.size() == 2);
    CHECK(doc.tok_mwu[0].begin == 0);
    CHECK(doc.tok_mwu[0].end == 3);
    CHECK(doc.tok_mwu[1].size() == 1);
    CHECK(annot::validate(doc).empty());
  }
}

}  // TEST_SUITE
