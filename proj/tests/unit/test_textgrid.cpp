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

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "oratag/textgrid.hpp"

using namespace oratag::io;

namespace {

const char* kMinimal = R"(File type = "ooTextFile"
Object class = "TextGrid"

xmin = 0
xmax = 2.5
tiers? <exists>
size = 1
item []:
    item [1]:
        class = "IntervalTier"
        name = "tok-min"
        xmin = 0
        xmax = 2.5
        intervals: size = 2
        intervals [1]:
            xmin = 0
            xmax = 1
            text = "le ""chat"""
        intervals [2]:
            xmin = 1
            xmax = 2.5
            text = ""
)";

std::string utf16_bytes(std::string_view ascii, bool big_endian) {
  std::string out;
  out += big_endian ? "\xFE\xFF" : "\xFF\xFE";
  for (const char c : ascii) {
    if (big_endian) {
      out += '\0';
      out += c;
    } else {
      out += c;
      out += '\0';
    }
  }
  return out;
}

TextGrid random_grid(std::mt19937& rng) {
  TextGrid grid;
  grid.xmin = 0.0;
  grid.xmax = 0.0;
  const std::size_t tiers = 1 + rng() % 3;
  const char* texts[] = {"",      "le",       "l'idée",   "a \"x\" b", "deux mots",
                         "mangé", "st-oingt", "ligne\nsuite", " pad ",     "_"};
  for (std::size_t t = 0; t < tiers; ++t) {
    IntervalTier tier;
    tier.name = "tier-" + std::to_string(t);
    tier.xmin = 0.0;
    double at = 0.0;
    const std::size_t n = 1 + rng() % 8;
    for (std::size_t i = 0; i < n; ++i) {
      Interval iv;
      iv.xmin = at;
      at += 0.01 + 0.0001 * static_cast<double>(rng() % 40000);
      iv.xmax = at;
      iv.text = texts[rng() % std::size(texts)];
      tier.intervals.push_back(iv);
    }
    tier.xmax = at;
    grid.xmax = std::max(grid.xmax, at);
    grid.tiers.push_back(std::move(tier));
  }
  for (auto& tier : grid.tiers) {
    // All tiers of one grid share the document range.
    if (tier.intervals.back().xmax < grid.xmax) {
      Interval pad;
      pad.xmin = tier.intervals.back().xmax;
      pad.xmax = grid.xmax;
      tier.intervals.push_back(pad);
    }
    tier.xmax = grid.xmax;
  }
  return grid;
}

}  // namespace

TEST_SUITE("textgrid") {

TEST_CASE("parses the long format with escaped quotes") {
  const TextGrid grid = read_textgrid(kMinimal);
  CHECK(grid.xmin == 0.0);
  CHECK(grid.xmax == 2.5);
  REQUIRE(grid.tiers.size() == 1);
  const IntervalTier& tier = grid.tiers[0];
  CHECK(tier.name == "tok-min");
  REQUIRE(tier.intervals.size() == 2);
  CHECK(tier.intervals[0].text == "le \"chat\"");
  CHECK(tier.intervals[1].text == "");
  CHECK(tier.intervals[1].xmax == 2.5);
  CHECK(grid.warnings.empty());
}

TEST_CASE("utf8 bom and utf16 both orders decode to the same grid") {
  const TextGrid plain = read_textgrid(kMinimal);
  const TextGrid bom = read_textgrid("\xEF\xBB\xBF" + std::string(kMinimal));
  CHECK(bom.tiers == plain.tiers);
  const TextGrid be = read_textgrid(utf16_bytes(kMinimal, true));
  const TextGrid le = read_textgrid(utf16_bytes(kMinimal, false));
  CHECK(be.tiers == plain.tiers);
  CHECK(le.tiers == plain.tiers);
}

TEST_CASE("utf16 with an odd byte count is an encoding error") {
  std::string bytes = utf16_bytes("File", true);
  bytes.pop_back();
  CHECK_THROWS_AS(read_textgrid(bytes), EncodingError);
}

TEST_CASE("utf16 without a bom fails as a structured parse error") {
  std::string bytes = utf16_bytes(kMinimal, false).substr(2);
  CHECK_THROWS_AS(read_textgrid(bytes), ParseError);
}

TEST_CASE("short format is rejected with a line number") {
  const std::string short_fmt =
      "File type = \"ooTextFile\"\nObject class = \"TextGrid\"\n\n0\n2.5\n<exists>\n1\n";
  try {
    read_textgrid(short_fmt);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line_number > 0);
    CHECK(std::string(e.what()).find("short") != std::string::npos);
  }
}

TEST_CASE("point tiers are skipped with a warning") {
  const char* with_points = R"(File type = "ooTextFile"
Object class = "TextGrid"

xmin = 0
xmax = 1
tiers? <exists>
size = 2
item []:
    item [1]:
        class = "TextTier"
        name = "clicks"
        xmin = 0
        xmax = 1
        points: size = 1
        points [1]:
            number = 0.5
            mark = "x"
    item [2]:
        class = "IntervalTier"
        name = "words"
        xmin = 0
        xmax = 1
        intervals: size = 1
        intervals [1]:
            xmin = 0
            xmax = 1
            text = "ok"
)";
  const TextGrid grid = read_textgrid(with_points);
  REQUIRE(grid.tiers.size() == 1);
  CHECK(grid.tiers[0].name == "words");
  REQUIRE(grid.warnings.size() == 1);
  CHECK(grid.warnings[0].find("clicks") != std::string::npos);
}

TEST_CASE("unknown tier class is a parse error") {
  std::string text = kMinimal;
  const auto at = text.find("IntervalTier");
  text.replace(at, 12, "MysteryTier1");
  CHECK_THROWS_AS(read_textgrid(text), ParseError);
}

TEST_CASE("truncation and corruption give parse errors with line context") {
  const std::string full = kMinimal;
  for (const std::size_t cut : {10UL, 60UL, 150UL, 300UL, full.size() - 5}) {
    try {
      read_textgrid(full.substr(0, cut));
      // Some prefixes still parse if they stop after delivery of all tiers.
    } catch (const ParseError& e) {
      CHECK(e.line_number >= 1);
    }
  }
  CHECK_THROWS_AS(read_textgrid("File type = \"mp3\"\n"), ParseError);
  CHECK_THROWS_AS(read_textgrid(""), ParseError);
}

TEST_CASE("write then read preserves times to 1e-6 and texts exactly") {
  std::mt19937 rng(41);
  for (int it = 0; it < 60; ++it) {
    const TextGrid grid = random_grid(rng);
    const std::string bytes = write_textgrid(grid);
    const TextGrid back = read_textgrid(bytes);
    REQUIRE(back.tiers.size() == grid.tiers.size());
    CHECK(std::fabs(back.xmin - grid.xmin) <= 1e-6);
    CHECK(std::fabs(back.xmax - grid.xmax) <= 1e-6);
    for (std::size_t t = 0; t < grid.tiers.size(); ++t) {
      const auto& a = grid.tiers[t];
      const auto& b = back.tiers[t];
      CHECK(a.name == b.name);
      REQUIRE(a.intervals.size() == b.intervals.size());
      for (std::size_t i = 0; i < a.intervals.size(); ++i) {
        CHECK(std::fabs(a.intervals[i].xmin - b.intervals[i].xmin) <= 1e-6);
        CHECK(std::fabs(a.intervals[i].xmax - b.intervals[i].xmax) <= 1e-6);
        CHECK(a.intervals[i].text == b.intervals[i].text);
      }
    }
  }
}

TEST_CASE("writer limits times to six fractional digits") {
  TextGrid grid;
  grid.xmax = 1.23456789;
  IntervalTier tier;
  tier.name = "t";
  tier.xmax = grid.xmax;
  tier.intervals.push_back({0.0, 1.23456789, "x"});
  grid.tiers.push_back(tier);
  const std::string bytes = write_textgrid(grid);
  CHECK(bytes.find("1.234568") != std::string::npos);
  CHECK(bytes.find("1.2345678") == std::string::npos);
}

TEST_CASE("writer rejects non-contiguous tiers and make_contiguous repairs them") {
  TextGrid grid;
  grid.xmax = 2.0;
  IntervalTier tier;
  tier.name = "t";
  tier.xmax = 2.0;
  tier.intervals.push_back({0.0, 0.5, "a"});
  tier.intervals.push_back({0.9, 1.4, "b"});  // gap before, gap after
  grid.tiers.push_back(tier);
  CHECK_THROWS_AS(write_textgrid(grid), InvariantError);

  grid.tiers[0] = make_contiguous(grid.tiers[0], 0.0, 2.0);
  const auto& fixed = grid.tiers[0].intervals;
  REQUIRE(fixed.size() == 4);
  CHECK(fixed[1].text == "");
  CHECK(fixed[1].xmin == 0.5);
  CHECK(fixed[1].xmax == 0.9);
  CHECK(fixed[3].xmax == 2.0);
  const TextGrid back = read_textgrid(write_textgrid(grid));
  CHECK(back.tiers[0].intervals.size() == 4);
}

TEST_CASE("writer rejects overlapping intervals") {
  TextGrid grid;
  grid.xmax = 1.0;
  IntervalTier tier;
  tier.name = "t";
  tier.xmax = 1.0;
  tier.intervals.push_back({0.0, 0.6, "a"});
  tier.intervals.push_back({0.5, 1.0, "b"});
  grid.tiers.push_back(tier);
  CHECK_THROWS_AS(write_textgrid(grid), InvariantError);
}

}  // TEST_SUITE
