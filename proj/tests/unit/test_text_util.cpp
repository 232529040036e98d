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
#include <limits>
#include <random>
#include <string>

#include "oratag/text_util.hpp"

using namespace oratag::text;

TEST_SUITE("text-util") {

TEST_CASE("fold_case lowers ascii latin1 and latin extended a") {
  CHECK(fold_case("LE CHAT") == "le chat");
  CHECK(fold_case("Éléphant") == "éléphant");
  CHECK(fold_case("ÀÇÈÙÔ") == "àçèùô");
  CHECK(fold_case("Œuvre") == "œuvre");
  CHECK(fold_case("Śląsk") == "śląsk");
  CHECK(fold_case("déjà 42 !") == "déjà 42 !");
}

TEST_CASE("fold_case is idempotent on random bytes that form valid utf8") {
  std::mt19937 rng(11);
  const char* pool[] = {"a", "B", "é", "À", "œ", "'", "-", "9", "ß", "Ł", " "};
  for (int it = 0; it < 200; ++it) {
    std::string s;
    const std::size_t len = rng() % 12;
    for (std::size_t i = 0; i < len; ++i) s += pool[rng() % std::size(pool)];
    const std::string once = fold_case(s);
    CHECK(fold_case(once) == once);
  }
}

TEST_CASE("codepoint helpers count and slice by codepoints") {
  CHECK(codepoint_count("") == 0);
  CHECK(codepoint_count("abc") == 3);
  CHECK(codepoint_count("mangé") == 5);
  CHECK(codepoint_count("œuf") == 3);
  CHECK(utf8_prefix("mangé", 3) == "man");
  CHECK(utf8_prefix("éléphant", 2) == "él");
  CHECK(utf8_prefix("ab", 9) == "ab");
  CHECK(utf8_suffix("mangé", 2) == "gé");
  CHECK(utf8_suffix("mangé", 0) == "");
  CHECK(utf8_suffix("ab", 9) == "ab");
}

TEST_CASE("shape classifies and collapses runs") {
  CHECK(shape("Le") == "Xx");
  CHECK(shape("CHAT") == "X");
  CHECK(shape("abc123") == "x9");
  CHECK(shape("L'idée") == "X'x");
  // Three letter runs separated by two hyphens: nothing adjacent repeats.
  CHECK(shape("c'est-à-dire") == "x'x-x-x");
  CHECK(shape("Éé") == "Xx");
  CHECK(shape("") == "");
}

TEST_CASE("letter and digit predicates cover accents") {
  CHECK(is_letter(U'a'));
  CHECK(is_letter(U'é'));
  CHECK(is_letter(U'Œ'));
  CHECK_FALSE(is_letter(U'3'));
  CHECK(is_upper(U'A'));
  CHECK(is_upper(U'É'));
  CHECK_FALSE(is_upper(U'é'));
  CHECK(is_digit(U'0'));
  CHECK_FALSE(is_digit(U'x'));
}

TEST_CASE("trim and splitters") {
  CHECK(trim("  a b \t") == "a b");
  CHECK(trim("") == "");
  CHECK(trim(" \t ") == "");
  const auto parts = split("a|b||c", '|');
  REQUIRE(parts.size() == 4);
  CHECK(parts[0] == "a");
  CHECK(parts[2] == "");
  const auto words = split_ws("  le  chat\tdort ");
  REQUIRE(words.size() == 3);
  CHECK(words[0] == "le");
  CHECK(words[2] == "dort");
  CHECK(split_ws("").empty());
  CHECK(starts_with("parce", "par"));
  CHECK_FALSE(starts_with("pa", "par"));
  CHECK(ends_with("voi/", "/"));
  CHECK_FALSE(ends_with("", "/"));
}

TEST_CASE("format_double round-trips random values exactly") {
  std::mt19937_64 rng(17);
  for (int it = 0; it < 500; ++it) {
    double v;
    if (it % 5 == 0) {
      v = static_cast<double>(static_cast<int>(rng() % 2000)) - 1000.0;
    } else {
      const double m = static_cast<double>(rng()) / static_cast<double>(rng.max());
      const int e = static_cast<int>(rng() % 61) - 30;
      v = (rng() % 2 ? 1.0 : -1.0) * m * std::pow(10.0, e);
    }
    double back = 0.0;
    REQUIRE(parse_double(format_double(v), back));
    CHECK(back == v);
  }
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(0.0) == "0");
}

TEST_CASE("format_double_fixed trims and rounds") {
  CHECK(format_double_fixed(1.23456789, 6) == "1.234568");
  CHECK(format_double_fixed(2.5, 3) == "2.5");
  CHECK(format_double_fixed(3.0, 6) == "3");
  CHECK(format_double_fixed(-0.0000001, 6) == "0");
  CHECK(format_double_fixed(0.65, 3) == "0.65");
  std::mt19937 rng(3);
  for (int it = 0; it < 200; ++it) {
    const double v = 0.001 * static_cast<double>(rng() % 2000000);
    const std::string s = format_double_fixed(v, 6);
    double back = 0.0;
    REQUIRE(parse_double(s, back));
    CHECK(std::fabs(back - v) <= 5e-7);
    const auto dot = s.find('.');
    if (dot != std::string::npos) CHECK(s.size() - dot - 1 <= 6);
  }
}

TEST_CASE("parse_double and parse_int reject junk") {
  double d = 0.0;
  CHECK_FALSE(parse_double("", d));
  CHECK_FALSE(parse_double("12x", d));
  CHECK_FALSE(parse_double("x12", d));
  CHECK(parse_double("-3.5e2", d));
  CHECK(d == -350.0);
  long long i = 0;
  CHECK_FALSE(parse_int("", i));
  CHECK_FALSE(parse_int("4.2", i));
  CHECK(parse_int("-17", i));
  CHECK(i == -17);
}

TEST_CASE("decode_utf8 walks multi-byte sequences") {
  const std::string s = "aéœ";
  std::size_t pos = 0;
  CHECK(decode_utf8(s, pos) == U'a');
  CHECK(decode_utf8(s, pos) == U'é');
  CHECK(decode_utf8(s, pos) == U'œ');
  CHECK(pos == s.size());
  CHECK(fold_codepoint(U'É') == U'é');
  CHECK(fold_codepoint(U'z') == U'z');
  CHECK(fold_codepoint(U'!') == U'!');
}

TEST_CASE("append_utf8 inverts decode_utf8") {
  std::mt19937 rng(5);
  for (int it = 0; it < 300; ++it) {
    std::uint32_t cp = rng() % 0x2000;
    if (cp >= 0xD800 && cp <= 0xDFFF) cp = 0x61;
    std::string s;
    append_utf8(s, cp);
    std::size_t pos = 0;
    CHECK(decode_utf8(s, pos) == cp);
    CHECK(pos == s.size());
  }
}

}  // TEST_SUITE
