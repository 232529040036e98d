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

#ifndef ORATAG_TEXT_UTIL_HPP_
#define ORATAG_TEXT_UTIL_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

// Small UTF-8 string helpers shared across the library. Case folding covers
// ASCII plus the Latin-1 and Latin Extended-A ranges, which is all that
// French orthography needs.

namespace oratag::text {

// Decodes one UTF-8 code point starting at `pos`; advances `pos` past it.
// Invalid bytes decode as U+FFFD and advance by one byte.
std::uint32_t decode_utf8(std::string_view s, std::size_t& pos);

void append_utf8(std::string& out, std::uint32_t cp);

std::uint32_t fold_codepoint(std::uint32_t cp);

// Lowercases ASCII / Latin-1 / Latin Extended-A letters, leaves the rest.
std::string fold_case(std::string_view s);

std::size_t codepoint_count(std::string_view s);

// First / last `n` code points (whole string when shorter).
std::string utf8_prefix(std::string_view s, std::size_t n);
std::string utf8_suffix(std::string_view s, std::size_t n);

bool is_letter(std::uint32_t cp);
bool is_upper(std::uint32_t cp);
bool is_digit(std::uint32_t cp);

// Character-class sketch of a token ("Le" -> "Xx", "12h" -> "9x"),
// consecutive duplicates collapsed.
std::string shape(std::string_view s);

std::string_view trim(std::string_view s);
std::vector<std::string_view> split(std::string_view s, char sep);
std::vector<std::string_view> split_ws(std::string_view s);

bool starts_with(std::string_view s, std::string_view prefix);
bool ends_with(std::string_view s, std::string_view suffix);

// Shortest decimal form that parses back to exactly the same double.
std::string format_double(double v);

// Fixed-point with at most `max_frac` fractional digits, trailing zeros
// trimmed ("0.5", "1", "0.123457").
std::string format_double_fixed(double v, int max_frac);

// Strict double parse over the whole string; returns false on junk.
bool parse_double(std::string_view s, double& out);
bool parse_int(std::string_view s, long long& out);

}  // namespace oratag::text

#endif  // ORATAG_TEXT_UTIL_HPP_
