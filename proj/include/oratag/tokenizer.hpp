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

#ifndef ORATAG_TOKENIZER_HPP_
#define ORATAG_TOKENIZER_HPP_

#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "oratag/annotation.hpp"

namespace oratag::tok {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RuleError : public std::runtime_error {
 public:
  RuleError(const std::string& what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_number(line) {}
  std::size_t line_number;
};

// One orthographic rewrite rule. A pattern ending in '*' is a prefix rule;
// the single "*" part stands for whatever follows the prefix. Patterns match
// case-insensitively and splits preserve the original casing.
struct SplitRule {
  std::string pattern;
  std::vector<std::string> parts;
};

enum class PauseClassMode { Threshold, Distribution };

struct TokenizerConfig {
  std::set<std::string> filled_pause_forms = {"euh", "hum"};
  std::string false_start_marker = "/";
  std::string intra_word_pause_marker = "=";
  std::set<std::string> ignore_strings;
  std::string pause_symbol = "_";
  std::vector<SplitRule> rules;
  int short_pause_max_ms = 250;
  int psu_threshold_ms = 500;
  PauseClassMode pause_class_mode = PauseClassMode::Threshold;
};

// Throws ConfigError when markers are empty or collide with each other or
// with the pause symbol.
void validate_config(const TokenizerConfig& cfg);

// A transcription interval, possibly holding several words.
struct TimedText {
  double t_min = 0.0;
  double t_max = 0.0;
  std::string text;
};

// Splits interval text on whitespace and then by the rule table. Within an
// interval, token times are interpolated proportionally to character counts.
// Gaps between intervals, empty intervals, and chunks equal to the pause
// symbol become pause tokens; adjacent pauses merge. Strings listed in
// ignore_strings are dropped. False-start and intra-word-pause markers are
// stripped and recorded as token flags. Never throws; call validate_config
// on untrusted configs first.
std::vector<annot::Token> tokenize(const std::vector<TimedText>& intervals,
                                   const TokenizerConfig& cfg, std::string_view speaker = "");

// Assigns Short/Long to every pause token. Threshold mode: long when the
// duration exceeds short_pause_max_ms. Distribution mode: long when the
// duration exceeds median + 1.5 * IQR of all pause durations in `tokens`,
// with quartiles computed on the halves excluding the median (Moore-McCabe).
void classify_pauses(std::vector<annot::Token>& tokens, const TokenizerConfig& cfg);

// Parses `key = value` lines ('#' comments, blank lines ignored). Keys match
// the TokenizerConfig field names in camelCase, e.g. `falseStartMarker = /`,
// `filledPauseForms = euh, hum`, `pauseClassMode = distribution`. Unknown
// keys or unparseable values raise ConfigError. The result is validated.
TokenizerConfig parse_tokenizer_config(std::string_view text);

// Parses `PATTERN<TAB>part1 part2 ...` lines and returns the table sorted
// longest pattern first. The parts must concatenate back to the pattern;
// anything else raises RuleError with the offending line number.
std::vector<SplitRule> parse_rules(std::string_view text);

}  // namespace oratag::tok

#endif  // ORATAG_TOKENIZER_HPP_
