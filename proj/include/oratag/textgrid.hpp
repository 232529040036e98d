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

#ifndef ORATAG_TEXTGRID_HPP_
#define ORATAG_TEXTGRID_HPP_

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

// Reader/writer for the Praat TextGrid long text format. Input may be
// UTF-8 (with or without BOM) or UTF-16 (either byte order, BOM required).
// Only interval tiers are interpreted; point tiers are skipped and
// reported as warnings. The short text format is rejected.

namespace oratag::io {

struct ParseError : std::runtime_error {
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_number(line) {}
  std::size_t line_number;
};

struct EncodingError : std::runtime_error {
  explicit EncodingError(const std::string& what) : std::runtime_error(what) {}
};

struct InvariantError : std::runtime_error {
  explicit InvariantError(const std::string& what) : std::runtime_error(what) {}
};

struct Interval {
  double xmin = 0.0;
  double xmax = 0.0;
  std::string text;
  bool operator==(const Interval&) const = default;
};

struct IntervalTier {
  std::string name;
  double xmin = 0.0;
  double xmax = 0.0;
  std::vector<Interval> intervals;  // contiguous, ordered
  bool operator==(const IntervalTier&) const = default;
};

struct TextGrid {
  double xmin = 0.0;
  double xmax = 0.0;
  std::vector<IntervalTier> tiers;
  std::vector<std::string> warnings;  // e.g. skipped point tiers
};

TextGrid read_textgrid(std::string_view bytes);

// Long-format serialization; intervals must be contiguous and ordered and
// tier bounds must enclose them (InvariantError otherwise). Times are
// written with up to six fractional digits.
std::string write_textgrid(const TextGrid& grid);

// Fills gaps between intervals (and against the tier bounds) with
// empty-text intervals so that the tier is contiguous.
IntervalTier make_contiguous(IntervalTier tier, double xmin, double xmax);

}  // namespace oratag::io

#endif  // ORATAG_TEXTGRID_HPP_
