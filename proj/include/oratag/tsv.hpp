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

#ifndef ORATAG_TSV_HPP_
#define ORATAG_TSV_HPP_

#include <string>
#include <string_view>

#include "oratag/annotation.hpp"
#include "oratag/textgrid.hpp"  // ParseError

// Tab-separated document serialization: one row per minimal token, tier
// values in named columns. Span-level tiers (tok-mwu, discourse) repeat
// their value on every covered row next to a span-id column. `#key=value`
// comment lines before the header carry document metadata. Cell text is
// escaped (\t, \n, \r, \\), times use the shortest round-trip decimal
// form, so write/read is the identity on documents.

namespace oratag::io {

struct MissingColumn : std::runtime_error {
  explicit MissingColumn(const std::string& name)
      : std::runtime_error("missing required column: " + name) {}
};

annot::Document read_tsv(std::string_view bytes);
std::string write_tsv(const annot::Document& doc);

}  // namespace oratag::io

#endif  // ORATAG_TSV_HPP_
