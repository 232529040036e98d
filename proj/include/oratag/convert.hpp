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

#ifndef ORATAG_CONVERT_HPP_
#define ORATAG_CONVERT_HPP_

#include <string_view>

#include "oratag/annotation.hpp"
#include "oratag/textgrid.hpp"

// Document <-> TextGrid bridging. A document becomes six interval tiers
// (tok-min, pos-min, disfluency, tok-mwu, pos-mwu, discourse); reading
// reverses that by aligning values to token interval midpoints. TextGrids
// do not carry tokenizer flags or pause classes, so TSV is the lossless
// interchange format; the grid form keeps texts and times only.

namespace oratag::io {

// Requires globally non-overlapping token times (interleaved multi-speaker
// documents cannot be laid out on one interval tier); InvariantError
// otherwise. Gaps are filled with empty intervals.
TextGrid document_to_textgrid(const annot::Document& doc);

// Rebuilds a document from a grid produced by document_to_textgrid (or any
// grid with a compatible token tier). Intervals of `tok_tier` with
// non-empty text become tokens; text equal to the pause symbol marks a
// pause. Value and span tiers are matched by midpoint containment and may
// be absent. When `speaker_tier` names an existing tier, each token takes
// the text of the speaker interval covering its midpoint.
annot::Document textgrid_to_document(const TextGrid& grid, std::string_view tok_tier = "tok-min",
                                     std::string_view speaker_tier = "",
                                     std::string_view pause_symbol = "_");

}  // namespace oratag::io

#endif  // ORATAG_CONVERT_HPP_
