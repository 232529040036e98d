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

#ifndef ORATAG_ANNOTATION_HPP_
#define ORATAG_ANNOTATION_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "oratag/tagset.hpp"

// The six-tier annotation document.
//
//   tok-min     minimal, time-stamped tokens (the base sequence)
//   pos-min     one POS value per token
//   disfluency  one disfluency value per token (may be empty)
//   tok-mwu     multi-word unit spans partitioning the token sequence
//   pos-mwu     one POS value per tok-mwu span
//   discourse   sparse spans marking discourse phenomena
//
// pos-min and disfluency are congruent with tok-min; pos-mwu is congruent
// with tok-mwu; discourse spans align to token boundaries but need not
// cover anything.

namespace oratag::annot {

struct OverlapError : std::runtime_error {
  explicit OverlapError(const std::string& what) : std::runtime_error(what) {}
};
struct MisalignedSpan : std::runtime_error {
  explicit MisalignedSpan(const std::string& what) : std::runtime_error(what) {}
};

enum class PauseClass { None, Short, Long };

struct Token {
  std::string text;
  double t_min = 0.0;
  double t_max = 0.0;
  std::string speaker;
  bool is_pause = false;

  // Tokenizer-derived attributes.
  bool false_start = false;
  bool intra_word_pause = false;
  PauseClass pause_class = PauseClass::None;  // meaningful for pause tokens

  double duration() const { return t_max - t_min; }
  bool operator==(const Token&) const = default;
};

// Half-open token index range with a tier value.
struct TierValue {
  std::size_t begin = 0;
  std::size_t end = 0;  // exclusive
  std::string value;

  std::size_t size() const { return end - begin; }
  bool operator==(const TierValue&) const = default;
};

struct DocumentMetadata {
  std::string sample_id;
  std::string subcorpus_id;
  bool operator==(const DocumentMetadata&) const = default;
};

struct Violation {
  std::string tier;
  std::size_t index = 0;
  std::string rule;
};

struct Document {
  std::vector<Token> tokens;
  std::vector<std::string> pos_min;     // size == tokens.size()
  std::vector<std::string> disfluency;  // size == tokens.size()
  std::vector<TierValue> tok_mwu;       // partition of [0, tokens.size())
  std::vector<std::string> pos_mwu;     // size == tok_mwu.size()
  std::vector<TierValue> discourse;     // sparse, disjoint, ordered

  DocumentMetadata meta;

  // Columns read from a TSV that the pipeline does not interpret;
  // carried through and written back, one value per token.
  std::vector<std::pair<std::string, std::vector<std::string>>> extra_columns;

  // Conventional symbol used by pause tokens' text.
  std::string pause_symbol = "_";

  bool operator==(const Document&) const = default;

  std::size_t size() const { return tokens.size(); }

  // Index of the tok-mwu span covering token `i`.
  std::size_t mwu_index_of(std::size_t i) const;

  // Space-joined texts of tokens in [begin, end).
  std::string span_text(std::size_t begin, std::size_t end) const;
};

// Builds a document over the given tokens: tok-mwu starts as singleton
// spans, pos tiers empty-valued. Tokens must be time-ordered and
// non-overlapping per speaker, else OverlapError.
Document new_document(std::vector<Token> tokens);

// Merges the tok-mwu spans covered by [begin, end) into one unit tagged
// `tag`. Boundaries must coincide with existing span boundaries.
void group_mwu(Document& doc, std::size_t begin, std::size_t end, const tagset::PosTag& tag);

// All invariant violations; empty iff the document is well-formed.
std::vector<Violation> validate(const Document& doc);

// Maximal pause-separated units: runs of tokens split wherever a pause
// token lasts at least `threshold_ms`. Returned ranges are trimmed so that
// they start and end on non-pause tokens; shorter pauses may fall inside a
// range but are not unit members. Pause tokens belong to no unit.
std::vector<std::pair<std::size_t, std::size_t>> psu_segments(const Document& doc,
                                                              int threshold_ms);

}  // namespace oratag::annot

#endif  // ORATAG_ANNOTATION_HPP_
