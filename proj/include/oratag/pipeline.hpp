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

#ifndef ORATAG_PIPELINE_HPP_
#define ORATAG_PIPELINE_HPP_

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "oratag/annotation.hpp"
#include "oratag/crf.hpp"
#include "oratag/lexicon.hpp"
#include "oratag/tagset.hpp"
#include "oratag/tokenizer.hpp"

// The annotation cascade. Steps run in a fixed order over one document:
//
//   1. preprocess                 lexicon candidates, locks, FIL/FST/SIL
//   2. preliminary_pos            constrained CRF decode per pause unit
//   3. detect_boundaries          pause-unit segmentation for later steps
//   4. detect_simple_disfluencies WDP flags, duration-based lengthening
//      detect_structured_...      repetition rule, optional CRF layer, COM
//   5. final_pos_mwu              re-decode on fluent tokens, MWU grouping
//   6. detect_discourse_markers   marginal-gated candidate spans
//      apply_post_rules           pattern/action retagging
//
// Each step can also be driven on its own for testing and inspection.

namespace oratag::pipe {

class LabelOutsideRegistry : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RuleParseError : public std::runtime_error {
 public:
  RuleParseError(const std::string& what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_number(line) {}
  std::size_t line_number;
};

// One retagging rule: a window of tier matchers and a single assignment.
// Matchers compare exactly, except that a trailing '*' makes the matcher a
// prefix test (e.g. `DET:*` matches any determiner subtag).
struct PostRule {
  struct Matcher {
    std::string tier;  // tok-min | pos-min | disfluency | pos-mwu
    std::string value;
  };
  std::vector<Matcher> pattern;   // window length 1..5
  std::size_t action_index = 0;   // position inside the window
  std::string action_tier;        // pos-min | pos-mwu
  std::string action_value;
};

// `[tier=matcher]...[tier=matcher] => index:tier=value`, one rule per line,
// '#' comments. Raises RuleParseError with the offending line.
std::vector<PostRule> parse_post_rules(std::string_view content);

struct PipelineResources {
  lex::Lexicon lexicon;
  crf::CrfModel prelim_pos_model;
  std::optional<crf::CrfModel> disfluency_model;
  crf::CrfModel final_pos_model;
  std::vector<PostRule> post_rules;
  tok::TokenizerConfig tokenizer_config;
  tagset::TagRegistry registry = tagset::TagRegistry::builtin();

  // Label whose final-model marginal gates discourse-marker candidates.
  std::string discourse_marker_label = "ITJ";
  // Lengthening threshold: flag tokens whose duration per character lies
  // more than this many standard deviations above the speaker's mean.
  double lengthening_z = 3.0;
  // Longest repeated unit the repetition rule looks for.
  int repetition_max_unit = 4;
};

// Checks that POS model labels parse against the registry and that the
// disfluency model (when present) emits only "O" or disfluency labels.
// Raises LabelOutsideRegistry.
void validate_resources(const PipelineResources& res);

// Working state shared by the cascade steps.
struct StepState {
  annot::Document doc;
  std::vector<lex::Lexicon::Entry> candidates;              // per token
  std::vector<bool> locked;                                 // pos-min locks
  std::vector<std::pair<std::size_t, std::size_t>> segments;  // pause units
};

// Fills candidates; locks single-candidate tokens to their tag; filled
// pauses become disfluency FIL with pos-min ITJ locked; false starts get
// disfluency FST; pause tokens get the pause symbol as locked pos-min and
// disfluency SIL.
void preprocess(StepState* s, const lex::Lexicon& lexicon);

// Constrained Viterbi per pause unit. Locked positions keep their value:
// when the model knows the label the decode is constrained to it, otherwise
// the locked value is restored after decoding. Labels produced by the model
// must parse against `registry` (null skips the check). The lexicon feeds
// the candidate-set features and must be the one the model was trained with.
void preliminary_pos(StepState* s, const crf::CrfModel& model, const lex::Lexicon& lexicon,
                     const tagset::TagRegistry* registry, int psu_threshold_ms);

// Materializes psu_segments for the downstream steps.
void detect_boundaries(StepState* s, int psu_threshold_ms);

// WDP from the tokenizer flag; LEN for tokens whose duration per character
// exceeds the speaker mean by `lengthening_z` standard deviations, unless
// the token is pre-pausal or final. Disabled when the document carries no
// real durations. Never overwrites an existing disfluency value.
void detect_simple_disfluencies(StepState* s, double lengthening_z);

// Exact-repetition rule within each pause unit: a unit of up to
// `max_unit` tokens repeated consecutively (case-folded, FIL and pause
// tokens transparent) becomes reparandum REP/REP*, repair REP_, with
// skipped empty cells between the interruption point and the repair coded
// REP-E. An optional model layer adds DEL/SUB/INS spans. Overlapping
// findings collapse to bare COM. Existing cell values always win.
void detect_structured_disfluencies(StepState* s, const crf::CrfModel* model,
                                    const lex::Lexicon& lexicon, int max_unit);

// Re-decodes pos-min on fluent tokens only (pauses and FIL/FST/WDP tokens
// are excluded and keep their previous values), then groups lexicon MWU
// matches greedily longest-first. A match is accepted when every component
// tag shares the entry tag's category, or the span-initial candidate set
// contains that category; spans never cross an interruption point. All
// remaining singleton spans copy pos-min to pos-mwu. MWU tags parse against
// `registry` (null means the built-in one).
void final_pos_mwu(StepState* s, const crf::CrfModel& model, const lex::Lexicon& lexicon,
                   const tagset::TagRegistry* registry = nullptr);

// Marks single-token lexicon discourse-marker candidates on the discourse
// tier (value "DM") when the final model's marginal for `dm_label` at that
// position exceeds 0.5 strictly.
void detect_discourse_markers(StepState* s, const crf::CrfModel& model,
                              const lex::Lexicon& lexicon, std::string_view dm_label);

// Applies each rule once, scanning left to right without overlaps.
void apply_post_rules(annot::Document* doc, const std::vector<PostRule>& rules);

// Runs the whole cascade on a tokenized document. Tier values are reset
// first; tokens and times pass through untouched.
annot::Document annotate(const annot::Document& input, const PipelineResources& res);

// Attribute map consumed by the feature templates, built from the token,
// its neighbors' pause classes, and its lexicon candidates.
crf::AttrMap token_attributes(const annot::Document& doc, std::size_t i,
                              const lex::Lexicon& lexicon);

// Gold sequences for model training, one per pause unit, mirroring exactly
// what the corresponding cascade step will see at decode time.
enum class TrainingTarget {
  PrelimPos,   // non-pause tokens, labels from pos-min
  FinalPos,    // fluent tokens only, labels from pos-min
  Disfluency,  // non-pause tokens, labels from the disfluency tier ("O" when empty)
};
std::vector<crf::LabeledSequence> training_sequences(const annot::Document& doc,
                                                     const lex::Lexicon& lexicon,
                                                     int psu_threshold_ms, TrainingTarget target);

// The sequence for one pause unit [begin, end), or nothing when the unit has
// no eligible token or (for the POS targets) a gold gap.
std::optional<crf::LabeledSequence> unit_training_sequence(const annot::Document& doc,
                                                           const lex::Lexicon& lexicon,
                                                           std::size_t begin, std::size_t end,
                                                           TrainingTarget target);

}  // namespace oratag::pipe

#endif  // ORATAG_PIPELINE_HPP_
