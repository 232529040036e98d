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

#ifndef ORATAG_EVALUATION_HPP_
#define ORATAG_EVALUATION_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "oratag/annotation.hpp"
#include "oratag/crf.hpp"
#include "oratag/pipeline.hpp"

// Pause-unit-balanced k-fold cross-validation and the tagging metric suite.

namespace oratag::eval {

class TooFewUnits : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IncongruentDocuments : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One pause unit of one corpus document, with its fold.
struct PsuRef {
  std::size_t doc = 0;   // corpus index
  std::size_t unit = 0;  // unit index within the document
  std::size_t begin = 0;  // token range, end exclusive
  std::size_t end = 0;
  std::string stratum;   // sub-corpus id
  int fold = -1;

  bool operator==(const PsuRef&) const = default;
};

// Every pause unit assigned to exactly one fold; within each stratum the
// fold sizes differ by at most one.
struct FoldPlan {
  int k = 10;
  std::vector<PsuRef> assignment;  // ordered by (doc, unit)
};

// Computes pause units at `psu_threshold_ms`, shuffles them per stratum
// (sub-corpus id) with a generator seeded by `seed`, and deals each stratum
// round-robin into k folds. Deterministic for a given seed. Raises
// TooFewUnits when some stratum has fewer than k units.
FoldPlan split_folds(const std::vector<annot::Document>& corpus, int k, int psu_threshold_ms,
                     unsigned seed);

// Fractions in [0, 1]. Fields a scorer does not touch stay at the
// empty-set convention of 1.0, so partial scores compose.
struct Metrics {
  double pos_precision_l1 = 1.0;
  double pos_precision_l2 = 1.0;
  double pos_precision_full = 1.0;
  double disf_detection_precision = 1.0;
  double disf_detection_recall = 1.0;
  double disf_classification_precision = 1.0;
};

// Token accuracy of pos-min over non-pause tokens at category level (l1),
// category:subcategory level (l2), and the exact tag (full). Gold and pred
// must hold identical token sequences, else IncongruentDocuments.
Metrics score_pos(const annot::Document& gold, const annot::Document& pred);

// Token-level disfluency scores over non-pause tokens. A token is detected
// when both documents mark it with any code; detection precision divides by
// predicted marks, recall by gold marks. Classification precision is the
// fraction of detected tokens whose code matches with markers ignored.
// Empty denominators score 1.0.
Metrics score_disfluency(const annot::Document& gold, const annot::Document& pred);

// Both scorers combined.
Metrics score(const annot::Document& gold, const annot::Document& pred);

struct CrossValidationConfig {
  int k = 10;
  unsigned seed = 0;
  int psu_threshold_ms = 500;
  crf::TrainingConfig training;
  std::vector<crf::FeatureTemplate> templates = crf::default_templates();
  bool train_disfluency_model = false;
  int jobs = 1;  // folds processed concurrently
};

struct CrossValidationResult {
  FoldPlan plan;
  std::vector<Metrics> per_fold;  // index = fold
  Metrics mean;                   // unweighted over folds
};

// For each fold: trains preliminary and final POS models (and optionally a
// disfluency model) on the other folds' units, annotates the documents with
// those models, and scores only the held-out units. `base` supplies the
// lexicon, tokenizer config, post rules, and registry; its models are
// ignored. Deterministic for a given seed and corpus regardless of `jobs`.
CrossValidationResult cross_validate(const std::vector<annot::Document>& corpus,
                                     const pipe::PipelineResources& base,
                                     const CrossValidationConfig& cfg);

// Machine-readable `key=value` lines followed by an aligned table of the
// fold means.
std::string format_metrics_report(const CrossValidationResult& result);

}  // namespace oratag::eval

#endif  // ORATAG_EVALUATION_HPP_
