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

#ifndef ORATAG_CRF_HPP_
#define ORATAG_CRF_HPP_

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

// Linear-chain conditional random field: template-driven feature extraction,
// log-domain forward-backward, Viterbi decoding with optional per-position
// label locks, L2-regularized maximum likelihood training.

namespace oratag::crf {

class NonFinite : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class VersionMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CorruptModel : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Extractor {
  int offset = 0;       // relative position, clamped to the window radius
  std::string attr;     // attribute name in the position's map
};

struct FeatureTemplate {
  std::string id;
  std::vector<Extractor> extractors;  // empty list = constant template
  bool bigram = false;                // scores a label pair instead of one label
};

// Window radius templates must stay inside.
inline constexpr int kWindowRadius = 2;

// One position = one attribute map. Missing attributes read as "".
using AttrMap = std::map<std::string, std::string, std::less<>>;

struct LabeledSequence {
  std::vector<AttrMap> positions;
  std::vector<std::string> labels;  // empty, or one gold label per position
};

// The stock template set: word identity in a +-2 window, the two adjacent
// word bigrams, prefixes and suffixes of length 1..4, shape, the lexicon
// candidate-tag set in a +-1 window, neighboring pause classes, the
// false-start flag, and one constant transition template.
std::vector<FeatureTemplate> default_templates();

// Active feature keys per position. Bigram keys at position t describe the
// label pair (t-1, t); position 0 has none. Keys are `templateId=v1|v2`
// with extractor values whitespace-escaped, "BOS"/"EOS" outside the range.
struct FeatureKeys {
  std::vector<std::vector<std::string>> uni;
  std::vector<std::vector<std::string>> big;
};
FeatureKeys extract_features(const LabeledSequence& seq,
                             const std::vector<FeatureTemplate>& templates);

struct CrfModel {
  int format_version = 1;
  std::vector<std::string> labels;  // decode tie-breaks favor lower indices
  std::vector<FeatureTemplate> templates;
  // Feature key -> first weight slot. A unigram key owns |labels| slots, a
  // bigram key |labels|^2 slots laid out previous-label-major.
  std::map<std::string, std::size_t, std::less<>> feature_blocks;
  std::vector<double> weights;

  int label_index(std::string_view label) const;  // -1 when unknown
};

struct TrainingConfig {
  double l2_sigma = 1.0;       // larger = weaker regularization
  int max_iterations = 200;
  double convergence_tol = 1e-5;  // relative objective change
  unsigned seed = 0;           // kept for interface stability; training is
                               // deterministic regardless
  // Observer called with (0, initial objective) and then once per accepted
  // line-search step with (iteration, new objective). Null disables it.
  std::function<void(int, double)> on_iteration;
};

// Regularized negative log-likelihood of the batch and, when `grad` is not
// null, its gradient with respect to model.weights. An empty batch yields
// just the L2 term. Throws NonFinite when the objective overflows.
double objective_and_gradient(const CrfModel& model, const std::vector<LabeledSequence>& batch,
                              std::vector<double>* grad, double l2_sigma = 1.0);

// Batch L-BFGS with Armijo backtracking from zero-initialized weights.
// Labels are the sorted distinct gold labels; features are those observed
// in `data`. Throws NoData on an empty batch.
CrfModel train(const std::vector<LabeledSequence>& data,
               const std::vector<FeatureTemplate>& templates, const TrainingConfig& cfg);

// Viterbi argmax. Ties prefer the lowest label index at every backpointer
// and at the final position. `locked` may pin positions to a label index
// (-1 leaves a position free); locked labels win regardless of score.
std::vector<std::string> decode(const CrfModel& model, const LabeledSequence& seq,
                                const std::vector<int>* locked = nullptr);

// Forward-backward posterior per position; each row is normalized to sum 1.
std::vector<std::vector<double>> marginals(const CrfModel& model, const LabeledSequence& seq);

// Versioned text serialization. Weights are hex floats, so
// save(load(save(m))) == save(m) byte for byte.
std::string save_model(const CrfModel& model);
CrfModel load_model(std::string_view bytes);

}  // namespace oratag::crf

#endif  // ORATAG_CRF_HPP_
