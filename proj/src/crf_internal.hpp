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

#ifndef ORATAG_SRC_CRF_INTERNAL_HPP_
#define ORATAG_SRC_CRF_INTERNAL_HPP_

#include <cstddef>
#include <vector>

#include "oratag/crf.hpp"

namespace oratag::crf::internal {

// A sequence with feature keys resolved to weight-block offsets. Keys absent
// from the model are dropped; they cannot contribute score.
struct Resolved {
  std::size_t n = 0;
  std::vector<std::vector<std::size_t>> uni;  // per position
  std::vector<std::vector<std::size_t>> big;  // per position, empty at 0
  std::vector<int> gold;                      // label indices, -1 when absent
};

Resolved resolve(const CrfModel& model, const LabeledSequence& seq);

// Fills U (n x L, row-major) with unary scores from `w`, then pins locked
// positions by masking the other labels to -inf. `locked` may be null.
void unary_scores(const std::vector<double>& w, const Resolved& r, std::size_t L,
                  const std::vector<int>* locked, std::vector<double>* U);

// Row-major L x L transition matrix for one position. With a single active
// block this aliases `w` directly; otherwise the blocks are summed into
// `scratch`. Returns null when no bigram feature is active (all-zero
// transitions).
const double* transition_matrix(const std::vector<double>& w,
                                const std::vector<std::size_t>& blocks, std::size_t L,
                                std::vector<double>* scratch);

// alpha/beta charts (n x L, row-major, log domain) and the log partition.
struct Chart {
  std::vector<double> U;
  std::vector<double> alpha;
  std::vector<double> beta;
  double log_z = 0.0;
};

// Forward-backward over the resolved sequence. Requires r.n > 0.
void forward_backward(const std::vector<double>& w, const Resolved& r, std::size_t L, Chart* out);

// Batch objective at weight point `w` over pre-resolved sequences, plus the
// gradient when `grad` is non-null (it is resized and overwritten). The
// layout of `w` must match `blocks_total`.
double batch_objective(const std::vector<double>& w, const std::vector<Resolved>& seqs,
                       std::size_t L, double l2_sigma, std::vector<double>* grad);

}  // namespace oratag::crf::internal

#endif  // ORATAG_SRC_CRF_INTERNAL_HPP_
