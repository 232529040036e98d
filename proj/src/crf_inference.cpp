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

#include <cmath>
#include <cstring>
#include <limits>

#include "crf_internal.hpp"
#include "oratag/kernels.hpp"

namespace oratag::crf {

namespace internal {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

Resolved resolve(const CrfModel& model, const LabeledSequence& seq) {
  const FeatureKeys keys = extract_features(seq, model.templates);
  Resolved r;
  r.n = seq.positions.size();
  r.uni.resize(r.n);
  r.big.resize(r.n);
  for (std::size_t t = 0; t < r.n; ++t) {
    for (const auto& key : keys.uni[t]) {
      const auto it = model.feature_blocks.find(key);
      if (it != model.feature_blocks.end()) r.uni[t].push_back(it->second);
    }
    for (const auto& key : keys.big[t]) {
      const auto it = model.feature_blocks.find(key);
      if (it != model.feature_blocks.end()) r.big[t].push_back(it->second);
    }
  }
  r.gold.assign(r.n, -1);
  if (seq.labels.size() == r.n) {
    for (std::size_t t = 0; t < r.n; ++t) r.gold[t] = model.label_index(seq.labels[t]);
  }
  return r;
}

void unary_scores(const std::vector<double>& w, const Resolved& r, std::size_t L,
                  const std::vector<int>* locked, std::vector<double>* U) {
  U->assign(r.n * L, 0.0);
  const auto& k = kern::ops();
  for (std::size_t t = 0; t < r.n; ++t) {
    double* row = U->data() + t * L;
    for (const std::size_t b : r.uni[t]) k.add_inplace(row, w.data() + b, L);
    if (locked && (*locked)[t] >= 0) {
      const std::size_t keep = static_cast<std::size_t>((*locked)[t]);
      for (std::size_t y = 0; y < L; ++y) {
        if (y != keep) row[y] = kNegInf;
      }
    }
  }
}

const double* transition_matrix(const std::vector<double>& w,
                                const std::vector<std::size_t>& blocks, std::size_t L,
                                std::vector<double>* scratch) {
  if (blocks.empty()) return nullptr;
  if (blocks.size() == 1) return w.data() + blocks[0];
  scratch->assign(L * L, 0.0);
  const auto& k = kern::ops();
  for (const std::size_t b : blocks) k.add_inplace(scratch->data(), w.data() + b, L * L);
  return scratch->data();
}

void forward_backward(const std::vector<double>& w, const Resolved& r, std::size_t L,
                      Chart* out) {
  const auto& k = kern::ops();
  const std::size_t n = r.n;
  unary_scores(w, r, L, nullptr, &out->U);
  out->alpha.assign(n * L, 0.0);
  out->beta.assign(n * L, 0.0);
  const double* U = out->U.data();
  double* alpha = out->alpha.data();
  double* beta = out->beta.data();

  std::vector<double> scratch_t, transposed(L * L), tmp(L);
  const std::vector<std::size_t>* cached_blocks = nullptr;

  std::memcpy(alpha, U, L * sizeof(double));
  for (std::size_t t = 1; t < n; ++t) {
    const double* T = transition_matrix(w, r.big[t], L, &scratch_t);
    const double* prev = alpha + (t - 1) * L;
    double* cur = alpha + t * L;
    if (!T) {
      const double v = kern::logsumexp(prev, L);
      k.add_scalar(cur, U + t * L, v, L);
      cached_blocks = nullptr;
      continue;
    }
    if (!cached_blocks || *cached_blocks != r.big[t]) {
      for (std::size_t a = 0; a < L; ++a) {
        for (std::size_t b = 0; b < L; ++b) transposed[b * L + a] = T[a * L + b];
      }
      cached_blocks = &r.big[t];
    }
    for (std::size_t y = 0; y < L; ++y) {
      k.add(tmp.data(), prev, transposed.data() + y * L, L);
      cur[y] = U[t * L + y] + kern::logsumexp(tmp.data(), L);
    }
  }
  out->log_z = kern::logsumexp(alpha + (n - 1) * L, L);

  std::vector<double> q(L);
  for (std::size_t t = n - 1; t-- > 0;) {
    const double* T = transition_matrix(w, r.big[t + 1], L, &scratch_t);
    k.add(q.data(), U + (t + 1) * L, beta + (t + 1) * L, L);
    double* cur = beta + t * L;
    if (!T) {
      const double v = kern::logsumexp(q.data(), L);
      for (std::size_t y = 0; y < L; ++y) cur[y] = v;
      continue;
    }
    for (std::size_t a = 0; a < L; ++a) {
      k.add(tmp.data(), q.data(), T + a * L, L);
      cur[a] = kern::logsumexp(tmp.data(), L);
    }
  }
}

double batch_objective(const std::vector<double>& w, const std::vector<Resolved>& seqs,
                       std::size_t L, double l2_sigma, std::vector<double>* grad) {
  const auto& k = kern::ops();
  if (grad) grad->assign(w.size(), 0.0);
  double nll = 0.0;

  Chart chart;
  std::vector<double> scratch_t, gamma(L), q2(L), xi_row(L);
  for (const auto& r : seqs) {
    if (r.n == 0) continue;
    for (std::size_t t = 0; t < r.n; ++t) {
      if (r.gold[t] < 0) throw NoData("position without a known gold label");
    }
    forward_backward(w, r, L, &chart);
    const double* U = chart.U.data();
    const double* alpha = chart.alpha.data();
    const double* beta = chart.beta.data();
    const double log_z = chart.log_z;

    double gold_score = 0.0;
    for (std::size_t t = 0; t < r.n; ++t) {
      gold_score += U[t * L + static_cast<std::size_t>(r.gold[t])];
      if (t > 0) {
        const double* T = transition_matrix(w, r.big[t], L, &scratch_t);
        if (T) {
          gold_score += T[static_cast<std::size_t>(r.gold[t - 1]) * L +
                          static_cast<std::size_t>(r.gold[t])];
        }
      }
    }
    nll += log_z - gold_score;
    if (!grad) continue;

    for (std::size_t t = 0; t < r.n; ++t) {
      for (std::size_t y = 0; y < L; ++y) {
        gamma[y] = std::exp(alpha[t * L + y] + beta[t * L + y] - log_z);
      }
      for (const std::size_t b : r.uni[t]) {
        k.add_inplace(grad->data() + b, gamma.data(), L);
        (*grad)[b + static_cast<std::size_t>(r.gold[t])] -= 1.0;
      }
      if (t == 0 || r.big[t].empty()) continue;

      const double* T = transition_matrix(w, r.big[t], L, &scratch_t);
      for (std::size_t y = 0; y < L; ++y) q2[y] = U[t * L + y] + beta[t * L + y] - log_z;
      const double* prev = alpha + (t - 1) * L;
      for (std::size_t a = 0; a < L; ++a) {
        k.add(xi_row.data(), q2.data(), T + a * L, L);
        k.add_scalar(xi_row.data(), xi_row.data(), prev[a], L);
        for (std::size_t y = 0; y < L; ++y) xi_row[y] = std::exp(xi_row[y]);
        for (const std::size_t b : r.big[t]) {
          k.add_inplace(grad->data() + b + a * L, xi_row.data(), L);
        }
      }
      for (const std::size_t b : r.big[t]) {
        (*grad)[b + static_cast<std::size_t>(r.gold[t - 1]) * L +
                static_cast<std::size_t>(r.gold[t])] -= 1.0;
      }
    }
  }

  const double inv_var = 1.0 / (l2_sigma * l2_sigma);
  double l2 = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    l2 += w[i] * w[i];
    if (grad) (*grad)[i] += w[i] * inv_var;
  }
  nll += 0.5 * l2 * inv_var;
  if (!std::isfinite(nll)) throw NonFinite("objective is not finite");
  return nll;
}

}  // namespace internal

std::vector<std::string> decode(const CrfModel& model, const LabeledSequence& seq,
                                const std::vector<int>* locked) {
  const std::size_t n = seq.positions.size();
  const std::size_t L = model.labels.size();
  std::vector<std::string> out;
  if (n == 0 || L == 0) return out;

  const auto& k = kern::ops();
  const internal::Resolved r = internal::resolve(model, seq);
  std::vector<double> U;
  internal::unary_scores(model.weights, r, L, locked, &U);

  std::vector<double> delta(U.begin(), U.begin() + static_cast<std::ptrdiff_t>(L));
  std::vector<double> best(L), next(L), scratch_t;
  std::vector<std::int32_t> bp(n * L, 0);
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();

  for (std::size_t t = 1; t < n; ++t) {
    const double* T = internal::transition_matrix(model.weights, r.big[t], L, &scratch_t);
    std::int32_t* arg = bp.data() + t * L;
    if (!T) {
      const std::size_t a = kern::argmax(delta.data(), L);
      const double m = delta[a];
      for (std::size_t y = 0; y < L; ++y) {
        best[y] = m;
        arg[y] = static_cast<std::int32_t>(a);
      }
    } else {
      std::fill(best.begin(), best.end(), kNegInf);
      for (std::size_t a = 0; a < L; ++a) {
        k.vmax_step(best.data(), arg, delta[a], T + a * L, static_cast<std::int32_t>(a), L);
      }
    }
    k.add(next.data(), best.data(), U.data() + t * L, L);
    delta.swap(next);
  }

  std::vector<std::size_t> path(n);
  path[n - 1] = kern::argmax(delta.data(), L);
  for (std::size_t t = n - 1; t > 0; --t) {
    path[t - 1] = static_cast<std::size_t>(bp[t * L + path[t]]);
  }
  out.reserve(n);
  for (std::size_t t = 0; t < n; ++t) out.push_back(model.labels[path[t]]);
  return out;
}

std::vector<std::vector<double>> marginals(const CrfModel& model, const LabeledSequence& seq) {
  const std::size_t n = seq.positions.size();
  const std::size_t L = model.labels.size();
  std::vector<std::vector<double>> out;
  if (n == 0 || L == 0) return out;

  const internal::Resolved r = internal::resolve(model, seq);
  internal::Chart chart;
  internal::forward_backward(model.weights, r, L, &chart);

  out.assign(n, std::vector<double>(L, 0.0));
  for (std::size_t t = 0; t < n; ++t) {
    double sum = 0.0;
    for (std::size_t y = 0; y < L; ++y) {
      out[t][y] = std::exp(chart.alpha[t * L + y] + chart.beta[t * L + y] - chart.log_z);
      sum += out[t][y];
    }
    for (std::size_t y = 0; y < L; ++y) out[t][y] /= sum;
  }
  return out;
}

}  // namespace oratag::crf
