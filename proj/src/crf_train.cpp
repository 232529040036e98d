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

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

#include "crf_internal.hpp"

namespace oratag::crf {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

// Two-loop L-BFGS recursion. With an empty history this is steepest descent.
std::vector<double> lbfgs_direction(const std::vector<double>& g,
                                    const std::deque<std::vector<double>>& s_hist,
                                    const std::deque<std::vector<double>>& y_hist,
                                    const std::deque<double>& rho_hist) {
  std::vector<double> q = g;
  const std::size_t m = s_hist.size();
  std::vector<double> alpha(m, 0.0);
  for (std::size_t i = m; i-- > 0;) {
    alpha[i] = rho_hist[i] * dot(s_hist[i], q);
    for (std::size_t j = 0; j < q.size(); ++j) q[j] -= alpha[i] * y_hist[i][j];
  }
  if (m > 0) {
    const double gamma = dot(s_hist.back(), y_hist.back()) / dot(y_hist.back(), y_hist.back());
    for (auto& v : q) v *= gamma;
  }
  for (std::size_t i = 0; i < m; ++i) {
    const double beta = rho_hist[i] * dot(y_hist[i], q);
    for (std::size_t j = 0; j < q.size(); ++j) q[j] += (alpha[i] - beta) * s_hist[i][j];
  }
  for (auto& v : q) v = -v;
  return q;
}

void validate_config(const TrainingConfig& cfg) {
  if (!(cfg.l2_sigma > 0.0)) throw std::invalid_argument("l2Sigma must be positive");
  if (cfg.max_iterations < 0) throw std::invalid_argument("maxIterations must be >= 0");
  if (!(cfg.convergence_tol > 0.0)) throw std::invalid_argument("convergenceTol must be positive");
}

}  // namespace

double objective_and_gradient(const CrfModel& model, const std::vector<LabeledSequence>& batch,
                              std::vector<double>* grad, double l2_sigma) {
  std::vector<internal::Resolved> resolved;
  resolved.reserve(batch.size());
  for (const auto& seq : batch) resolved.push_back(internal::resolve(model, seq));
  return internal::batch_objective(model.weights, resolved, model.labels.size(), l2_sigma, grad);
}

CrfModel train(const std::vector<LabeledSequence>& data,
               const std::vector<FeatureTemplate>& templates, const TrainingConfig& cfg) {
  validate_config(cfg);

  std::set<std::string> label_set;
  std::size_t total_positions = 0;
  for (const auto& seq : data) {
    if (seq.positions.empty()) continue;
    if (seq.labels.size() != seq.positions.size()) {
      throw NoData("training sequence without gold labels");
    }
    for (const auto& label : seq.labels) label_set.insert(label);
    total_positions += seq.positions.size();
  }
  if (total_positions == 0) throw NoData("no labeled training positions");

  CrfModel model;
  model.labels.assign(label_set.begin(), label_set.end());
  model.templates = templates;
  const std::size_t L = model.labels.size();

  std::size_t weight_count = 0;
  std::vector<FeatureKeys> all_keys;
  all_keys.reserve(data.size());
  for (const auto& seq : data) {
    all_keys.push_back(extract_features(seq, model.templates));
    for (std::size_t t = 0; t < seq.positions.size(); ++t) {
      for (const auto& key : all_keys.back().uni[t]) {
        if (model.feature_blocks.try_emplace(key, weight_count).second) weight_count += L;
      }
      for (const auto& key : all_keys.back().big[t]) {
        if (model.feature_blocks.try_emplace(key, weight_count).second) weight_count += L * L;
      }
    }
  }
  model.weights.assign(weight_count, 0.0);

  std::vector<internal::Resolved> resolved;
  resolved.reserve(data.size());
  for (const auto& seq : data) resolved.push_back(internal::resolve(model, seq));

  std::vector<double> w(weight_count, 0.0), grad;
  double f = internal::batch_objective(w, resolved, L, cfg.l2_sigma, &grad);
  if (cfg.on_iteration) cfg.on_iteration(0, f);

  std::deque<std::vector<double>> s_hist, y_hist;
  std::deque<double> rho_hist;
  constexpr std::size_t kHistory = 10;
  constexpr double kArmijoC1 = 1e-4;

  std::vector<double> trial(weight_count);
  for (int iter = 0; iter < cfg.max_iterations; ++iter) {
    std::vector<double> dir = lbfgs_direction(grad, s_hist, y_hist, rho_hist);
    double gd = dot(grad, dir);
    if (gd >= 0.0) {
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      for (std::size_t i = 0; i < dir.size(); ++i) dir[i] = -grad[i];
      gd = -dot(grad, grad);
      if (gd == 0.0) break;
    }

    double step = s_hist.empty() ? 1.0 / std::max(1.0, norm2(grad)) : 1.0;
    double f_new = f;
    bool accepted = false;
    for (int halving = 0; halving < 60; ++halving) {
      for (std::size_t i = 0; i < w.size(); ++i) trial[i] = w[i] + step * dir[i];
      f_new = internal::batch_objective(trial, resolved, L, cfg.l2_sigma, nullptr);
      if (f_new <= f + kArmijoC1 * step * gd) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;

    std::vector<double> grad_new;
    f_new = internal::batch_objective(trial, resolved, L, cfg.l2_sigma, &grad_new);

    std::vector<double> s(weight_count), y(weight_count);
    for (std::size_t i = 0; i < weight_count; ++i) {
      s[i] = trial[i] - w[i];
      y[i] = grad_new[i] - grad[i];
    }
    const double sy = dot(s, y);
    if (sy > 1e-10) {
      if (s_hist.size() == kHistory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
    }

    w.swap(trial);
    grad.swap(grad_new);
    const bool converged = std::abs(f - f_new) <= cfg.convergence_tol * std::max(1.0, std::abs(f_new));
    f = f_new;
    if (cfg.on_iteration) cfg.on_iteration(iter + 1, f);
    if (converged) break;
  }

  model.weights = std::move(w);
  return model;
}

}  // namespace oratag::crf
