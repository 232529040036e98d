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

#include "oratag/evaluation.hpp"

#include <algorithm>
#include <exception>
#include <map>
#include <random>
#include <stdexcept>
#include <thread>
#include <utility>

#include "oratag/tagset.hpp"
#include "oratag/text_util.hpp"

namespace oratag::eval {

namespace {

struct PosCounts {
  std::size_t considered = 0;
  std::size_t l1 = 0;
  std::size_t l2 = 0;
  std::size_t full = 0;
};

struct DisfCounts {
  std::size_t pred_marked = 0;
  std::size_t gold_marked = 0;
  std::size_t both = 0;
  std::size_t code_match = 0;
};

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 1.0 : static_cast<double>(num) / static_cast<double>(den);
}

void check_congruent(const annot::Document& gold, const annot::Document& pred) {
  if (gold.tokens != pred.tokens) {
    throw IncongruentDocuments("gold and predicted documents do not share the same tokens");
  }
  const std::size_t n = gold.size();
  if (gold.pos_min.size() != n || pred.pos_min.size() != n || gold.disfluency.size() != n ||
      pred.disfluency.size() != n) {
    throw IncongruentDocuments("tier sizes do not match the token count");
  }
}

// A full-tag match implies matches at both coarser levels, so the levels can
// be tested coarsest-last without re-projecting on the happy path.
void accumulate_pos(const annot::Document& gold, const annot::Document& pred, std::size_t begin,
                    std::size_t end, PosCounts* c) {
  for (std::size_t i = begin; i < end; ++i) {
    if (gold.tokens[i].is_pause) continue;
    ++c->considered;
    const std::string& g = gold.pos_min[i];
    const std::string& p = pred.pos_min[i];
    if (g == p) {
      ++c->full;
      ++c->l2;
      ++c->l1;
      continue;
    }
    if (tagset::project_tag_string(g, 2) == tagset::project_tag_string(p, 2)) {
      ++c->l2;
      ++c->l1;
      continue;
    }
    if (tagset::project_tag_string(g, 1) == tagset::project_tag_string(p, 1)) ++c->l1;
  }
}

std::string disf_code(const std::string& label) {
  try {
    return std::string(tagset::code_name(tagset::parse_disfluency_label(label).code));
  } catch (const std::exception&) {
    return label;  // unparseable values compare verbatim
  }
}

void accumulate_disf(const annot::Document& gold, const annot::Document& pred, std::size_t begin,
                     std::size_t end, DisfCounts* c) {
  for (std::size_t i = begin; i < end; ++i) {
    if (gold.tokens[i].is_pause) continue;
    const bool gm = !gold.disfluency[i].empty();
    const bool pm = !pred.disfluency[i].empty();
    if (gm) ++c->gold_marked;
    if (pm) ++c->pred_marked;
    if (gm && pm) {
      ++c->both;
      if (disf_code(gold.disfluency[i]) == disf_code(pred.disfluency[i])) ++c->code_match;
    }
  }
}

void fill_pos(Metrics* m, const PosCounts& c) {
  m->pos_precision_l1 = ratio(c.l1, c.considered);
  m->pos_precision_l2 = ratio(c.l2, c.considered);
  m->pos_precision_full = ratio(c.full, c.considered);
}

void fill_disf(Metrics* m, const DisfCounts& c) {
  m->disf_detection_precision = ratio(c.both, c.pred_marked);
  m->disf_detection_recall = ratio(c.both, c.gold_marked);
  m->disf_classification_precision = ratio(c.code_match, c.both);
}

}  // namespace

Metrics score_pos(const annot::Document& gold, const annot::Document& pred) {
  check_congruent(gold, pred);
  PosCounts c;
  accumulate_pos(gold, pred, 0, gold.size(), &c);
  Metrics m;
  fill_pos(&m, c);
  return m;
}

Metrics score_disfluency(const annot::Document& gold, const annot::Document& pred) {
  check_congruent(gold, pred);
  DisfCounts c;
  accumulate_disf(gold, pred, 0, gold.size(), &c);
  Metrics m;
  fill_disf(&m, c);
  return m;
}

Metrics score(const annot::Document& gold, const annot::Document& pred) {
  check_congruent(gold, pred);
  PosCounts pc;
  DisfCounts dc;
  accumulate_pos(gold, pred, 0, gold.size(), &pc);
  accumulate_disf(gold, pred, 0, gold.size(), &dc);
  Metrics m;
  fill_pos(&m, pc);
  fill_disf(&m, dc);
  return m;
}

FoldPlan split_folds(const std::vector<annot::Document>& corpus, int k, int psu_threshold_ms,
                     unsigned seed) {
  if (k < 1) throw std::invalid_argument("fold count must be positive");

  FoldPlan plan;
  plan.k = k;
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    const auto units = annot::psu_segments(corpus[d], psu_threshold_ms);
    for (std::size_t u = 0; u < units.size(); ++u) {
      plan.assignment.push_back(
          PsuRef{d, u, units[u].first, units[u].second, corpus[d].meta.subcorpus_id, -1});
    }
  }
  if (plan.assignment.empty()) throw TooFewUnits("corpus has no pause units");

  std::map<std::string, std::vector<std::size_t>> strata;
  for (std::size_t i = 0; i < plan.assignment.size(); ++i) {
    strata[plan.assignment[i].stratum].push_back(i);
  }
  for (const auto& [name, members] : strata) {
    if (members.size() < static_cast<std::size_t>(k)) {
      throw TooFewUnits("stratum '" + name + "' has " + std::to_string(members.size()) +
                        " pause units, fewer than " + std::to_string(k) + " folds");
    }
  }

  // One generator shared across strata (iterated in sorted name order), so
  // the whole plan is a function of the seed.
  std::mt19937 rng(seed);
  for (auto& [name, members] : strata) {
    for (std::size_t i = members.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(rng() % i);
      std::swap(members[i - 1], members[j]);
    }
    for (std::size_t pos = 0; pos < members.size(); ++pos) {
      plan.assignment[members[pos]].fold = static_cast<int>(pos % static_cast<std::size_t>(k));
    }
  }
  return plan;
}

namespace {

Metrics run_fold(const std::vector<annot::Document>& corpus, const pipe::PipelineResources& base,
                 const CrossValidationConfig& cfg, const FoldPlan& plan, int fold) {
  std::vector<crf::LabeledSequence> prelim_data;
  std::vector<crf::LabeledSequence> final_data;
  std::vector<crf::LabeledSequence> disf_data;
  for (const PsuRef& ref : plan.assignment) {
    if (ref.fold == fold) continue;
    const annot::Document& doc = corpus[ref.doc];
    if (auto s = pipe::unit_training_sequence(doc, base.lexicon, ref.begin, ref.end,
                                              pipe::TrainingTarget::PrelimPos)) {
      prelim_data.push_back(std::move(*s));
    }
    if (auto s = pipe::unit_training_sequence(doc, base.lexicon, ref.begin, ref.end,
                                              pipe::TrainingTarget::FinalPos)) {
      final_data.push_back(std::move(*s));
    }
    if (cfg.train_disfluency_model) {
      if (auto s = pipe::unit_training_sequence(doc, base.lexicon, ref.begin, ref.end,
                                                pipe::TrainingTarget::Disfluency)) {
        disf_data.push_back(std::move(*s));
      }
    }
  }

  pipe::PipelineResources res = base;
  res.prelim_pos_model = crf::train(prelim_data, cfg.templates, cfg.training);
  res.final_pos_model = crf::train(final_data, cfg.templates, cfg.training);
  res.disfluency_model.reset();
  if (cfg.train_disfluency_model && !disf_data.empty()) {
    res.disfluency_model = crf::train(disf_data, cfg.templates, cfg.training);
  }

  std::map<std::size_t, std::vector<std::pair<std::size_t, std::size_t>>> held;
  for (const PsuRef& ref : plan.assignment) {
    if (ref.fold == fold) held[ref.doc].emplace_back(ref.begin, ref.end);
  }

  PosCounts pc;
  DisfCounts dc;
  for (const auto& [d, ranges] : held) {
    const annot::Document& gold = corpus[d];
    const annot::Document pred = pipe::annotate(gold, res);
    check_congruent(gold, pred);
    for (const auto& [b, e] : ranges) {
      accumulate_pos(gold, pred, b, e, &pc);
      accumulate_disf(gold, pred, b, e, &dc);
    }
  }
  Metrics m;
  fill_pos(&m, pc);
  fill_disf(&m, dc);
  return m;
}

}  // namespace

CrossValidationResult cross_validate(const std::vector<annot::Document>& corpus,
                                     const pipe::PipelineResources& base,
                                     const CrossValidationConfig& cfg) {
  if (cfg.k < 2) throw std::invalid_argument("cross-validation needs at least 2 folds");

  CrossValidationResult result;
  result.plan = split_folds(corpus, cfg.k, cfg.psu_threshold_ms, cfg.seed);
  result.per_fold.assign(static_cast<std::size_t>(cfg.k), Metrics{});

  const int jobs = std::clamp(cfg.jobs, 1, cfg.k);
  if (jobs <= 1) {
    for (int f = 0; f < cfg.k; ++f) {
      result.per_fold[static_cast<std::size_t>(f)] = run_fold(corpus, base, cfg, result.plan, f);
    }
  } else {
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(cfg.k));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(jobs));
    for (int t = 0; t < jobs; ++t) {
      pool.emplace_back([&, t] {
        for (int f = t; f < cfg.k; f += jobs) {
          try {
            result.per_fold[static_cast<std::size_t>(f)] =
                run_fold(corpus, base, cfg, result.plan, f);
          } catch (...) {
            errors[static_cast<std::size_t>(f)] = std::current_exception();
          }
        }
      });
    }
    for (std::thread& th : pool) th.join();
    for (const std::exception_ptr& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  Metrics& mean = result.mean;
  mean = Metrics{0, 0, 0, 0, 0, 0};
  for (const Metrics& m : result.per_fold) {
    mean.pos_precision_l1 += m.pos_precision_l1;
    mean.pos_precision_l2 += m.pos_precision_l2;
    mean.pos_precision_full += m.pos_precision_full;
    mean.disf_detection_precision += m.disf_detection_precision;
    mean.disf_detection_recall += m.disf_detection_recall;
    mean.disf_classification_precision += m.disf_classification_precision;
  }
  const double k = static_cast<double>(cfg.k);
  mean.pos_precision_l1 /= k;
  mean.pos_precision_l2 /= k;
  mean.pos_precision_full /= k;
  mean.disf_detection_precision /= k;
  mean.disf_detection_recall /= k;
  mean.disf_classification_precision /= k;
  return result;
}

namespace {

void append_kv(std::string* out, std::string_view key, double v) {
  *out += key;
  *out += '=';
  *out += text::format_double(v);
  *out += '\n';
}

void append_row(std::string* out, std::string_view name, double v) {
  std::string row(name);
  if (row.size() < 38) row.append(38 - row.size(), ' ');
  std::string pct = text::format_double_fixed(v * 100.0, 2) + "%";
  if (pct.size() < 8) row.append(8 - pct.size(), ' ');
  row += pct;
  *out += row;
  *out += '\n';
}

void append_metrics_kv(std::string* out, std::string_view prefix, const Metrics& m) {
  const std::string p(prefix);
  append_kv(out, p + "pos.precision.l1", m.pos_precision_l1);
  append_kv(out, p + "pos.precision.l2", m.pos_precision_l2);
  append_kv(out, p + "pos.precision.full", m.pos_precision_full);
  append_kv(out, p + "disfluency.detection.precision", m.disf_detection_precision);
  append_kv(out, p + "disfluency.detection.recall", m.disf_detection_recall);
  append_kv(out, p + "disfluency.classification.precision", m.disf_classification_precision);
}

}  // namespace

std::string format_metrics_report(const CrossValidationResult& result) {
  std::string out;
  out += "folds=" + std::to_string(result.plan.k) + '\n';
  out += "units=" + std::to_string(result.plan.assignment.size()) + '\n';
  append_metrics_kv(&out, "", result.mean);
  for (std::size_t f = 0; f < result.per_fold.size(); ++f) {
    append_metrics_kv(&out, "fold." + std::to_string(f) + ".", result.per_fold[f]);
  }

  out += '\n';
  append_row(&out, "Precision pos-min, level 1", result.mean.pos_precision_l1);
  append_row(&out, "Precision pos-min, level 2", result.mean.pos_precision_l2);
  append_row(&out, "Precision pos-min, full tag", result.mean.pos_precision_full);
  append_row(&out, "Disfluency detection precision", result.mean.disf_detection_precision);
  append_row(&out, "Disfluency detection recall", result.mean.disf_detection_recall);
  append_row(&out, "Disfluency classification precision", result.mean.disf_classification_precision);
  return out;
}

}  // namespace oratag::eval
