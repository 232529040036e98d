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

// Acceptance gate: one line per criterion, [PASS] or [FAIL] with the
// measured numbers and the pinned tolerance. Exits nonzero when any
// criterion fails. argv[1] must name the command-line binary; the
// end-to-end determinism criterion drives it as a subprocess.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oratag/annotation.hpp"
#include "oratag/convert.hpp"
#include "oratag/crf.hpp"
#include "oratag/evaluation.hpp"
#include "oratag/lexicon.hpp"
#include "oratag/pipeline.hpp"
#include "oratag/tagset.hpp"
#include "oratag/textgrid.hpp"
#include "oratag/tokenizer.hpp"
#include "oratag/tsv.hpp"
#include "support/synthetic.hpp"

namespace fs = std::filesystem;
using namespace oratag;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string fmt_sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.1e", v);
  return buf;
}

struct Check {
  bool ok = false;
  std::string detail;
};

// --- random CRF instances for the oracle and gradient criteria -----------

void ensure_block(crf::CrfModel& m, const std::string& key, bool bigram) {
  const std::size_t L = m.labels.size();
  const auto [it, inserted] = m.feature_blocks.try_emplace(key, m.weights.size());
  (void)it;
  if (inserted) m.weights.resize(m.weights.size() + (bigram ? L * L : L), 0.0);
}

crf::LabeledSequence random_sequence(std::mt19937& rng, std::size_t max_len, int vocab,
                                     int num_labels) {
  crf::LabeledSequence s;
  const std::size_t n = 1 + rng() % max_len;
  for (std::size_t t = 0; t < n; ++t) {
    crf::AttrMap a;
    a["w"] = std::string(1, static_cast<char>('a' + rng() % static_cast<unsigned>(vocab)));
    if (rng() % 3 == 0) a["x"] = std::string(1, static_cast<char>('p' + rng() % 3));
    s.positions.push_back(std::move(a));
  }
  if (num_labels > 0) {
    for (std::size_t t = 0; t < n; ++t) {
      s.labels.push_back(std::string(1, static_cast<char>('A' + rng() % static_cast<unsigned>(
                                                                       num_labels))));
    }
  }
  return s;
}

// Labels A.., a mixed unigram/bigram template set, blocks registered from
// the given sequences, weights uniform in [-2, 2].
crf::CrfModel random_model(std::mt19937& rng, int num_labels,
                           const std::vector<crf::LabeledSequence>& seen) {
  crf::CrfModel m;
  for (int i = 0; i < num_labels; ++i) m.labels.emplace_back(1, static_cast<char>('A' + i));
  m.templates = {
      {"w0", {{0, "w"}}, false},   {"wp", {{-1, "w"}}, false}, {"x0", {{0, "x"}}, false},
      {"pr", {{-1, "w"}, {0, "w"}}, false},
      {"B", {}, true},             {"bw", {{0, "w"}}, true},
  };
  for (const auto& seq : seen) {
    const crf::FeatureKeys keys = crf::extract_features(seq, m.templates);
    for (const auto& at : keys.uni) {
      for (const auto& k : at) ensure_block(m, k, false);
    }
    for (const auto& at : keys.big) {
      for (const auto& k : at) ensure_block(m, k, true);
    }
  }
  std::uniform_real_distribution<double> w(-2.0, 2.0);
  for (double& v : m.weights) v = w(rng);
  return m;
}

// Sequence score replayed straight off the weight table, independently of
// the inference code: unknown keys contribute nothing, a unigram key adds
// w[slot + y_t], a bigram key w[slot + y_{t-1} * L + y_t] for t >= 1.
double brute_score(const crf::CrfModel& m, const crf::FeatureKeys& keys,
                   const std::vector<int>& y) {
  const std::size_t L = m.labels.size();
  double s = 0.0;
  for (std::size_t t = 0; t < y.size(); ++t) {
    for (const auto& k : keys.uni[t]) {
      const auto it = m.feature_blocks.find(k);
      if (it != m.feature_blocks.end()) s += m.weights[it->second + static_cast<std::size_t>(y[t])];
    }
    if (t > 0) {
      for (const auto& k : keys.big[t]) {
        const auto it = m.feature_blocks.find(k);
        if (it != m.feature_blocks.end()) {
          s += m.weights[it->second + static_cast<std::size_t>(y[t - 1]) * L +
                         static_cast<std::size_t>(y[t])];
        }
      }
    }
  }
  return s;
}

std::vector<int> assignment_of(std::uint64_t index, std::size_t n, std::size_t L) {
  std::vector<int> y(n);
  for (std::size_t t = 0; t < n; ++t) {
    y[t] = static_cast<int>(index % L);
    index /= L;
  }
  return y;
}

// --- criterion 1: decode and marginals vs exhaustive enumeration ---------

Check criterion_decode_oracle() {
  const auto t0 = Clock::now();
  std::mt19937 rng(101);
  const int cases = 200;
  int exact = 0;
  double worst_marginal = 0.0;

  for (int c = 0; c < cases; ++c) {
    const int L = 1 + static_cast<int>(rng() % 6);
    std::vector<crf::LabeledSequence> seen;
    for (int s = 0; s < 3; ++s) seen.push_back(random_sequence(rng, 5, 4, 0));
    const crf::CrfModel model = random_model(rng, L, seen);
    // A wider probe vocabulary produces keys the model has never seen.
    const crf::LabeledSequence probe = random_sequence(rng, 5, 6, 0);
    const std::size_t n = probe.positions.size();
    const crf::FeatureKeys keys = crf::extract_features(probe, model.templates);

    std::uint64_t total = 1;
    for (std::size_t t = 0; t < n; ++t) total *= static_cast<std::uint64_t>(L);
    std::vector<double> scores(total);
    std::uint64_t best_i = 0;
    for (std::uint64_t i = 0; i < total; ++i) {
      scores[i] = brute_score(model, keys, assignment_of(i, n, static_cast<std::size_t>(L)));
      if (scores[i] > scores[best_i]) best_i = i;
    }
    const double best = scores[best_i];
    double second = -std::numeric_limits<double>::infinity();
    for (const double s : scores) {
      if (s < best && s > second) second = s;
    }

    const std::vector<std::string> decoded = crf::decode(model, probe);
    std::vector<int> dy(n);
    for (std::size_t t = 0; t < n; ++t) dy[t] = model.label_index(decoded[t]);
    const double ds = brute_score(model, keys, dy);
    bool case_ok = ds >= best - 1e-9;
    if (best - second > 1e-6) {
      case_ok = case_ok && dy == assignment_of(best_i, n, static_cast<std::size_t>(L));
    }
    if (case_ok) ++exact;

    // Posterior by enumeration, stabilized through the exact log partition.
    double mx = best;
    double z = 0.0;
    for (const double s : scores) z += std::exp(s - mx);
    const double log_z = mx + std::log(z);
    std::vector<std::vector<double>> post(n, std::vector<double>(static_cast<std::size_t>(L), 0.0));
    for (std::uint64_t i = 0; i < total; ++i) {
      const double p = std::exp(scores[i] - log_z);
      std::uint64_t rest = i;
      for (std::size_t t = 0; t < n; ++t) {
        post[t][rest % static_cast<std::uint64_t>(L)] += p;
        rest /= static_cast<std::uint64_t>(L);
      }
    }
    const std::vector<std::vector<double>> got = crf::marginals(model, probe);
    for (std::size_t t = 0; t < n; ++t) {
      for (std::size_t y = 0; y < static_cast<std::size_t>(L); ++y) {
        worst_marginal = std::max(worst_marginal, std::fabs(got[t][y] - post[t][y]));
      }
    }
  }

  const double elapsed = seconds_since(t0);
  const bool ok = exact == cases && worst_marginal < 1e-9 && elapsed < 60.0;
  return {ok, std::to_string(exact) + "/" + std::to_string(cases) +
                  " decodes optimal, max marginal error " + fmt_sci(worst_marginal) +
                  " (allowed 1e-9); " + fmt(elapsed, 1) + "s of 60s"};
}

// --- criterion 2: analytic gradient vs central finite differences --------

Check criterion_gradient() {
  const auto t0 = Clock::now();
  std::mt19937 rng(202);
  const double h = 1e-5;
  const double sigma = 1.3;
  double worst = 0.0;

  for (int d = 0; d < 20; ++d) {
    const int L = 2 + static_cast<int>(rng() % 3);
    std::vector<crf::LabeledSequence> data;
    const int count = 2 + static_cast<int>(rng() % 2);
    for (int s = 0; s < count; ++s) data.push_back(random_sequence(rng, 4, 4, L));
    crf::CrfModel model = random_model(rng, L, data);
    std::uniform_real_distribution<double> w(-1.0, 1.0);
    for (double& v : model.weights) v = w(rng);

    std::vector<double> grad;
    crf::objective_and_gradient(model, data, &grad, sigma);
    for (std::size_t i = 0; i < model.weights.size(); ++i) {
      const double keep = model.weights[i];
      model.weights[i] = keep + h;
      const double up = crf::objective_and_gradient(model, data, nullptr, sigma);
      model.weights[i] = keep - h;
      const double down = crf::objective_and_gradient(model, data, nullptr, sigma);
      model.weights[i] = keep;
      const double fd = (up - down) / (2.0 * h);
      const double rel =
          std::fabs(fd - grad[i]) / std::max({1.0, std::fabs(fd), std::fabs(grad[i])});
      worst = std::max(worst, rel);
    }
  }

  const double elapsed = seconds_since(t0);
  const bool ok = worst < 1e-4 && elapsed < 60.0;
  return {ok, "20 datasets, worst relative error " + fmt_sci(worst) + " (allowed 1e-4); " +
                  fmt(elapsed, 1) + "s of 60s"};
}

// --- criteria 3 and 4 share the synthetic-corpus evaluation --------------

bool rep_coded(const std::string& cell) { return cell.rfind("REP", 0) == 0; }

struct CorpusRun {
  std::optional<eval::CrossValidationResult> cv;
  std::vector<eval::Metrics> doc_metrics;  // train-on-all, one per document
};

Check criterion_training_quality(CorpusRun* shared) {
  const auto t0 = Clock::now();
  const test::SyntheticCorpus corpus = test::make_corpus(7, 5000);

  // Objective trace of one full training run.
  crf::TrainingConfig tcfg;
  tcfg.max_iterations = 100;
  std::vector<double> trace;
  tcfg.on_iteration = [&trace](int, double obj) { trace.push_back(obj); };
  std::vector<crf::LabeledSequence> prelim;
  const lex::Lexicon lexicon = test::fixture_lexicon();
  for (const annot::Document& doc : corpus.docs) {
    for (auto& s :
         pipe::training_sequences(doc, lexicon, 500, pipe::TrainingTarget::PrelimPos)) {
      prelim.push_back(std::move(s));
    }
  }
  crf::train(prelim, crf::default_templates(), tcfg);
  bool monotone = trace.size() >= 2;
  for (std::size_t i = 1; i < trace.size(); ++i) {
    monotone = monotone && trace[i] <= trace[i - 1] + 1e-9;
  }

  // Ten-fold cross-validation on the same corpus.
  pipe::PipelineResources base;
  base.lexicon = lexicon;
  base.tokenizer_config = corpus.tok_cfg;
  eval::CrossValidationConfig cfg;
  cfg.k = 10;
  cfg.seed = 5;
  cfg.training.max_iterations = 100;
  const eval::CrossValidationResult cv = eval::cross_validate(corpus.docs, base, cfg);
  shared->cv = cv;

  // Filled-pause precision and exact-repetition recall with models trained
  // on the whole corpus; both detectors are lexicon- and rule-driven.
  crf::TrainingConfig full_cfg;
  full_cfg.max_iterations = 100;
  const pipe::PipelineResources res = test::train_resources(corpus, full_cfg);
  std::size_t fil_pred = 0, fil_hit = 0, rep_gold = 0, rep_hit = 0;
  for (const annot::Document& gold : corpus.docs) {
    const annot::Document pred = pipe::annotate(gold, res);
    shared->doc_metrics.push_back(eval::score(gold, pred));
    for (std::size_t i = 0; i < gold.size(); ++i) {
      if (gold.tokens[i].is_pause) continue;
      if (pred.disfluency[i] == "FIL") {
        ++fil_pred;
        if (gold.disfluency[i] == "FIL") ++fil_hit;
      }
      if (rep_coded(gold.disfluency[i])) {
        ++rep_gold;
        if (rep_coded(pred.disfluency[i])) ++rep_hit;
      }
    }
  }
  const double fil_precision = fil_pred == 0 ? 0.0 : static_cast<double>(fil_hit) / fil_pred;
  const double rep_recall = rep_gold == 0 ? 0.0 : static_cast<double>(rep_hit) / rep_gold;

  const double elapsed = seconds_since(t0);
  const bool ok = monotone && cv.mean.pos_precision_full >= 0.97 && fil_pred > 0 &&
                  fil_precision == 1.0 && rep_gold > 0 && rep_recall >= 0.90 && elapsed < 300.0;
  return {ok, "objective non-increasing over " + std::to_string(trace.size()) +
                  " accepted steps: " + (monotone ? "yes" : "NO") + "; 10-fold full-tag precision " +
                  fmt(cv.mean.pos_precision_full, 4) + " (needs 0.97); filled-pause precision " +
                  fmt(fil_precision, 4) + " of " + std::to_string(fil_pred) +
                  " (needs 1.0); repetition recall " + fmt(rep_recall, 4) + " of " +
                  std::to_string(rep_gold) + " (needs 0.90); " + fmt(elapsed, 1) + "s of 300s"};
}

Check criterion_level_monotonicity(const CorpusRun& shared) {
  if (!shared.cv.has_value()) {
    return {false, "no metrics available, the training criterion did not complete"};
  }
  std::vector<const eval::Metrics*> all;
  all.push_back(&shared.cv->mean);
  for (const auto& m : shared.cv->per_fold) all.push_back(&m);
  for (const auto& m : shared.doc_metrics) all.push_back(&m);
  std::size_t violations = 0;
  for (const eval::Metrics* m : all) {
    if (!(m->pos_precision_l1 >= m->pos_precision_l2 &&
          m->pos_precision_l2 >= m->pos_precision_full)) {
      ++violations;
    }
  }
  return {violations == 0, std::to_string(all.size()) +
                               " metric sets checked for l1 >= l2 >= full at zero tolerance, " +
                               std::to_string(violations) + " violations"};
}

// --- criterion 5: annotation output always satisfies the invariants ------

Check criterion_congruence() {
  const auto t0 = Clock::now();
  const test::SyntheticCorpus corpus = test::make_corpus(31, 1500);
  crf::TrainingConfig tcfg;
  tcfg.max_iterations = 60;
  const pipe::PipelineResources res = test::train_resources(corpus, tcfg, true);

  std::mt19937 rng(505);
  const int runs = 1000;
  int violations = 0;
  for (int i = 0; i < runs; ++i) {
    const annot::Document doc = test::random_token_document(rng, 40);
    const annot::Document out = pipe::annotate(doc, res);
    if (!annot::validate(out).empty()) ++violations;
  }
  const double elapsed = seconds_since(t0);
  return {violations == 0, std::to_string(runs) + " randomized inputs annotated, " +
                               std::to_string(violations) + " with validate() violations; " +
                               fmt(elapsed, 1) + "s"};
}

// --- criterion 6: serialization round trips and fuzz robustness ----------

bool structured_io_error(const std::exception_ptr& e) {
  try {
    std::rethrow_exception(e);
  } catch (const io::ParseError&) {
    return true;
  } catch (const io::EncodingError&) {
    return true;
  } catch (const io::InvariantError&) {
    return true;
  } catch (const io::MissingColumn&) {
    return true;
  } catch (const annot::OverlapError&) {
    return true;
  } catch (const annot::MisalignedSpan&) {
    return true;
  } catch (...) {
    return false;
  }
}

std::string mutate(std::mt19937& rng, std::string s) {
  const int edits = 1 + static_cast<int>(rng() % 8);
  for (int e = 0; e < edits && !s.empty(); ++e) {
    const std::size_t at = rng() % s.size();
    switch (rng() % 4) {
      case 0:
        s[at] = static_cast<char>(rng() % 256);
        break;
      case 1:
        s.erase(at, 1 + rng() % std::min<std::size_t>(40, s.size() - at));
        break;
      case 2:
        s.insert(at, std::string(1 + rng() % 6, static_cast<char>(rng() % 256)));
        break;
      default:
        s.resize(at);
        break;
    }
  }
  return s;
}

Check criterion_round_trips() {
  const auto t0 = Clock::now();
  std::mt19937 rng(606);

  // Lossless tab-separated round trip, hostile cell content included.
  int tsv_fail = 0;
  const int docs = 500;
  for (int i = 0; i < docs; ++i) {
    const annot::Document doc = test::random_annotated_document(rng, i % 2 == 1);
    const std::string bytes = io::write_tsv(doc);
    const annot::Document back = io::read_tsv(bytes);
    if (!(back == doc) || io::write_tsv(back) != bytes) ++tsv_fail;
  }

  // Semantic TextGrid round trip: texts and tier values exact, times
  // within a microsecond. Metadata is out of scope for the grid layout.
  int grid_fail = 0;
  for (int i = 0; i < docs; ++i) {
    const annot::Document doc = test::random_annotated_document(rng, false);
    const annot::Document back =
        io::textgrid_to_document(io::read_textgrid(io::write_textgrid(io::document_to_textgrid(doc))));
    bool same = back.size() == doc.size() && back.tok_mwu.size() == doc.tok_mwu.size() &&
                back.discourse == doc.discourse;
    for (std::size_t t = 0; same && t < doc.size(); ++t) {
      same = back.tokens[t].text == doc.tokens[t].text &&
             std::fabs(back.tokens[t].t_min - doc.tokens[t].t_min) <= 1e-6 &&
             std::fabs(back.tokens[t].t_max - doc.tokens[t].t_max) <= 1e-6 &&
             back.tokens[t].is_pause == doc.tokens[t].is_pause &&
             back.pos_min[t] == doc.pos_min[t] && back.disfluency[t] == doc.disfluency[t];
    }
    for (std::size_t s = 0; same && s < doc.tok_mwu.size(); ++s) {
      same = back.tok_mwu[s] == doc.tok_mwu[s] && back.pos_mwu[s] == doc.pos_mwu[s];
    }
    if (!same) ++grid_fail;
  }

  // Parser fuzz: random bytes and mutations of valid files must either
  // parse or raise one of the typed errors, never anything else.
  const std::string valid_tsv = io::write_tsv(test::random_annotated_document(rng, false));
  const std::string valid_grid =
      io::write_textgrid(io::document_to_textgrid(test::make_corpus(61, 300).docs[0]));
  int unstructured = 0;
  const int fuzz_runs = 10000;
  for (int i = 0; i < fuzz_runs; ++i) {
    std::string input;
    switch (i % 4) {
      case 0: {
        input.resize(rng() % 400);
        for (char& c : input) c = static_cast<char>(rng() % 256);
        break;
      }
      case 1:
        input = mutate(rng, valid_tsv);
        break;
      case 2:
        input = mutate(rng, valid_grid);
        break;
      default:
        input = mutate(rng, mutate(rng, i % 8 < 4 ? valid_grid : valid_tsv));
        break;
    }
    try {
      io::read_tsv(input);
    } catch (...) {
      if (!structured_io_error(std::current_exception())) ++unstructured;
    }
    try {
      const io::TextGrid grid = io::read_textgrid(input);
      io::textgrid_to_document(grid);
    } catch (...) {
      if (!structured_io_error(std::current_exception())) ++unstructured;
    }
  }

  const double elapsed = seconds_since(t0);
  const bool ok = tsv_fail == 0 && grid_fail == 0 && unstructured == 0;
  return {ok, std::to_string(docs) + " docs per format: " + std::to_string(tsv_fail) +
                  " tsv mismatches, " + std::to_string(grid_fail) + " grid mismatches; " +
                  std::to_string(fuzz_runs) + " fuzz inputs, " + std::to_string(unstructured) +
                  " unstructured failures; " + fmt(elapsed, 1) + "s"};
}

// --- criterion 7: balanced deterministic fold partition -------------------

Check criterion_fold_partition() {
  const auto t0 = Clock::now();
  const test::SyntheticCorpus corpus = test::make_corpus(7, 5000);
  const int k = 10;

  std::size_t expected_units = 0;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> units;
  for (const annot::Document& doc : corpus.docs) {
    units.push_back(annot::psu_segments(doc, 500));
    expected_units += units.back().size();
  }

  bool ok = true;
  std::string why;
  for (unsigned seed : {0u, 1u, 2u}) {
    const eval::FoldPlan plan = eval::split_folds(corpus.docs, k, 500, seed);
    if (plan.assignment.size() != expected_units) {
      ok = false;
      why = "unit count mismatch";
      break;
    }
    std::set<std::pair<std::size_t, std::size_t>> seen;
    std::map<std::string, std::map<int, std::size_t>> per_stratum;
    for (const eval::PsuRef& ref : plan.assignment) {
      const bool fresh = seen.insert({ref.doc, ref.unit}).second;
      const bool bounds = ref.fold >= 0 && ref.fold < k && ref.doc < units.size() &&
                          ref.unit < units[ref.doc].size() &&
                          units[ref.doc][ref.unit] == std::make_pair(ref.begin, ref.end);
      if (!fresh || !bounds) {
        ok = false;
        why = "duplicate or misranged unit";
      }
      per_stratum[ref.stratum][ref.fold] += 1;
    }
    for (const auto& [stratum, folds] : per_stratum) {
      std::size_t lo = expected_units, hi = 0;
      for (int f = 0; f < k; ++f) {
        const auto it = folds.find(f);
        const std::size_t n = it == folds.end() ? 0 : it->second;
        lo = std::min(lo, n);
        hi = std::max(hi, n);
      }
      if (hi - lo > 1) {
        ok = false;
        why = "stratum " + stratum + " fold spread " + std::to_string(hi - lo);
      }
    }
    const eval::FoldPlan again = eval::split_folds(corpus.docs, k, 500, seed);
    if (!(again.assignment == plan.assignment)) {
      ok = false;
      why = "not deterministic under seed " + std::to_string(seed);
    }
  }

  const double elapsed = seconds_since(t0);
  return {ok, std::to_string(expected_units) + " units, k=10, seeds 0..2: " +
                  (ok ? "every unit exactly once, spread <= 1, repeatable" : why) + "; " +
                  fmt(elapsed, 1) + "s"};
}

// --- criterion 8: byte-identical end-to-end command-line runs ------------

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "<<unreadable:" + path.string() + ">>";
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

void spill(const fs::path& path, std::string_view content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

Check criterion_cli_determinism(const std::string& cli) {
  if (cli.empty()) return {false, "no command-line binary given (argv[1])"};
  const auto t0 = Clock::now();

  const fs::path scratch =
      fs::temp_directory_path() /
      ("oratag-acceptance-" +
       std::to_string(std::chrono::steady_clock::now().time_since_epoch().count() % 100000000));
  const fs::path gold = scratch / "gold";
  const fs::path lexicon = scratch / "lexicon.tsv";

  const test::SyntheticCorpus corpus = test::make_corpus(29, 2000);
  std::vector<std::string> stems;
  for (const annot::Document& doc : corpus.docs) {
    stems.push_back(doc.meta.sample_id);
    spill(gold / (doc.meta.sample_id + ".tsv"), io::write_tsv(doc));
  }
  spill(lexicon, test::fixture_lexicon_text());

  bool ran_ok = true;
  const auto run = [&](int which) {
    const fs::path root = scratch / ("run" + std::to_string(which));
    fs::create_directories(root);
    const std::string common = " --lexicon " + lexicon.string();
    const std::vector<std::string> cmds = {
        cli + " train " + gold.string() + " --out " + (root / "models").string() + common +
            " --max-iterations 60 --with-disfluency-model > " + (root / "train.out").string() +
            " 2>&1",
        cli + " annotate --in " + gold.string() + " --out " + (root / "out").string() +
            " --models " + (root / "models").string() + common + " > " +
            (root / "annotate.out").string() + " 2>&1",
        cli + " evaluate " + gold.string() + common +
            " --k 3 --seed 3 --max-iterations 40 --report " + (root / "report.txt").string() +
            " > " + (root / "evaluate.out").string() + " 2>&1",
    };
    for (const std::string& cmd : cmds) {
      if (std::system(cmd.c_str()) != 0) ran_ok = false;
    }
  };
  run(1);
  run(2);

  std::vector<std::string> rels = {"models/prelim-pos.crf", "models/final-pos.crf",
                                   "models/disfluency.crf", "models/training.log", "report.txt"};
  for (const std::string& stem : stems) rels.push_back("out/" + stem + ".tsv");
  std::size_t differing = 0;
  for (const std::string& rel : rels) {
    if (slurp(scratch / "run1" / rel) != slurp(scratch / "run2" / rel)) ++differing;
  }

  std::error_code ec;
  fs::remove_all(scratch, ec);

  const double elapsed = seconds_since(t0);
  const bool ok = ran_ok && differing == 0;
  return {ok, std::string(ran_ok ? "train+annotate+evaluate ran twice" : "a subprocess FAILED") +
                  ", " + std::to_string(rels.size()) + " artifacts compared, " +
                  std::to_string(differing) + " differ; " + fmt(elapsed, 1) + "s"};
}

// --- criterion 9: single-threaded decode throughput ----------------------

Check criterion_throughput() {
  const auto t0 = Clock::now();

  crf::CrfModel model;
  for (const auto& entry : tagset::TagRegistry::builtin().entries()) {
    model.labels.push_back(entry.tag);
  }
  model.templates = crf::default_templates();

  const test::SyntheticCorpus corpus = test::make_corpus(41, 3000);
  const lex::Lexicon lexicon = test::fixture_lexicon();
  std::vector<crf::LabeledSequence> seqs;
  for (const annot::Document& doc : corpus.docs) {
    for (auto& s :
         pipe::training_sequences(doc, lexicon, 500, pipe::TrainingTarget::PrelimPos)) {
      s.labels.clear();
      seqs.push_back(std::move(s));
    }
  }
  for (const auto& seq : seqs) {
    const crf::FeatureKeys keys = crf::extract_features(seq, model.templates);
    for (const auto& at : keys.uni) {
      for (const auto& k : at) ensure_block(model, k, false);
    }
    for (const auto& at : keys.big) {
      for (const auto& k : at) ensure_block(model, k, true);
    }
  }
  std::mt19937 rng(909);
  std::uniform_real_distribution<double> w(-0.5, 0.5);
  for (double& v : model.weights) v = w(rng);

  for (const auto& seq : seqs) crf::decode(model, seq);  // warm caches

  const auto m0 = Clock::now();
  std::size_t tokens = 0;
  double elapsed_decode = 0.0;
  do {
    for (const auto& seq : seqs) {
      crf::decode(model, seq);
      tokens += seq.positions.size();
    }
    elapsed_decode = seconds_since(m0);
  } while (elapsed_decode < 1.0);
  const double rate = static_cast<double>(tokens) / elapsed_decode;

  const double elapsed = seconds_since(t0);
  return {rate >= 5000.0, std::to_string(model.labels.size()) + " labels, " +
                              std::to_string(tokens) + " tokens in " + fmt(elapsed_decode, 2) +
                              "s: " + fmt(rate, 0) + " tokens/s (needs 5000); " + fmt(elapsed, 1) +
                              "s total"};
}

int run_all(const std::string& cli) {
  struct Entry {
    const char* name;
    std::function<Check()> body;
  };
  CorpusRun shared;
  const std::vector<Entry> entries = {
      {"decode and marginals match exhaustive enumeration",
       [] { return criterion_decode_oracle(); }},
      {"analytic gradient matches finite differences", [] { return criterion_gradient(); }},
      {"training objective is monotone and cross-validation reaches the bar",
       [&shared] { return criterion_training_quality(&shared); }},
      {"projection-level precision is monotone",
       [&shared] { return criterion_level_monotonicity(shared); }},
      {"annotation output always satisfies the tier invariants",
       [] { return criterion_congruence(); }},
      {"format round trips hold and fuzz inputs fail structurally",
       [] { return criterion_round_trips(); }},
      {"fold partition is exact, balanced, and deterministic",
       [] { return criterion_fold_partition(); }},
      {"end-to-end command-line runs are byte-identical",
       [&cli] { return criterion_cli_determinism(cli); }},
      {"decoder throughput meets the floor", [] { return criterion_throughput(); }},
  };

  int failures = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    Check c;
    try {
      c = entries[i].body();
    } catch (const std::exception& e) {
      c = {false, std::string("exception: ") + e.what()};
    } catch (...) {
      c = {false, "unknown exception"};
    }
    std::printf("[%s] criterion %zu, %s: %s\n", c.ok ? "PASS" : "FAIL", i + 1, entries[i].name,
                c.detail.c_str());
    std::fflush(stdout);
    if (!c.ok) ++failures;
  }
  return failures;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  const int failures = run_all(cli);
  if (failures > 0) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
