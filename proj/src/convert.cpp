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

#include "oratag/convert.hpp"

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

namespace oratag::io {

namespace {

IntervalTier value_tier(const annot::Document& doc, std::string name,
                        const std::vector<std::string>& values) {
  IntervalTier tier;
  tier.name = std::move(name);
  for (std::size_t i = 0; i < doc.size(); ++i) {
    tier.intervals.push_back(Interval{doc.tokens[i].t_min, doc.tokens[i].t_max, values[i]});
  }
  return tier;
}

const Interval* interval_at(const IntervalTier& tier, double t) {
  for (const Interval& iv : tier.intervals) {
    if (t >= iv.xmin && t < iv.xmax) return &iv;
  }
  // The very last boundary belongs to the last interval.
  if (!tier.intervals.empty() && t == tier.intervals.back().xmax) return &tier.intervals.back();
  return nullptr;
}

const IntervalTier* find_tier(const TextGrid& grid, std::string_view name) {
  for (const IntervalTier& tier : grid.tiers) {
    if (tier.name == name) return &tier;
  }
  return nullptr;
}

}  // namespace

TextGrid document_to_textgrid(const annot::Document& doc) {
  TextGrid grid;
  if (doc.size() == 0) {
    grid.xmax = 1.0;
  } else {
    grid.xmin = doc.tokens.front().t_min;
    grid.xmax = doc.tokens.front().t_max;
    for (const annot::Token& t : doc.tokens) {
      grid.xmin = std::min(grid.xmin, t.t_min);
      grid.xmax = std::max(grid.xmax, t.t_max);
    }
  }

  // One interval tier cannot hold overlapping tokens, however the document
  // came to contain them (typically interleaved speakers).
  double covered = grid.xmin;
  std::size_t covering = 0;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const annot::Token& t = doc.tokens[i];
    if (i > 0 && t.t_min < covered - 1e-9) {
      throw InvariantError("tokens " + std::to_string(covering) + " and " + std::to_string(i) +
                           " overlap in time and cannot share an interval tier");
    }
    if (i == 0 || t.t_max > covered) {
      covered = t.t_max;
      covering = i;
    }
  }

  IntervalTier tok_min;
  tok_min.name = "tok-min";
  for (const annot::Token& t : doc.tokens) {
    tok_min.intervals.push_back(Interval{t.t_min, t.t_max, t.text});
  }

  IntervalTier tok_mwu;
  tok_mwu.name = "tok-mwu";
  IntervalTier pos_mwu;
  pos_mwu.name = "pos-mwu";
  for (std::size_t s = 0; s < doc.tok_mwu.size(); ++s) {
    const annot::TierValue& span = doc.tok_mwu[s];
    const double lo = doc.tokens[span.begin].t_min;
    const double hi = doc.tokens[span.end - 1].t_max;
    tok_mwu.intervals.push_back(Interval{lo, hi, span.value});
    pos_mwu.intervals.push_back(Interval{lo, hi, s < doc.pos_mwu.size() ? doc.pos_mwu[s] : ""});
  }

  IntervalTier discourse;
  discourse.name = "discourse";
  for (const annot::TierValue& span : doc.discourse) {
    discourse.intervals.push_back(
        Interval{doc.tokens[span.begin].t_min, doc.tokens[span.end - 1].t_max, span.value});
  }

  grid.tiers.push_back(make_contiguous(std::move(tok_min), grid.xmin, grid.xmax));
  grid.tiers.push_back(
      make_contiguous(value_tier(doc, "pos-min", doc.pos_min), grid.xmin, grid.xmax));
  grid.tiers.push_back(
      make_contiguous(value_tier(doc, "disfluency", doc.disfluency), grid.xmin, grid.xmax));
  grid.tiers.push_back(make_contiguous(std::move(tok_mwu), grid.xmin, grid.xmax));
  grid.tiers.push_back(make_contiguous(std::move(pos_mwu), grid.xmin, grid.xmax));
  grid.tiers.push_back(make_contiguous(std::move(discourse), grid.xmin, grid.xmax));
  return grid;
}

annot::Document textgrid_to_document(const TextGrid& grid, std::string_view tok_tier,
                                     std::string_view speaker_tier,
                                     std::string_view pause_symbol) {
  const IntervalTier* toks = find_tier(grid, tok_tier);
  if (toks == nullptr) {
    throw InvariantError("token tier '" + std::string(tok_tier) + "' not found");
  }
  const IntervalTier* speakers =
      speaker_tier.empty() ? nullptr : find_tier(grid, speaker_tier);

  std::vector<annot::Token> tokens;
  for (const Interval& iv : toks->intervals) {
    if (iv.text.empty()) continue;
    annot::Token t;
    t.text = iv.text;
    t.t_min = iv.xmin;
    t.t_max = iv.xmax;
    t.is_pause = iv.text == pause_symbol;
    if (speakers != nullptr) {
      if (const Interval* sp = interval_at(*speakers, (iv.xmin + iv.xmax) / 2.0)) {
        t.speaker = sp->text;
      }
    }
    tokens.push_back(std::move(t));
  }

  annot::Document doc = annot::new_document(std::move(tokens));
  doc.pause_symbol = std::string(pause_symbol);
  const std::size_t n = doc.size();

  std::vector<double> mid(n);
  for (std::size_t i = 0; i < n; ++i) {
    mid[i] = (doc.tokens[i].t_min + doc.tokens[i].t_max) / 2.0;
  }

  if (const IntervalTier* tier = find_tier(grid, "pos-min")) {
    for (std::size_t i = 0; i < n; ++i) {
      if (const Interval* iv = interval_at(*tier, mid[i])) doc.pos_min[i] = iv->text;
    }
  }
  if (const IntervalTier* tier = find_tier(grid, "disfluency")) {
    for (std::size_t i = 0; i < n; ++i) {
      if (const Interval* iv = interval_at(*tier, mid[i])) doc.disfluency[i] = iv->text;
    }
  }

  // Span tiers: one span per non-empty interval, covering the tokens whose
  // midpoints fall inside it.
  const auto covered = [&](const Interval& iv) -> std::pair<std::size_t, std::size_t> {
    std::size_t first = n, last = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (mid[i] >= iv.xmin && mid[i] < iv.xmax) {
        if (first == n) first = i;
        last = i;
      }
    }
    return {first, last};
  };

  if (const IntervalTier* tier = find_tier(grid, "tok-mwu")) {
    for (const Interval& iv : tier->intervals) {
      if (iv.text.empty()) continue;
      const auto [first, last] = covered(iv);
      if (first == n || last <= first) continue;  // nothing to merge
      // Direct span surgery, taking the grid's grouping as-is; only applied
      // when the interval aligns with current span boundaries.
      const std::size_t s0 = doc.mwu_index_of(first);
      const std::size_t s1 = doc.mwu_index_of(last);
      if (doc.tok_mwu[s0].begin != first || doc.tok_mwu[s1].end != last + 1) continue;
      const annot::TierValue merged{first, last + 1, doc.span_text(first, last + 1)};
      doc.tok_mwu.erase(doc.tok_mwu.begin() + static_cast<std::ptrdiff_t>(s0),
                        doc.tok_mwu.begin() + static_cast<std::ptrdiff_t>(s1 + 1));
      doc.tok_mwu.insert(doc.tok_mwu.begin() + static_cast<std::ptrdiff_t>(s0), merged);
      doc.pos_mwu.erase(doc.pos_mwu.begin() + static_cast<std::ptrdiff_t>(s0),
                        doc.pos_mwu.begin() + static_cast<std::ptrdiff_t>(s1 + 1));
      doc.pos_mwu.insert(doc.pos_mwu.begin() + static_cast<std::ptrdiff_t>(s0), std::string());
    }
  }
  if (const IntervalTier* tier = find_tier(grid, "pos-mwu")) {
    for (std::size_t s = 0; s < doc.tok_mwu.size(); ++s) {
      const std::size_t i = doc.tok_mwu[s].begin;
      if (const Interval* iv = interval_at(*tier, mid[i])) doc.pos_mwu[s] = iv->text;
    }
  }
  if (const IntervalTier* tier = find_tier(grid, "discourse")) {
    std::size_t prev_end = 0;
    for (const Interval& iv : tier->intervals) {
      if (iv.text.empty()) continue;
      const auto [first, last] = covered(iv);
      if (first == n || first < prev_end) continue;
      doc.discourse.push_back(annot::TierValue{first, last + 1, iv.text});
      prev_end = last + 1;
    }
  }
  return doc;
}

}  // namespace oratag::io
