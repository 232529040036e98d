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

#include "oratag/annotation.hpp"

#include <algorithm>
#include <map>

namespace oratag::annot {

std::size_t Document::mwu_index_of(std::size_t i) const {
  for (std::size_t s = 0; s < tok_mwu.size(); ++s) {
    if (i >= tok_mwu[s].begin && i < tok_mwu[s].end) return s;
  }
  return tok_mwu.size();
}

std::string Document::span_text(std::size_t begin, std::size_t end) const {
  std::string out;
  for (std::size_t i = begin; i < end && i < tokens.size(); ++i) {
    if (!out.empty()) out += ' ';
    out += tokens[i].text;
  }
  return out;
}

Document new_document(std::vector<Token> tokens) {
  // Per-speaker time ordering and non-overlap.
  std::map<std::string, std::pair<double, std::size_t>> last_end;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const Token& t = tokens[i];
    if (t.t_min > t.t_max) {
      throw OverlapError("token " + std::to_string(i) + " has tMin > tMax");
    }
    auto it = last_end.find(t.speaker);
    if (it != last_end.end() && t.t_min < it->second.first - 1e-9) {
      throw OverlapError("token " + std::to_string(i) + " overlaps token " +
                         std::to_string(it->second.second) + " of speaker '" + t.speaker + "'");
    }
    last_end[t.speaker] = {std::max(t.t_max, it == last_end.end() ? t.t_max : it->second.first),
                           i};
  }

  Document doc;
  doc.tokens = std::move(tokens);
  doc.pos_min.assign(doc.tokens.size(), "");
  doc.disfluency.assign(doc.tokens.size(), "");
  doc.tok_mwu.reserve(doc.tokens.size());
  for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
    doc.tok_mwu.push_back(TierValue{i, i + 1, doc.tokens[i].text});
  }
  doc.pos_mwu.assign(doc.tok_mwu.size(), "");
  return doc;
}

void group_mwu(Document& doc, std::size_t begin, std::size_t end, const tagset::PosTag& tag) {
  if (begin >= end || end > doc.tokens.size()) {
    throw MisalignedSpan("span [" + std::to_string(begin) + ", " + std::to_string(end) +
                         ") out of range");
  }
  std::size_t first = doc.tok_mwu.size(), last = doc.tok_mwu.size();
  for (std::size_t s = 0; s < doc.tok_mwu.size(); ++s) {
    if (doc.tok_mwu[s].begin == begin) first = s;
    if (doc.tok_mwu[s].end == end) last = s;
  }
  if (first == doc.tok_mwu.size() || last == doc.tok_mwu.size() || first > last) {
    throw MisalignedSpan("span [" + std::to_string(begin) + ", " + std::to_string(end) +
                         ") does not align with tok-mwu boundaries");
  }

  TierValue merged{begin, end, doc.span_text(begin, end)};
  doc.tok_mwu.erase(doc.tok_mwu.begin() + first, doc.tok_mwu.begin() + last + 1);
  doc.tok_mwu.insert(doc.tok_mwu.begin() + first, merged);
  doc.pos_mwu.erase(doc.pos_mwu.begin() + first, doc.pos_mwu.begin() + last + 1);
  doc.pos_mwu.insert(doc.pos_mwu.begin() + first, tagset::format_pos_tag(tag));
}

std::vector<Violation> validate(const Document& doc) {
  std::vector<Violation> out;
  const std::size_t n = doc.tokens.size();

  if (doc.pos_min.size() != n) out.push_back({"pos-min", doc.pos_min.size(), "CongruenceViolation"});
  if (doc.disfluency.size() != n) {
    out.push_back({"disfluency", doc.disfluency.size(), "CongruenceViolation"});
  }
  if (doc.pos_mwu.size() != doc.tok_mwu.size()) {
    out.push_back({"pos-mwu", doc.pos_mwu.size(), "CongruenceViolation"});
  }

  // tok-mwu spans partition [0, n).
  std::size_t expect = 0;
  for (std::size_t s = 0; s < doc.tok_mwu.size(); ++s) {
    const auto& span = doc.tok_mwu[s];
    if (span.begin != expect || span.end <= span.begin || span.end > n) {
      out.push_back({"tok-mwu", s, "PartitionViolation"});
      break;
    }
    expect = span.end;
  }
  if (out.empty() || out.back().rule != "PartitionViolation") {
    if (expect != n) out.push_back({"tok-mwu", doc.tok_mwu.size(), "PartitionViolation"});
  }

  // discourse spans: within range, disjoint, ordered.
  std::size_t prev_end = 0;
  for (std::size_t s = 0; s < doc.discourse.size(); ++s) {
    const auto& span = doc.discourse[s];
    if (span.begin < prev_end || span.end <= span.begin || span.end > n) {
      out.push_back({"discourse", s, "SpanViolation"});
      break;
    }
    prev_end = span.end;
  }

  // per-speaker time ordering / overlap, pause symbol convention.
  std::map<std::string, double> last_end;
  for (std::size_t i = 0; i < n; ++i) {
    const Token& t = doc.tokens[i];
    if (t.t_min > t.t_max) out.push_back({"tok-min", i, "TimeOrderViolation"});
    auto it = last_end.find(t.speaker);
    if (it != last_end.end() && t.t_min < it->second - 1e-9) {
      out.push_back({"tok-min", i, "OverlapViolation"});
    }
    auto& e = last_end[t.speaker];
    e = std::max(e, t.t_max);
    if (t.is_pause && t.text != doc.pause_symbol) {
      out.push_back({"tok-min", i, "PauseSymbolViolation"});
    }
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> psu_segments(const Document& doc,
                                                              int threshold_ms) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  const double threshold_s = threshold_ms / 1000.0;
  const std::size_t n = doc.tokens.size();

  std::size_t i = 0;
  while (i < n) {
    // Skip pauses preceding the unit.
    while (i < n && doc.tokens[i].is_pause) ++i;
    if (i >= n) break;
    std::size_t begin = i;
    std::size_t last_word = i;
    while (i < n) {
      const Token& t = doc.tokens[i];
      if (t.is_pause && t.duration() >= threshold_s - 1e-9) break;
      if (!t.is_pause) last_word = i;
      ++i;
    }
    out.emplace_back(begin, last_word + 1);
  }
  return out;
}

}  // namespace oratag::annot
