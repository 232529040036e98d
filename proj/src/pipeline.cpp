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

#include "oratag/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "oratag/text_util.hpp"

namespace oratag::pipe {

namespace {

// Pause class of the neighbor at i+dir as a feature value. A pause the
// classifier has not seen yet reads as plain "pause".
std::string neighbor_pause(const annot::Document& doc, std::size_t i, int dir) {
  const std::size_t n = doc.size();
  if (dir < 0 && i == 0) return "none";
  const std::size_t j = dir < 0 ? i - 1 : i + 1;
  if (j >= n) return "none";
  const annot::Token& t = doc.tokens[j];
  if (!t.is_pause) return "none";
  switch (t.pause_class) {
    case annot::PauseClass::Short:
      return "short";
    case annot::PauseClass::Long:
      return "long";
    case annot::PauseClass::None:
      return "pause";
  }
  return "pause";
}

crf::LabeledSequence build_sequence(const annot::Document& doc,
                                    const std::vector<std::size_t>& indices,
                                    const lex::Lexicon& lexicon) {
  crf::LabeledSequence seq;
  seq.positions.reserve(indices.size());
  for (std::size_t i : indices) seq.positions.push_back(token_attributes(doc, i, lexicon));
  return seq;
}

std::vector<std::size_t> nonpause_indices(const annot::Document& doc, std::size_t begin,
                                          std::size_t end) {
  std::vector<std::size_t> out;
  for (std::size_t i = begin; i < end; ++i) {
    if (!doc.tokens[i].is_pause) out.push_back(i);
  }
  return out;
}

bool is_fluent(const annot::Document& doc, std::size_t i) {
  if (doc.tokens[i].is_pause) return false;
  const std::string& d = doc.disfluency[i];
  return d != "FIL" && d != "FST" && d != "WDP";
}

std::vector<std::size_t> fluent_indices(const annot::Document& doc, std::size_t begin,
                                        std::size_t end) {
  std::vector<std::size_t> out;
  for (std::size_t i = begin; i < end; ++i) {
    if (is_fluent(doc, i)) out.push_back(i);
  }
  return out;
}

// Category prefix of a formatted tag ("DET:def" -> "DET").
std::string_view tag_category(std::string_view tag) {
  const std::size_t colon = tag.find(':');
  return colon == std::string_view::npos ? tag : tag.substr(0, colon);
}

void check_pos_labels(const crf::CrfModel& model, const tagset::TagRegistry& registry,
                      std::string_view which) {
  for (const std::string& label : model.labels) {
    try {
      tagset::parse_pos_tag(label, registry);
    } catch (const std::exception& e) {
      throw LabelOutsideRegistry(std::string(which) + " model label '" + label +
                                 "' is not in the tag registry: " + e.what());
    }
  }
}

// Decodes one pause unit with per-token locks and writes the result back to
// pos-min, leaving locked tokens untouched.
void decode_into_pos(annot::Document* doc, const StepState& s, const crf::CrfModel& model,
                     const lex::Lexicon& lexicon, const std::vector<std::size_t>& indices) {
  if (indices.empty()) return;
  crf::LabeledSequence seq = build_sequence(*doc, indices, lexicon);
  std::vector<int> locks(indices.size(), -1);
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const std::size_t i = indices[k];
    if (s.locked[i]) locks[k] = model.label_index(doc->pos_min[i]);
  }
  const std::vector<std::string> decoded = crf::decode(model, seq, &locks);
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const std::size_t i = indices[k];
    if (!s.locked[i]) doc->pos_min[i] = decoded[k];
  }
}

}  // namespace

crf::AttrMap token_attributes(const annot::Document& doc, std::size_t i,
                              const lex::Lexicon& lexicon) {
  crf::AttrMap a;
  const annot::Token& t = doc.tokens[i];
  const std::string lower = text::fold_case(t.text);
  a["text"] = t.text;
  a["lower"] = lower;
  for (std::size_t k = 1; k <= 4; ++k) {
    const std::string key_p = "pre" + std::to_string(k);
    const std::string key_s = "suf" + std::to_string(k);
    a[key_p] = text::utf8_prefix(lower, k);
    a[key_s] = text::utf8_suffix(lower, k);
  }
  a["shape"] = text::shape(t.text);

  std::string cand;
  for (const std::string& tag : lexicon.lookup(t.text).tags) {
    if (!cand.empty()) cand += ',';
    cand += tag;
  }
  a["cand"] = std::move(cand);

  a["pauseBefore"] = neighbor_pause(doc, i, -1);
  a["pauseAfter"] = neighbor_pause(doc, i, +1);
  a["fst"] = t.false_start ? "1" : "0";
  a["wdp"] = t.intra_word_pause ? "1" : "0";
  if (i < doc.pos_min.size() && !doc.pos_min[i].empty()) a["pos"] = doc.pos_min[i];
  return a;
}

void preprocess(StepState* s, const lex::Lexicon& lexicon) {
  annot::Document& doc = s->doc;
  const std::size_t n = doc.size();
  s->candidates.assign(n, {});
  s->locked.assign(n, false);

  for (std::size_t i = 0; i < n; ++i) {
    const annot::Token& t = doc.tokens[i];
    if (t.is_pause) {
      doc.pos_min[i] = doc.pause_symbol;
      doc.disfluency[i] = "SIL";
      s->locked[i] = true;
      continue;
    }
    s->candidates[i] = lexicon.lookup(t.text);
    const lex::Lexicon::Entry& e = s->candidates[i];
    if (e.filled_pause) {
      doc.disfluency[i] = "FIL";
      doc.pos_min[i] = "ITJ";
      s->locked[i] = true;
    } else if (e.tags.size() == 1) {
      doc.pos_min[i] = e.tags[0];
      s->locked[i] = true;
    }
    if (t.false_start && doc.disfluency[i].empty()) doc.disfluency[i] = "FST";
  }
}

void preliminary_pos(StepState* s, const crf::CrfModel& model, const lex::Lexicon& lexicon,
                     const tagset::TagRegistry* registry, int psu_threshold_ms) {
  if (registry != nullptr) check_pos_labels(model, *registry, "preliminary");
  const auto segments = annot::psu_segments(s->doc, psu_threshold_ms);
  for (const auto& [b, e] : segments) {
    decode_into_pos(&s->doc, *s, model, lexicon, nonpause_indices(s->doc, b, e));
  }
}

void detect_boundaries(StepState* s, int psu_threshold_ms) {
  s->segments = annot::psu_segments(s->doc, psu_threshold_ms);
}

void detect_simple_disfluencies(StepState* s, double lengthening_z) {
  annot::Document& doc = s->doc;
  const std::size_t n = doc.size();

  for (std::size_t i = 0; i < n; ++i) {
    if (!doc.tokens[i].is_pause && doc.tokens[i].intra_word_pause && doc.disfluency[i].empty()) {
      doc.disfluency[i] = "WDP";
    }
  }

  // Lengthening: per speaker, duration per character against the speaker's
  // own distribution. Tokens right before a pause (or document-final) carry
  // ordinary phrase-final lengthening and are skipped.
  std::map<std::string, std::vector<std::size_t>> by_speaker;
  for (std::size_t i = 0; i < n; ++i) {
    const annot::Token& t = doc.tokens[i];
    if (t.is_pause) continue;
    if (text::codepoint_count(t.text) == 0) continue;
    by_speaker[t.speaker].push_back(i);
  }
  for (const auto& [speaker, idxs] : by_speaker) {
    if (idxs.size() < 2) continue;
    std::vector<double> dpc(idxs.size());
    double mean = 0.0;
    for (std::size_t k = 0; k < idxs.size(); ++k) {
      const annot::Token& t = doc.tokens[idxs[k]];
      dpc[k] = t.duration() / static_cast<double>(text::codepoint_count(t.text));
      mean += dpc[k];
    }
    mean /= static_cast<double>(dpc.size());
    double var = 0.0;
    for (double v : dpc) var += (v - mean) * (v - mean);
    const double stdev = std::sqrt(var / static_cast<double>(dpc.size()));
    if (stdev <= 0.0) continue;  // degenerate or missing durations

    for (std::size_t k = 0; k < idxs.size(); ++k) {
      const std::size_t i = idxs[k];
      if (!doc.disfluency[i].empty()) continue;
      if (i + 1 >= n || doc.tokens[i + 1].is_pause) continue;
      if ((dpc[k] - mean) / stdev > lengthening_z) doc.disfluency[i] = "LEN";
    }
  }
}

namespace {

// A proposed structured-disfluency region: an inclusive token range plus the
// labels it wants to assign. Overlapping regions collapse to COM.
struct Finding {
  std::size_t lo = 0;
  std::size_t hi = 0;  // inclusive
  std::vector<std::pair<std::size_t, std::string>> labels;
};

// Exact repetitions inside one pause unit. `solid` lists the unit's tokens
// with filled pauses and pauses skipped; a unit of m solid tokens repeated
// r >= 2 times becomes one finding. Longer units are preferred, then longer
// runs; the scan continues past each match, so rule findings never overlap.
void find_repetitions(const annot::Document& doc, const std::vector<std::size_t>& solid,
                      int max_unit, std::vector<Finding>* findings) {
  std::vector<std::string> folded(solid.size());
  for (std::size_t k = 0; k < solid.size(); ++k) {
    folded[k] = text::fold_case(doc.tokens[solid[k]].text);
  }
  const auto unit_equal = [&](std::size_t a, std::size_t b, std::size_t m) {
    for (std::size_t t = 0; t < m; ++t) {
      if (folded[a + t] != folded[b + t]) return false;
    }
    return true;
  };

  std::size_t j = 0;
  while (j < solid.size()) {
    bool matched = false;
    const std::size_t room = (solid.size() - j) / 2;
    for (std::size_t m = std::min<std::size_t>(static_cast<std::size_t>(max_unit), room); m >= 1;
         --m) {
      if (!unit_equal(j, j + m, m)) continue;
      std::size_t r = 2;
      while (j + (r + 1) * m <= solid.size() && unit_equal(j, j + r * m, m)) ++r;

      Finding f;
      const std::size_t rep_len = (r - 1) * m;  // reparandum token count
      for (std::size_t k = 0; k < rep_len; ++k) {
        f.labels.emplace_back(solid[j + k], k + 1 == rep_len ? "REP*" : "REP");
      }
      for (std::size_t k = 0; k < m; ++k) {
        f.labels.emplace_back(solid[j + rep_len + k], "REP_");
      }
      // Skipped tokens between the interruption point and the repair; any
      // that are still unlabeled sit in the interregnum.
      for (std::size_t i = solid[j + rep_len - 1] + 1; i < solid[j + rep_len]; ++i) {
        if (doc.disfluency[i].empty()) f.labels.emplace_back(i, "REP-E");
      }
      f.lo = solid[j];
      f.hi = solid[j + r * m - 1];
      findings->push_back(std::move(f));
      j += r * m;
      matched = true;
      break;
    }
    if (!matched) ++j;
  }
}

// Model-proposed DEL/SUB/INS runs over the unit's non-pause tokens. Other
// labels the model may emit (O, REP variants) are ignored here; the rule
// pass owns repetitions.
void find_model_spans(const annot::Document& doc, const crf::CrfModel& model,
                      const lex::Lexicon& lexicon, const std::vector<std::size_t>& indices,
                      std::vector<Finding>* findings) {
  if (indices.empty()) return;
  const crf::LabeledSequence seq = build_sequence(doc, indices, lexicon);
  const std::vector<std::string> decoded = crf::decode(model, seq, nullptr);

  const auto code_of = [](const std::string& label) -> std::optional<tagset::DisfluencyCode> {
    try {
      const tagset::DisfluencyCode c = tagset::parse_disfluency_label(label).code;
      if (c == tagset::DisfluencyCode::DEL || c == tagset::DisfluencyCode::SUB ||
          c == tagset::DisfluencyCode::INS) {
        return c;
      }
    } catch (const std::exception&) {
    }
    return std::nullopt;
  };

  std::size_t k = 0;
  while (k < decoded.size()) {
    const auto code = code_of(decoded[k]);
    if (!code) {
      ++k;
      continue;
    }
    std::size_t end = k + 1;
    while (end < decoded.size() && code_of(decoded[end]) == code) ++end;
    Finding f;
    f.lo = indices[k];
    f.hi = indices[end - 1];
    for (std::size_t t = k; t < end; ++t) f.labels.emplace_back(indices[t], decoded[t]);
    findings->push_back(std::move(f));
    k = end;
  }
}

}  // namespace

void detect_structured_disfluencies(StepState* s, const crf::CrfModel* model,
                                    const lex::Lexicon& lexicon, int max_unit) {
  annot::Document& doc = s->doc;
  if (max_unit < 1) max_unit = 1;

  std::vector<Finding> findings;
  for (const auto& [b, e] : s->segments) {
    std::vector<std::size_t> solid;
    for (std::size_t i = b; i < e; ++i) {
      if (!doc.tokens[i].is_pause && doc.disfluency[i] != "FIL") solid.push_back(i);
    }
    find_repetitions(doc, solid, max_unit, &findings);
    if (model != nullptr) {
      find_model_spans(doc, *model, lexicon, nonpause_indices(doc, b, e), &findings);
    }
  }

  std::sort(findings.begin(), findings.end(),
            [](const Finding& a, const Finding& b) { return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi); });

  // Transitively overlapping findings merge into one COM region; a finding
  // alone in its group applies its own labels. Cells that already carry a
  // value keep it either way.
  std::size_t g = 0;
  while (g < findings.size()) {
    std::size_t end = g + 1;
    std::size_t hi = findings[g].hi;
    while (end < findings.size() && findings[end].lo <= hi) {
      hi = std::max(hi, findings[end].hi);
      ++end;
    }
    if (end == g + 1) {
      for (const auto& [i, label] : findings[g].labels) {
        if (doc.disfluency[i].empty()) doc.disfluency[i] = label;
      }
    } else {
      for (std::size_t i = findings[g].lo; i <= hi; ++i) {
        if (!doc.tokens[i].is_pause && doc.disfluency[i].empty()) doc.disfluency[i] = "COM";
      }
    }
    g = end;
  }
}

void final_pos_mwu(StepState* s, const crf::CrfModel& model, const lex::Lexicon& lexicon,
                   const tagset::TagRegistry* registry) {
  annot::Document& doc = s->doc;

  for (const auto& [b, e] : s->segments) {
    decode_into_pos(&doc, *s, model, lexicon, fluent_indices(doc, b, e));
  }

  // Interruption points block MWU spans: a unit may end on one but never
  // continue past it.
  const std::size_t n = doc.size();
  std::vector<bool> ip(n, false);
  for (std::size_t i = 0; i < n; ++i) ip[i] = text::ends_with(doc.disfluency[i], "*");

  for (const auto& [b, e] : s->segments) {
    std::size_t i = b;
    while (i < e) {
      if (doc.tokens[i].is_pause) {
        ++i;
        continue;
      }
      std::size_t grouped = 0;
      for (const lex::Lexicon::MwuMatch& match : lexicon.mwu_matches(doc.tokens, i)) {
        if (i + match.length > e) continue;
        bool crosses_ip = false;
        for (std::size_t j = i; j + 1 < i + match.length; ++j) {
          if (ip[j]) {
            crosses_ip = true;
            break;
          }
        }
        if (crosses_ip) continue;

        const std::string_view cat = tag_category(match.tag);
        bool all_components = true;
        for (std::size_t j = i; j < i + match.length; ++j) {
          if (tag_category(doc.pos_min[j]) != cat) {
            all_components = false;
            break;
          }
        }
        bool initial_candidate = false;
        if (!all_components && i < s->candidates.size()) {
          for (const std::string& tag : s->candidates[i].tags) {
            if (tag_category(tag) == cat) {
              initial_candidate = true;
              break;
            }
          }
        }
        if (!all_components && !initial_candidate) continue;

        const tagset::PosTag tag = registry != nullptr ? tagset::parse_pos_tag(match.tag, *registry)
                                                       : tagset::parse_pos_tag(match.tag);
        annot::group_mwu(doc, i, i + match.length, tag);
        grouped = match.length;
        break;
      }
      i += grouped > 0 ? grouped : 1;
    }
  }

  // Everything not grouped stays a singleton and mirrors pos-min.
  for (std::size_t sp = 0; sp < doc.tok_mwu.size(); ++sp) {
    if (doc.pos_mwu[sp].empty() && doc.tok_mwu[sp].size() == 1) {
      doc.pos_mwu[sp] = doc.pos_min[doc.tok_mwu[sp].begin];
    }
  }
}

void detect_discourse_markers(StepState* s, const crf::CrfModel& model,
                              const lex::Lexicon& lexicon, std::string_view dm_label) {
  annot::Document& doc = s->doc;
  const int dm = model.label_index(dm_label);
  if (dm < 0) return;

  for (const auto& [b, e] : s->segments) {
    const std::vector<std::size_t> indices = fluent_indices(doc, b, e);
    if (indices.empty()) continue;
    bool any = false;
    for (std::size_t i : indices) {
      if (i < s->candidates.size() && s->candidates[i].discourse_marker_candidate) any = true;
    }
    if (!any) continue;

    const crf::LabeledSequence seq = build_sequence(doc, indices, lexicon);
    const std::vector<std::vector<double>> post = crf::marginals(model, seq);
    for (std::size_t k = 0; k < indices.size(); ++k) {
      const std::size_t i = indices[k];
      if (i >= s->candidates.size() || !s->candidates[i].discourse_marker_candidate) continue;
      if (post[k][static_cast<std::size_t>(dm)] > 0.5) {
        doc.discourse.push_back(annot::TierValue{i, i + 1, "DM"});
      }
    }
  }
}

namespace {

bool matcher_hits(const PostRule::Matcher& m, std::string_view value) {
  if (!m.value.empty() && m.value.back() == '*') {
    return text::starts_with(value, std::string_view(m.value).substr(0, m.value.size() - 1));
  }
  return value == m.value;
}

std::string_view tier_value_at(const annot::Document& doc, std::string_view tier, std::size_t i) {
  if (tier == "tok-min") return doc.tokens[i].text;
  if (tier == "pos-min") return doc.pos_min[i];
  if (tier == "disfluency") return doc.disfluency[i];
  // pos-mwu (the parser admits nothing else)
  const std::size_t sp = doc.mwu_index_of(i);
  return sp < doc.pos_mwu.size() ? std::string_view(doc.pos_mwu[sp]) : std::string_view();
}

}  // namespace

void apply_post_rules(annot::Document* doc, const std::vector<PostRule>& rules) {
  const std::size_t n = doc->size();
  for (const PostRule& rule : rules) {
    const std::size_t w = rule.pattern.size();
    if (w == 0 || w > n) continue;
    std::size_t i = 0;
    while (i + w <= n) {
      bool hit = true;
      for (std::size_t k = 0; k < w; ++k) {
        if (!matcher_hits(rule.pattern[k], tier_value_at(*doc, rule.pattern[k].tier, i + k))) {
          hit = false;
          break;
        }
      }
      if (!hit) {
        ++i;
        continue;
      }
      const std::size_t idx = i + rule.action_index;
      if (rule.action_tier == "pos-min") {
        doc->pos_min[idx] = rule.action_value;
      } else {
        const std::size_t sp = doc->mwu_index_of(idx);
        if (sp < doc->pos_mwu.size()) doc->pos_mwu[sp] = rule.action_value;
      }
      i += w;
    }
  }
}

std::vector<PostRule> parse_post_rules(std::string_view content) {
  std::vector<PostRule> rules;
  std::size_t line_no = 0;
  for (std::string_view line : text::split(content, '\n')) {
    ++line_no;
    std::string_view body = text::trim(line);
    if (body.empty() || body.front() == '#') continue;

    const std::size_t arrow = body.find("=>");
    if (arrow == std::string_view::npos) {
      throw RuleParseError("missing '=>'", line_no);
    }
    std::string_view lhs = text::trim(body.substr(0, arrow));
    std::string_view rhs = text::trim(body.substr(arrow + 2));

    PostRule rule;
    while (!lhs.empty()) {
      if (lhs.front() != '[') throw RuleParseError("expected '['", line_no);
      const std::size_t close = lhs.find(']');
      if (close == std::string_view::npos) throw RuleParseError("unterminated matcher", line_no);
      std::string_view inner = lhs.substr(1, close - 1);
      const std::size_t eq = inner.find('=');
      if (eq == std::string_view::npos) throw RuleParseError("matcher needs tier=value", line_no);
      PostRule::Matcher m;
      m.tier = std::string(text::trim(inner.substr(0, eq)));
      m.value = std::string(text::trim(inner.substr(eq + 1)));
      if (m.tier != "tok-min" && m.tier != "pos-min" && m.tier != "disfluency" &&
          m.tier != "pos-mwu") {
        throw RuleParseError("unknown matcher tier '" + m.tier + "'", line_no);
      }
      rule.pattern.push_back(std::move(m));
      lhs = text::trim(lhs.substr(close + 1));
    }
    if (rule.pattern.empty() || rule.pattern.size() > 5) {
      throw RuleParseError("window must cover 1 to 5 tokens", line_no);
    }

    const std::size_t colon = rhs.find(':');
    if (colon == std::string_view::npos) throw RuleParseError("action needs index:tier=value", line_no);
    long long idx = 0;
    if (!text::parse_int(text::trim(rhs.substr(0, colon)), idx) || idx < 0 ||
        static_cast<std::size_t>(idx) >= rule.pattern.size()) {
      throw RuleParseError("action index outside the window", line_no);
    }
    rule.action_index = static_cast<std::size_t>(idx);
    std::string_view action = rhs.substr(colon + 1);
    const std::size_t eq = action.find('=');
    if (eq == std::string_view::npos) throw RuleParseError("action needs index:tier=value", line_no);
    rule.action_tier = std::string(text::trim(action.substr(0, eq)));
    rule.action_value = std::string(text::trim(action.substr(eq + 1)));
    if (rule.action_tier != "pos-min" && rule.action_tier != "pos-mwu") {
      throw RuleParseError("action tier must be pos-min or pos-mwu", line_no);
    }
    if (rule.action_value.empty()) throw RuleParseError("empty action value", line_no);
    rules.push_back(std::move(rule));
  }
  return rules;
}

void validate_resources(const PipelineResources& res) {
  check_pos_labels(res.prelim_pos_model, res.registry, "preliminary");
  check_pos_labels(res.final_pos_model, res.registry, "final");
  if (res.disfluency_model) {
    for (const std::string& label : res.disfluency_model->labels) {
      if (label == "O") continue;
      try {
        tagset::parse_disfluency_label(label);
      } catch (const std::exception& e) {
        throw LabelOutsideRegistry("disfluency model label '" + label + "': " + e.what());
      }
    }
  }
  if (!(res.lengthening_z > 0.0)) {
    throw std::invalid_argument("lengthening_z must be positive");
  }
  if (res.repetition_max_unit < 1) {
    throw std::invalid_argument("repetition_max_unit must be at least 1");
  }
}

annot::Document annotate(const annot::Document& input, const PipelineResources& res) {
  validate_resources(res);

  StepState st;
  st.doc = input;
  const std::size_t n = st.doc.size();
  st.doc.pos_min.assign(n, "");
  st.doc.disfluency.assign(n, "");
  st.doc.tok_mwu.clear();
  st.doc.tok_mwu.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    st.doc.tok_mwu.push_back(annot::TierValue{i, i + 1, st.doc.tokens[i].text});
  }
  st.doc.pos_mwu.assign(n, "");
  st.doc.discourse.clear();

  const int threshold = res.tokenizer_config.psu_threshold_ms;
  preprocess(&st, res.lexicon);
  preliminary_pos(&st, res.prelim_pos_model, res.lexicon, nullptr, threshold);
  detect_boundaries(&st, threshold);
  detect_simple_disfluencies(&st, res.lengthening_z);
  detect_structured_disfluencies(&st, res.disfluency_model ? &*res.disfluency_model : nullptr,
                                 res.lexicon, res.repetition_max_unit);
  final_pos_mwu(&st, res.final_pos_model, res.lexicon, &res.registry);
  detect_discourse_markers(&st, res.final_pos_model, res.lexicon, res.discourse_marker_label);
  apply_post_rules(&st.doc, res.post_rules);
  return st.doc;
}

std::optional<crf::LabeledSequence> unit_training_sequence(const annot::Document& doc,
                                                           const lex::Lexicon& lexicon,
                                                           std::size_t begin, std::size_t end,
                                                           TrainingTarget target) {
  const std::vector<std::size_t> indices = target == TrainingTarget::FinalPos
                                               ? fluent_indices(doc, begin, end)
                                               : nonpause_indices(doc, begin, end);
  if (indices.empty()) return std::nullopt;

  crf::LabeledSequence seq = build_sequence(doc, indices, lexicon);
  seq.labels.reserve(indices.size());
  for (std::size_t i : indices) {
    if (target == TrainingTarget::Disfluency) {
      seq.labels.push_back(doc.disfluency[i].empty() ? "O" : doc.disfluency[i]);
    } else {
      if (doc.pos_min[i].empty()) return std::nullopt;
      seq.labels.push_back(doc.pos_min[i]);
    }
  }
  return seq;
}

std::vector<crf::LabeledSequence> training_sequences(const annot::Document& doc,
                                                     const lex::Lexicon& lexicon,
                                                     int psu_threshold_ms, TrainingTarget target) {
  std::vector<crf::LabeledSequence> out;
  for (const auto& [b, e] : annot::psu_segments(doc, psu_threshold_ms)) {
    if (auto seq = unit_training_sequence(doc, lexicon, b, e, target)) {
      out.push_back(std::move(*seq));
    }
  }
  return out;
}

}  // namespace oratag::pipe
