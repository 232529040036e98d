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

#include "oratag/tokenizer.hpp"

#include <algorithm>
#include <cmath>

#include "oratag/text_util.hpp"

namespace oratag::tok {

namespace {

constexpr double kGapEpsilon = 1e-6;

bool is_prefix_rule(const SplitRule& r) {
  return !r.pattern.empty() && r.pattern.back() == '*';
}

// Matches chunk against one rule, case-insensitively, and appends the split
// parts in original casing. Returns false when the rule does not apply.
bool apply_rule(const SplitRule& rule, const std::string& chunk, std::vector<std::string>* out) {
  const std::string folded = text::fold_case(chunk);
  if (is_prefix_rule(rule)) {
    const std::string prefix = text::fold_case(rule.pattern.substr(0, rule.pattern.size() - 1));
    if (folded.size() <= prefix.size() || folded.compare(0, prefix.size(), prefix) != 0) {
      return false;
    }
    std::size_t off = 0;
    for (const auto& part : rule.parts) {
      if (part == "*") {
        out->push_back(chunk.substr(prefix.size()));
      } else {
        out->push_back(chunk.substr(off, part.size()));
        off += part.size();
      }
    }
    return true;
  }
  if (folded != text::fold_case(rule.pattern)) return false;
  std::size_t off = 0;
  for (const auto& part : rule.parts) {
    out->push_back(chunk.substr(off, part.size()));
    off += part.size();
  }
  return true;
}

// Splits one whitespace-delimited chunk by the rule table, re-applying rules
// to any strictly shorter piece so chains like elision + clitic resolve.
void split_chunk(const std::string& chunk, const std::vector<SplitRule>& rules,
                 std::vector<std::string>* out) {
  for (const auto& rule : rules) {
    std::vector<std::string> parts;
    if (!apply_rule(rule, chunk, &parts)) continue;
    for (auto& part : parts) {
      if (part.empty()) continue;
      if (part.size() < chunk.size()) {
        split_chunk(part, rules, out);
      } else {
        out->push_back(std::move(part));
      }
    }
    return;
  }
  out->push_back(chunk);
}

struct Piece {
  std::string text;
  bool pause = false;
  bool false_start = false;
  bool intra_word_pause = false;
  std::size_t weight = 1;
};

// Marker stripping happens after rule splitting so rule patterns only ever
// see plain orthographic forms.
Piece finish_piece(std::string text, const TokenizerConfig& cfg) {
  Piece p;
  if (text == cfg.pause_symbol) {
    p.text = text;
    p.pause = true;
    return p;
  }
  const auto& fsm = cfg.false_start_marker;
  if (text.size() > fsm.size() && text::ends_with(text, fsm)) {
    text.resize(text.size() - fsm.size());
    p.false_start = true;
  }
  const auto& wdp = cfg.intra_word_pause_marker;
  for (auto at = text.find(wdp); at != std::string::npos && at > 0 && at + wdp.size() < text.size();
       at = text.find(wdp)) {
    text.erase(at, wdp.size());
    p.intra_word_pause = true;
  }
  p.text = std::move(text);
  p.weight = std::max<std::size_t>(1, text::codepoint_count(p.text));
  return p;
}

void emit_pause(std::vector<annot::Token>* out, double t_min, double t_max,
                std::string_view speaker, const TokenizerConfig& cfg) {
  if (!out->empty() && out->back().is_pause && out->back().speaker == speaker &&
      t_min - out->back().t_max < kGapEpsilon) {
    out->back().t_max = std::max(out->back().t_max, t_max);
    return;
  }
  annot::Token t;
  t.text = cfg.pause_symbol;
  t.t_min = t_min;
  t.t_max = t_max;
  t.speaker = std::string(speaker);
  t.is_pause = true;
  out->push_back(std::move(t));
}

}  // namespace

void validate_config(const TokenizerConfig& cfg) {
  if (cfg.false_start_marker.empty()) throw ConfigError("falseStartMarker is empty");
  if (cfg.intra_word_pause_marker.empty()) throw ConfigError("intraWordPauseMarker is empty");
  if (cfg.pause_symbol.empty()) throw ConfigError("pauseSymbol is empty");
  if (cfg.false_start_marker == cfg.intra_word_pause_marker ||
      cfg.false_start_marker == cfg.pause_symbol ||
      cfg.intra_word_pause_marker == cfg.pause_symbol) {
    throw ConfigError("markers and pause symbol must be mutually distinct");
  }
  if (cfg.short_pause_max_ms < 0) throw ConfigError("shortPauseMaxMs is negative");
  if (cfg.psu_threshold_ms <= 0) throw ConfigError("psuThresholdMs must be positive");
  for (const auto& rule : cfg.rules) {
    std::string joined;
    for (const auto& part : rule.parts) joined += part;
    if (rule.pattern.empty() || rule.parts.empty() || joined != rule.pattern) {
      throw ConfigError("rule parts do not concatenate to pattern: " + rule.pattern);
    }
  }
}

std::vector<annot::Token> tokenize(const std::vector<TimedText>& intervals,
                                   const TokenizerConfig& cfg, std::string_view speaker) {
  std::vector<annot::Token> out;
  double prev_end = intervals.empty() ? 0.0 : intervals.front().t_min;
  for (const auto& iv : intervals) {
    if (iv.t_min - prev_end > kGapEpsilon) emit_pause(&out, prev_end, iv.t_min, speaker, cfg);
    prev_end = std::max(prev_end, iv.t_max);

    std::vector<Piece> pieces;
    for (const auto chunk_view : text::split_ws(iv.text)) {
      const std::string chunk(chunk_view);
      if (cfg.ignore_strings.count(chunk)) continue;
      std::vector<std::string> split;
      split_chunk(chunk, cfg.rules, &split);
      for (auto& s : split) pieces.push_back(finish_piece(std::move(s), cfg));
    }
    if (pieces.empty()) {
      if (iv.t_max - iv.t_min > kGapEpsilon) emit_pause(&out, iv.t_min, iv.t_max, speaker, cfg);
      continue;
    }

    std::size_t total = 0;
    for (const auto& p : pieces) total += p.weight;
    const double span = iv.t_max - iv.t_min;
    std::size_t cum = 0;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      const double t0 = iv.t_min + span * static_cast<double>(cum) / static_cast<double>(total);
      cum += pieces[i].weight;
      const double t1 = i + 1 == pieces.size()
                            ? iv.t_max
                            : iv.t_min + span * static_cast<double>(cum) /
                                             static_cast<double>(total);
      if (pieces[i].pause) {
        emit_pause(&out, t0, t1, speaker, cfg);
        continue;
      }
      annot::Token t;
      t.text = std::move(pieces[i].text);
      t.t_min = t0;
      t.t_max = t1;
      t.speaker = std::string(speaker);
      t.false_start = pieces[i].false_start;
      t.intra_word_pause = pieces[i].intra_word_pause;
      out.push_back(std::move(t));
    }
  }
  return out;
}

void classify_pauses(std::vector<annot::Token>& tokens, const TokenizerConfig& cfg) {
  double cutoff_ms = static_cast<double>(cfg.short_pause_max_ms);
  if (cfg.pause_class_mode == PauseClassMode::Distribution) {
    std::vector<double> durations;
    for (const auto& t : tokens) {
      if (t.is_pause) durations.push_back((t.t_max - t.t_min) * 1000.0);
    }
    if (durations.empty()) return;
    std::sort(durations.begin(), durations.end());
    const auto median_of = [](const double* v, std::size_t n) {
      return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
    };
    const std::size_t n = durations.size();
    const double median = median_of(durations.data(), n);
    const std::size_t half = n / 2;
    double iqr = 0.0;
    if (half > 0) {
      const double q1 = median_of(durations.data(), half);
      const double q3 = median_of(durations.data() + n - half, half);
      iqr = q3 - q1;
    }
    cutoff_ms = median + 1.5 * iqr;
  }
  for (auto& t : tokens) {
    if (!t.is_pause) continue;
    const double dur_ms = (t.t_max - t.t_min) * 1000.0;
    t.pause_class = dur_ms > cutoff_ms ? annot::PauseClass::Long : annot::PauseClass::Short;
  }
}

TokenizerConfig parse_tokenizer_config(std::string_view content) {
  TokenizerConfig cfg;
  const auto parse_set = [](std::string_view value) {
    std::set<std::string> out;
    for (const auto item : text::split(value, ',')) {
      const auto trimmed = text::trim(item);
      if (!trimmed.empty()) out.emplace(trimmed);
    }
    return out;
  };
  std::size_t line_no = 0;
  for (const auto raw : text::split(content, '\n')) {
    ++line_no;
    const auto line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    const auto key = text::trim(line.substr(0, eq));
    const auto value = text::trim(line.substr(eq + 1));
    if (key == "filledPauseForms") {
      cfg.filled_pause_forms = parse_set(value);
    } else if (key == "falseStartMarker") {
      cfg.false_start_marker = std::string(value);
    } else if (key == "intraWordPauseMarker") {
      cfg.intra_word_pause_marker = std::string(value);
    } else if (key == "ignoreStrings") {
      cfg.ignore_strings = parse_set(value);
    } else if (key == "pauseSymbol") {
      cfg.pause_symbol = std::string(value);
    } else if (key == "shortPauseMaxMs" || key == "psuThresholdMs") {
      long long parsed = 0;
      if (!text::parse_int(value, parsed) || parsed < 0) {
        throw ConfigError("line " + std::to_string(line_no) + ": bad integer for " +
                          std::string(key));
      }
      (key == "shortPauseMaxMs" ? cfg.short_pause_max_ms : cfg.psu_threshold_ms) =
          static_cast<int>(parsed);
    } else if (key == "pauseClassMode") {
      if (value == "threshold") {
        cfg.pause_class_mode = PauseClassMode::Threshold;
      } else if (value == "distribution") {
        cfg.pause_class_mode = PauseClassMode::Distribution;
      } else {
        throw ConfigError("line " + std::to_string(line_no) +
                          ": pauseClassMode must be threshold or distribution");
      }
    } else {
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key " + std::string(key));
    }
  }
  validate_config(cfg);
  return cfg;
}

std::vector<SplitRule> parse_rules(std::string_view content) {
  std::vector<SplitRule> rules;
  std::size_t line_no = 0;
  for (const auto raw : text::split(content, '\n')) {
    ++line_no;
    auto line = raw;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (text::trim(line).empty() || text::trim(line).front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) throw RuleError("expected PATTERN<TAB>parts", line_no);
    SplitRule rule;
    rule.pattern = std::string(text::trim(line.substr(0, tab)));
    for (const auto part : text::split_ws(line.substr(tab + 1))) rule.parts.emplace_back(part);
    if (rule.pattern.empty()) throw RuleError("empty pattern", line_no);
    if (rule.parts.empty()) throw RuleError("no parts", line_no);
    std::string joined;
    std::size_t stars = 0;
    for (const auto& part : rule.parts) {
      joined += part;
      if (part == "*") ++stars;
    }
    if (joined != rule.pattern) throw RuleError("parts do not concatenate to pattern", line_no);
    if (is_prefix_rule(rule)) {
      if (stars != 1) throw RuleError("prefix pattern needs exactly one * part", line_no);
    } else if (stars != 0) {
      throw RuleError("* part requires a pattern ending in *", line_no);
    }
    rules.push_back(std::move(rule));
  }
  std::stable_sort(rules.begin(), rules.end(), [](const SplitRule& a, const SplitRule& b) {
    const std::size_t la = a.pattern.size() - (is_prefix_rule(a) ? 1 : 0);
    const std::size_t lb = b.pattern.size() - (is_prefix_rule(b) ? 1 : 0);
    if (la != lb) return la > lb;
    if (is_prefix_rule(a) != is_prefix_rule(b)) return !is_prefix_rule(a);
    return a.pattern < b.pattern;
  });
  return rules;
}

}  // namespace oratag::tok
