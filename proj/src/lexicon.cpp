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

#include "oratag/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "oratag/text_util.hpp"

namespace oratag::lex {

namespace {

void merge_into(Lexicon::Entry* entry, const std::vector<std::string>& tags, bool filled_pause,
                bool dm_candidate) {
  for (const auto& tag : tags) {
    const auto at = std::lower_bound(entry->tags.begin(), entry->tags.end(), tag);
    if (at == entry->tags.end() || *at != tag) entry->tags.insert(at, tag);
  }
  entry->filled_pause |= filled_pause;
  entry->discourse_marker_candidate |= dm_candidate;
}

bool is_proper_noun(std::string_view tag) {
  return tag == "NOM:pro" || text::starts_with(tag, "NOM:pro:");
}

}  // namespace

void Lexicon::add(std::string_view form, const std::vector<std::string>& tags, bool filled_pause,
                  bool discourse_marker_candidate) {
  const auto words = text::split_ws(form);
  if (words.size() >= 2) {
    for (const auto& tag : tags) {
      MwuEntry e;
      for (const auto w : words) {
        e.components.emplace_back(case_folding_ ? text::fold_case(w) : std::string(w));
      }
      e.tag = tag;
      const bool duplicate = std::any_of(mwu_all_.begin(), mwu_all_.end(), [&](const MwuEntry& o) {
        return o.tag == e.tag && o.components == e.components;
      });
      if (duplicate) continue;
      mwu_by_first_[e.components.front()].push_back(mwu_all_.size());
      mwu_all_.push_back(std::move(e));
    }
    return;
  }

  if (!case_folding_) {
    merge_into(&exact_[std::string(form)], tags, filled_pause, discourse_marker_candidate);
    return;
  }
  std::vector<std::string> folded_tags, exact_tags;
  for (const auto& tag : tags) {
    (is_proper_noun(tag) ? exact_tags : folded_tags).push_back(tag);
  }
  if (!exact_tags.empty()) {
    merge_into(&exact_[std::string(form)], exact_tags, filled_pause, discourse_marker_candidate);
  }
  if (!folded_tags.empty() || tags.empty()) {
    merge_into(&folded_[text::fold_case(form)], folded_tags, filled_pause,
               discourse_marker_candidate);
  }
}

Lexicon::Entry Lexicon::lookup(std::string_view form) const {
  Entry out;
  if (const auto it = exact_.find(form); it != exact_.end()) {
    merge_into(&out, it->second.tags, it->second.filled_pause,
               it->second.discourse_marker_candidate);
  }
  const std::string key = case_folding_ ? text::fold_case(form) : std::string(form);
  if (const auto it = folded_.find(key); it != folded_.end()) {
    merge_into(&out, it->second.tags, it->second.filled_pause,
               it->second.discourse_marker_candidate);
  }
  return out;
}

bool Lexicon::match_at(const MwuEntry& e, const std::vector<annot::Token>& tokens,
                       std::size_t i) const {
  if (i + e.components.size() > tokens.size()) return false;
  for (std::size_t k = 0; k < e.components.size(); ++k) {
    const auto& tok = tokens[i + k];
    if (tok.is_pause) return false;
    const std::string form = case_folding_ ? text::fold_case(tok.text) : tok.text;
    if (form != e.components[k]) return false;
  }
  return true;
}

std::vector<Lexicon::MwuMatch> Lexicon::mwu_matches(const std::vector<annot::Token>& tokens,
                                                    std::size_t i) const {
  std::vector<MwuMatch> out;
  if (i >= tokens.size() || tokens[i].is_pause) return out;
  const std::string first = case_folding_ ? text::fold_case(tokens[i].text) : tokens[i].text;
  const auto bucket = mwu_by_first_.find(first);
  if (bucket == mwu_by_first_.end()) return out;
  for (const std::size_t idx : bucket->second) {
    if (match_at(mwu_all_[idx], tokens, i)) {
      out.push_back({mwu_all_[idx].components.size(), mwu_all_[idx].tag});
    }
  }
  std::sort(out.begin(), out.end(), [](const MwuMatch& a, const MwuMatch& b) {
    if (a.length != b.length) return a.length > b.length;
    return a.tag < b.tag;
  });
  return out;
}

std::vector<Lexicon::MwuMatch> Lexicon::mwu_matches_scan(const std::vector<annot::Token>& tokens,
                                                         std::size_t i) const {
  std::vector<MwuMatch> out;
  if (i >= tokens.size()) return out;
  for (const auto& e : mwu_all_) {
    if (match_at(e, tokens, i)) out.push_back({e.components.size(), e.tag});
  }
  std::sort(out.begin(), out.end(), [](const MwuMatch& a, const MwuMatch& b) {
    if (a.length != b.length) return a.length > b.length;
    return a.tag < b.tag;
  });
  return out;
}

void merge_lexicon_text(Lexicon* into, std::string_view content, const tagset::TagRegistry& registry,
                        std::string_view source_name) {
  std::size_t line_no = 0;
  for (auto raw : text::split(content, '\n')) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    if (raw.empty() || raw.front() == '#') continue;
    const auto cells = text::split(raw, '\t');
    if (cells.size() < 2 || cells.size() > 3) {
      throw ParseError(source_name, line_no, "expected form<TAB>tags[<TAB>flags]");
    }
    const auto form = text::trim(cells[0]);
    if (form.empty()) throw ParseError(source_name, line_no, "empty form");

    std::vector<std::string> tags;
    for (const auto tag_view : text::split(cells[1], '|')) {
      const auto tag_text = text::trim(tag_view);
      if (tag_text.empty()) continue;
      try {
        tags.push_back(tagset::format_pos_tag(tagset::parse_pos_tag(tag_text, registry)));
      } catch (const std::exception& e) {
        throw InvalidTag(std::string(source_name) + ":" + std::to_string(line_no) + ": " +
                         e.what());
      }
    }
    if (tags.empty()) throw ParseError(source_name, line_no, "no tags");

    bool filled_pause = false, dm_candidate = false;
    if (cells.size() == 3) {
      for (const auto flag_view : text::split(cells[2], ',')) {
        const auto flag = text::trim(flag_view);
        if (flag.empty()) continue;
        if (flag == "filledPause") {
          filled_pause = true;
        } else if (flag == "discourseMarkerCandidate") {
          dm_candidate = true;
        } else {
          throw ParseError(source_name, line_no, "unknown flag " + std::string(flag));
        }
      }
    }
    into->add(form, tags, filled_pause, dm_candidate);
  }
}

Lexicon load_lexicon(const std::vector<std::string>& paths, const tagset::TagRegistry& registry,
                     bool case_folding) {
  Lexicon lex(case_folding);
  for (const auto& path : paths) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path, 0, "cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    merge_lexicon_text(&lex, buf.str(), registry, path);
  }
  return lex;
}

}  // namespace oratag::lex
