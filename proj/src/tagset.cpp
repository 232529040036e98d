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

#include "oratag/tagset.hpp"

#include <array>
#include <fstream>
#include <sstream>

#include "oratag/text_util.hpp"

namespace oratag::tagset {

namespace {

struct BuiltinEntry {
  const char* tag;
  const char* gloss;
};

// 62 tags: the closed first-three-level inventory.
constexpr std::array<BuiltinEntry, 62> kBuiltinTags{{
    {"ADJ", "Adjective"},
    {"ADV", "Adverb"},
    {"ADV:acr", "Adverb, acronym"},
    {"ADV:int", "Adverb, interrogative"},
    {"ADV:neg", "Adverb, negative"},
    {"CON:coo", "Conjunction, co-ordinating"},
    {"CON:sub", "Conjunction, subordinating"},
    {"DET:def", "Determiner, definite article"},
    {"DET:dem", "Determiner, demonstrative"},
    {"DET:ind", "Determiner, indefinite"},
    {"DET:int", "Determiner, interrogative"},
    {"DET:exc", "Determiner, exclamative"},
    {"DET:par", "Determiner, partitive"},
    {"DET:pos", "Determiner, possessive"},
    {"NUM:crd:det", "Cardinal number, determiner"},
    {"NUM:crd:adj", "Cardinal number, adjective"},
    {"NUM:crd:pro", "Cardinal number, pronoun"},
    {"NUM:crd:nom", "Cardinal number, noun"},
    {"NUM:ord:adj", "Ordinal number, adjective"},
    {"NUM:ord:pro", "Ordinal number, pronoun"},
    {"NUM:ord:nom", "Ordinal number, noun"},
    {"FRG", "Foreign word"},
    {"ITJ", "Interjection"},
    {"ITJ:ono", "Onomatopoeia"},
    {"NOM:acr", "Noun, acronym"},
    {"NOM:com", "Noun, common"},
    {"NOM:pro", "Noun, proper"},
    {"NOM:pro:acr", "Noun, proper, acronym"},
    {"PFX", "Prefix"},
    {"PRP", "Preposition"},
    {"PRP:det", "Preposition + determiner"},
    {"PRO:dem", "Pronoun, demonstrative"},
    {"PRO:ind", "Pronoun, indefinite"},
    {"PRO:int", "Pronoun, interrogative"},
    {"PRO:per:stj", "Pronoun, personal, subject"},
    {"PRO:per:objd", "Pronoun, personal, direct object"},
    {"PRO:per:obji", "Pronoun, personal, indirect object"},
    {"PRO:per:ton", "Pronoun, personal, clitic (stressable)"},
    {"PRO:pos", "Pronoun, possessive"},
    {"PRO:rel", "Pronoun, relative"},
    {"PRO:ref", "Pronoun, reflexive"},
    {"VER:cond", "Verb, conditional"},
    {"VER:cond:aux", "Verb, conditional, auxiliary"},
    {"VER:fut", "Verb, future"},
    {"VER:fut:aux", "Verb, future, auxiliary"},
    {"VER:impe", "Verb, imperative"},
    {"VER:impf", "Verb, imperfect"},
    {"VER:impf:aux", "Verb, imperfect, auxiliary"},
    {"VER:inf", "Verb, infinitive"},
    {"VER:inf:aux", "Verb, infinitive, auxiliary"},
    {"VER:ppas", "Verb, past participle"},
    {"VER:ppre", "Verb, present participle"},
    {"VER:ger", "Verb, gerundive"},
    {"VER:pres", "Verb, present"},
    {"VER:pres:aux", "Verb, present, auxiliary"},
    {"VER:pres:entatif", "Verb, existential"},
    {"VER:simp", "Verb, simple past"},
    {"VER:simp:aux", "Verb, simple past, auxiliary"},
    {"VER:subi", "Verb, subjunctive, imperfect"},
    {"VER:subi:aux", "Verb, subjunctive, imperfect, auxiliary"},
    {"VER:subp", "Verb, subjunctive, present"},
    {"VER:subp:aux", "Verb, subjunctive, present, auxiliary"},
}};

// Categories whose tags may carry the extended (gender/number/person) level.
constexpr std::array<std::string_view, 5> kExtendedCapable{"NOM", "ADJ", "VER", "DET", "PRO"};

TagRegistry build_registry(std::string_view text) { return TagRegistry::from_text(text); }

}  // namespace

const TagRegistry& TagRegistry::builtin() {
  static const TagRegistry instance = [] {
    std::string text;
    for (const auto& e : kBuiltinTags) {
      text += e.tag;
      text += '\t';
      text += e.gloss;
      text += '\n';
    }
    return build_registry(text);
  }();
  return instance;
}

TagRegistry TagRegistry::from_text(std::string_view text) {
  TagRegistry reg;
  std::size_t line_no = 0;
  for (std::string_view line : text::split(text, '\n')) {
    ++line_no;
    line = text::trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto cols = text::split(line, '\t');
    if (cols.empty() || cols[0].empty()) {
      throw MalformedTag("registry line " + std::to_string(line_no) + ": missing tag");
    }
    const std::string tag(text::trim(cols[0]));
    const std::string gloss(cols.size() > 1 ? text::trim(cols[1]) : std::string_view());
    const auto parts = text::split(tag, ':');
    if (parts.size() > 3) {
      throw MalformedTag("registry line " + std::to_string(line_no) +
                         ": more than three levels in '" + tag + "'");
    }
    for (const auto& p : parts) {
      if (p.empty()) {
        throw MalformedTag("registry line " + std::to_string(line_no) + ": empty level in '" +
                           tag + "'");
      }
    }
    if (reg.index_.insert(tag).second) {
      reg.entries_.push_back({tag, gloss});
      reg.categories_.insert(std::string(parts[0]));
    }
  }
  return reg;
}

TagRegistry TagRegistry::from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MalformedTag("cannot open registry file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_text(ss.str());
}

std::string TagRegistry::to_text() const {
  std::string out = "#oratag-pos-registry 1\n";
  for (const auto& e : entries_) {
    out += e.tag;
    out += '\t';
    out += e.gloss;
    out += '\n';
  }
  return out;
}

bool TagRegistry::contains(const PosTag& tag) const {
  std::string key = tag.category;
  if (!tag.subcategory.empty()) key += ":" + tag.subcategory;
  if (!tag.function.empty()) key += ":" + tag.function;
  return contains(key);
}

bool TagRegistry::contains(std::string_view triple) const {
  return index_.find(triple) != index_.end();
}

const std::string* TagRegistry::gloss(std::string_view triple) const {
  for (const auto& e : entries_) {
    if (e.tag == triple) return &e.gloss;
  }
  return nullptr;
}

bool TagRegistry::extended_capable(std::string_view category) const {
  for (const auto c : kExtendedCapable) {
    if (c == category) return true;
  }
  return false;
}

PosTag parse_pos_tag(std::string_view text, const TagRegistry& registry) {
  if (text.empty()) throw MalformedTag("empty tag");
  if (text.front() == ':' || text.back() == ':') {
    throw MalformedTag("leading/trailing colon in '" + std::string(text) + "'");
  }
  const auto parts = text::split(text, ':');
  if (parts.size() > 4) throw MalformedTag("too many levels in '" + std::string(text) + "'");
  for (const auto& p : parts) {
    if (p.empty()) throw MalformedTag("empty level in '" + std::string(text) + "'");
  }

  PosTag tag;
  tag.category = std::string(parts[0]);

  const auto in_registry = [&](std::size_t depth) {
    std::string key(parts[0]);
    for (std::size_t i = 1; i < depth; ++i) key += ":" + std::string(parts[i]);
    return registry.contains(key);
  };

  // Longest registry match wins; one trailing unmatched level may be the
  // extended annotation on extended-capable categories.
  std::size_t depth = std::min<std::size_t>(parts.size(), 3);
  while (depth > 0 && !in_registry(depth)) --depth;
  if (depth == 0) throw UnknownTag("unknown tag '" + std::string(text) + "'");
  if (parts.size() - depth > 1) throw UnknownTag("unknown tag '" + std::string(text) + "'");
  if (parts.size() - depth == 1 && !registry.extended_capable(parts[0])) {
    throw UnknownTag("category '" + std::string(parts[0]) + "' does not take an extended level");
  }

  if (depth >= 2) tag.subcategory = std::string(parts[1]);
  if (depth >= 3) tag.function = std::string(parts[2]);
  if (parts.size() > depth) tag.extended = std::string(parts[depth]);
  return tag;
}

PosTag parse_pos_tag(std::string_view text) { return parse_pos_tag(text, TagRegistry::builtin()); }

std::string format_pos_tag(const PosTag& tag) {
  std::string out = tag.category;
  if (!tag.subcategory.empty()) out += ":" + tag.subcategory;
  if (!tag.function.empty()) out += ":" + tag.function;
  if (!tag.extended.empty()) out += ":" + tag.extended;
  return out;
}

std::string project_pos_tag(const PosTag& tag, int level) {
  std::string out = tag.category;
  if (level >= 2 && !tag.subcategory.empty()) out += ":" + tag.subcategory;
  if (level >= 3 && !tag.function.empty()) out += ":" + tag.function;
  return out;
}

std::string project_tag_string(std::string_view tag, int level) {
  std::string out;
  bool first = true;
  for (const auto part : text::split_ws(tag)) {
    if (!first) out += ' ';
    first = false;
    const auto levels = text::split(part, ':');
    const auto depth = std::min<std::size_t>(levels.size(), static_cast<std::size_t>(level));
    for (std::size_t i = 0; i < depth; ++i) {
      if (i) out += ':';
      out += std::string(levels[i]);
    }
  }
  return out;
}

bool is_structured(DisfluencyCode code) {
  switch (code) {
    case DisfluencyCode::REP:
    case DisfluencyCode::DEL:
    case DisfluencyCode::SUB:
    case DisfluencyCode::INS:
    case DisfluencyCode::COM:
      return true;
    default:
      return false;
  }
}

std::string_view code_name(DisfluencyCode code) {
  switch (code) {
    case DisfluencyCode::FIL: return "FIL";
    case DisfluencyCode::LEN: return "LEN";
    case DisfluencyCode::FST: return "FST";
    case DisfluencyCode::WDP: return "WDP";
    case DisfluencyCode::REP: return "REP";
    case DisfluencyCode::DEL: return "DEL";
    case DisfluencyCode::SUB: return "SUB";
    case DisfluencyCode::INS: return "INS";
    case DisfluencyCode::COM: return "COM";
    case DisfluencyCode::SIL: return "SIL";
  }
  return "";
}

std::optional<DisfluencyCode> code_from_name(std::string_view name) {
  static constexpr std::array<DisfluencyCode, 10> all{
      DisfluencyCode::FIL, DisfluencyCode::LEN, DisfluencyCode::FST, DisfluencyCode::WDP,
      DisfluencyCode::REP, DisfluencyCode::DEL, DisfluencyCode::SUB, DisfluencyCode::INS,
      DisfluencyCode::COM, DisfluencyCode::SIL};
  for (const auto c : all) {
    if (code_name(c) == name) return c;
  }
  return std::nullopt;
}

DisfluencyLabel parse_disfluency_label(std::string_view text) {
  if (text.size() < 3) throw UnknownCode("unknown disfluency code '" + std::string(text) + "'");
  const auto code = code_from_name(text.substr(0, 3));
  if (!code) throw UnknownCode("unknown disfluency code '" + std::string(text) + "'");
  DisfluencyLabel label{*code, DisfluencyMarker::None};
  const auto rest = text.substr(3);
  if (rest.empty()) return label;
  if (rest == "*") {
    label.marker = DisfluencyMarker::InterruptionPoint;
  } else if (rest == "-E") {
    label.marker = DisfluencyMarker::EditingTerm;
  } else if (rest == "_") {
    label.marker = DisfluencyMarker::Repair;
  } else {
    throw UnknownCode("unknown disfluency label '" + std::string(text) + "'");
  }
  if (!is_structured(label.code)) {
    throw IllegalMarker("marker on simple code in '" + std::string(text) + "'");
  }
  return label;
}

std::string format_disfluency_label(DisfluencyLabel label) {
  std::string out(code_name(label.code));
  switch (label.marker) {
    case DisfluencyMarker::None: break;
    case DisfluencyMarker::InterruptionPoint: out += "*"; break;
    case DisfluencyMarker::EditingTerm: out += "-E"; break;
    case DisfluencyMarker::Repair: out += "_"; break;
  }
  return out;
}

}  // namespace oratag::tagset
