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

#ifndef ORATAG_TAGSET_HPP_
#define ORATAG_TAGSET_HPP_

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

// Hierarchical POS tags and disfluency labels.
//
// A POS tag has up to four colon-separated levels:
//   category : subcategory : function : extended
// The first three levels must form a combination listed in the tag
// registry. The extended level carries gender/number/person material copied
// verbatim from a lexicon; it is stored uninterpreted and is permitted on
// nominal/adjectival/verbal/determiner/pronoun categories.

namespace oratag::tagset {

struct MalformedTag : std::runtime_error {
  explicit MalformedTag(const std::string& what) : std::runtime_error(what) {}
};
struct UnknownTag : std::runtime_error {
  explicit UnknownTag(const std::string& what) : std::runtime_error(what) {}
};
struct UnknownCode : std::runtime_error {
  explicit UnknownCode(const std::string& what) : std::runtime_error(what) {}
};
struct IllegalMarker : std::runtime_error {
  explicit IllegalMarker(const std::string& what) : std::runtime_error(what) {}
};

struct PosTag {
  std::string category;
  std::string subcategory;  // empty when absent
  std::string function;     // empty when absent; requires subcategory
  std::string extended;     // empty when absent; never interpreted

  bool operator==(const PosTag&) const = default;
  bool operator<(const PosTag& o) const {
    return std::tie(category, subcategory, function, extended) <
           std::tie(o.category, o.subcategory, o.function, o.extended);
  }
};

// The closed inventory of valid (category, subcategory, function) triples,
// with a one-line gloss each. Immutable once built; safe to share.
class TagRegistry {
 public:
  struct Entry {
    std::string tag;  // canonical colon-joined triple
    std::string gloss;
  };

  // The built-in registry (62 tags).
  static const TagRegistry& builtin();

  // One `TAG<TAB>gloss` line per entry; '#' lines are comments.
  static TagRegistry from_text(std::string_view text);
  static TagRegistry from_file(const std::string& path);

  std::string to_text() const;

  bool contains(const PosTag& tag) const;
  bool contains(std::string_view triple) const;
  const std::string* gloss(std::string_view triple) const;

  // Whether tags of this category accept an extended (4th) level.
  bool extended_capable(std::string_view category) const;

  std::size_t size() const { return entries_.size(); }
  const std::vector<Entry>& entries() const { return entries_; }

 private:
  std::vector<Entry> entries_;
  std::set<std::string, std::less<>> index_;
  std::set<std::string, std::less<>> categories_;
};

PosTag parse_pos_tag(std::string_view text, const TagRegistry& registry);
PosTag parse_pos_tag(std::string_view text);  // against builtin()

std::string format_pos_tag(const PosTag& tag);

// Truncates to the requested depth (1=category, 2=+subcategory,
// 3=+function); the extended level never survives projection.
std::string project_pos_tag(const PosTag& tag, int level);

// String-level projection; space-separated tag lists (concatenated forms)
// are projected element-wise. Malformed input is truncated textually.
std::string project_tag_string(std::string_view tag, int level);

// --- Disfluency labels ---------------------------------------------------

enum class DisfluencyCode { FIL, LEN, FST, WDP, REP, DEL, SUB, INS, COM, SIL };

enum class DisfluencyMarker {
  None,
  InterruptionPoint,  // '*'
  EditingTerm,        // "-E"
  Repair,             // '_'
};

struct DisfluencyLabel {
  DisfluencyCode code = DisfluencyCode::FIL;
  DisfluencyMarker marker = DisfluencyMarker::None;

  bool operator==(const DisfluencyLabel&) const = default;
};

// True for codes describing reparandum/interregnum/repair structure
// (REP, DEL, SUB, INS, COM); only these may carry a marker.
bool is_structured(DisfluencyCode code);

std::string_view code_name(DisfluencyCode code);
std::optional<DisfluencyCode> code_from_name(std::string_view name);

// "REP*", "REP-E", "REP_", "FIL", ...
DisfluencyLabel parse_disfluency_label(std::string_view text);
std::string format_disfluency_label(DisfluencyLabel label);

}  // namespace oratag::tagset

#endif  // ORATAG_TAGSET_HPP_
