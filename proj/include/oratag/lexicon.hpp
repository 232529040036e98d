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

#ifndef ORATAG_LEXICON_HPP_
#define ORATAG_LEXICON_HPP_

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "oratag/annotation.hpp"
#include "oratag/tagset.hpp"

namespace oratag::lex {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string_view source, std::size_t line, const std::string& what)
      : std::runtime_error(std::string(source) + ":" + std::to_string(line) + ": " + what) {}
};

class InvalidTag : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Candidate dictionary with multiword entries.
//
// File format, one entry per line, UTF-8:
//   form<TAB>tag1|tag2|...<TAB>flags
// where flags is an optional comma-separated subset of
// {filledPause, discourseMarkerCandidate}. A form containing spaces is a
// multiword entry and needs at least two components. '#' starts a comment.
//
// Lookups fold case by default; entries carrying a NOM:pro tag keep their
// exact casing so proper nouns do not collide with common words.
class Lexicon {
 public:
  struct Entry {
    std::vector<std::string> tags;  // formatted tags, sorted, unique
    bool filled_pause = false;
    bool discourse_marker_candidate = false;

    bool empty() const { return tags.empty() && !filled_pause && !discourse_marker_candidate; }
  };

  struct MwuMatch {
    std::size_t length = 0;  // component token count, >= 2
    std::string tag;
  };

  explicit Lexicon(bool case_folding = true) : case_folding_(case_folding) {}

  // Adds one (form, tags, flags) record, merging with any existing entry.
  // Tags must already be validated. A multi-component form becomes an MWU
  // entry and its flags are ignored.
  void add(std::string_view form, const std::vector<std::string>& tags, bool filled_pause,
           bool discourse_marker_candidate);

  // Union of candidates for the form, after case folding. Unknown forms
  // yield an empty entry.
  Entry lookup(std::string_view form) const;

  // All multiword entries whose components match tokens[i..], longest first.
  // Pause tokens block matches. Uses the first-word index.
  std::vector<MwuMatch> mwu_matches(const std::vector<annot::Token>& tokens, std::size_t i) const;

  // Same contract as mwu_matches via a linear scan over every entry; kept as
  // a differential reference for the indexed version.
  std::vector<MwuMatch> mwu_matches_scan(const std::vector<annot::Token>& tokens,
                                         std::size_t i) const;

  std::size_t size() const { return folded_.size() + exact_.size(); }
  std::size_t mwu_size() const { return mwu_all_.size(); }
  bool case_folding() const { return case_folding_; }

 private:
  struct MwuEntry {
    std::vector<std::string> components;  // folded when case_folding_
    std::string tag;
  };

  bool match_at(const MwuEntry& e, const std::vector<annot::Token>& tokens, std::size_t i) const;

  bool case_folding_;
  std::map<std::string, Entry, std::less<>> folded_;
  std::map<std::string, Entry, std::less<>> exact_;
  std::map<std::string, std::vector<std::size_t>, std::less<>> mwu_by_first_;
  std::vector<MwuEntry> mwu_all_;
};

// Parses one lexicon file's content into `into`. Tags are validated against
// the registry; a bad tag raises InvalidTag with source and line context.
void merge_lexicon_text(Lexicon* into, std::string_view content, const tagset::TagRegistry& registry,
                        std::string_view source_name = "<memory>");

// Loads and merges the given files in order. Order does not affect the
// result beyond set union; duplicates collapse and flags are OR-ed.
Lexicon load_lexicon(const std::vector<std::string>& paths, const tagset::TagRegistry& registry,
                     bool case_folding = true);

}  // namespace oratag::lex

#endif  // ORATAG_LEXICON_HPP_
