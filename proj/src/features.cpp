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

#include "oratag/crf.hpp"

namespace oratag::crf {

namespace {

// Feature keys and the model file are line- and tab-structured, so value
// whitespace must not leak into keys.
void append_escaped(std::string* out, std::string_view value) {
  for (const char c : value) {
    switch (c) {
      case '\\': *out += "\\\\"; break;
      case '\t': *out += "\\t"; break;
      case '\n': *out += "\\n"; break;
      case '\r': *out += "\\r"; break;
      case ' ': *out += "\\s"; break;
      default: out->push_back(c);
    }
  }
}

std::string_view attr_at(const LabeledSequence& seq, std::ptrdiff_t t, std::string_view attr) {
  if (t < 0) return "BOS";
  if (t >= static_cast<std::ptrdiff_t>(seq.positions.size())) return "EOS";
  const auto& map = seq.positions[static_cast<std::size_t>(t)];
  const auto it = map.find(attr);
  return it == map.end() ? std::string_view() : std::string_view(it->second);
}

}  // namespace

std::vector<FeatureTemplate> default_templates() {
  std::vector<FeatureTemplate> t;
  const auto uni = [&](std::string id, std::vector<Extractor> ex) {
    t.push_back({std::move(id), std::move(ex), false});
  };
  uni("w-2", {{-2, "lower"}});
  uni("w-1", {{-1, "lower"}});
  uni("w0", {{0, "lower"}});
  uni("w+1", {{1, "lower"}});
  uni("w+2", {{2, "lower"}});
  uni("w-1w0", {{-1, "lower"}, {0, "lower"}});
  uni("w0w+1", {{0, "lower"}, {1, "lower"}});
  uni("p1", {{0, "pre1"}});
  uni("p2", {{0, "pre2"}});
  uni("p3", {{0, "pre3"}});
  uni("p4", {{0, "pre4"}});
  uni("s1", {{0, "suf1"}});
  uni("s2", {{0, "suf2"}});
  uni("s3", {{0, "suf3"}});
  uni("s4", {{0, "suf4"}});
  uni("sh0", {{0, "shape"}});
  uni("c-1", {{-1, "cand"}});
  uni("c0", {{0, "cand"}});
  uni("c+1", {{1, "cand"}});
  uni("pb", {{0, "pauseBefore"}});
  uni("pa", {{0, "pauseAfter"}});
  uni("fst", {{0, "fst"}});
  t.push_back({"B", {}, true});
  return t;
}

FeatureKeys extract_features(const LabeledSequence& seq,
                             const std::vector<FeatureTemplate>& templates) {
  const std::size_t n = seq.positions.size();
  FeatureKeys out;
  out.uni.resize(n);
  out.big.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    for (const auto& tpl : templates) {
      if (tpl.bigram && t == 0) continue;
      std::string key = tpl.id;
      key += '=';
      bool first = true;
      for (const auto& ex : tpl.extractors) {
        if (!first) key += '|';
        first = false;
        append_escaped(&key, attr_at(seq, static_cast<std::ptrdiff_t>(t) + ex.offset, ex.attr));
      }
      (tpl.bigram ? out.big : out.uni)[t].push_back(std::move(key));
    }
  }
  return out;
}

}  // namespace oratag::crf
