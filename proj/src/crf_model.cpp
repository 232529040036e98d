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

#include <charconv>
#include <cstdio>
#include <string>

#include "oratag/crf.hpp"
#include "oratag/text_util.hpp"

namespace oratag::crf {

namespace {

constexpr std::string_view kMagic = "oratag-crf";
constexpr int kFormatVersion = 1;

std::string hex_double(double v) {
  char buf[48];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::hex);
  return std::string(buf, res.ptr);
}

bool parse_hex_double(std::string_view s, double* out) {
  const auto res = std::from_chars(s.data(), s.data() + s.size(), *out, std::chars_format::hex);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

// Template id of a feature key (everything before the first '=').
std::string_view key_template(std::string_view key) {
  return key.substr(0, key.find('='));
}

class LineReader {
 public:
  explicit LineReader(std::string_view bytes) : rest_(bytes) {}

  bool next(std::string_view* line) {
    if (done_) return false;
    const auto nl = rest_.find('\n');
    if (nl == std::string_view::npos) {
      *line = rest_;
      done_ = true;
    } else {
      *line = rest_.substr(0, nl);
      rest_.remove_prefix(nl + 1);
    }
    if (!line->empty() && line->back() == '\r') line->remove_suffix(1);
    ++line_no_;
    return true;
  }

  std::string_view require(std::string_view what) {
    std::string_view line;
    if (!next(&line)) throw CorruptModel("unexpected end of model file, expected " +
                                         std::string(what));
    return line;
  }

  std::size_t line_no() const { return line_no_; }

 private:
  std::string_view rest_;
  std::size_t line_no_ = 0;
  bool done_ = false;
};

std::size_t require_count(std::string_view line, std::string_view section) {
  const auto cells = text::split(line, '\t');
  if (cells.size() != 2 || cells[0] != section) {
    throw CorruptModel("expected `" + std::string(section) + "<TAB>count` line");
  }
  long long n = 0;
  if (!text::parse_int(cells[1], n) || n < 0) {
    throw CorruptModel("bad count in " + std::string(section) + " line");
  }
  return static_cast<std::size_t>(n);
}

}  // namespace

int CrfModel::label_index(std::string_view label) const {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) return static_cast<int>(i);
  }
  return -1;
}

std::string save_model(const CrfModel& model) {
  std::string out;
  out += kMagic;
  out += '\n';
  out += "version\t" + std::to_string(model.format_version) + "\n";

  out += "labels\t" + std::to_string(model.labels.size()) + "\n";
  for (const auto& label : model.labels) {
    out += label;
    out += '\n';
  }

  out += "templates\t" + std::to_string(model.templates.size()) + "\n";
  for (const auto& tpl : model.templates) {
    out += tpl.id;
    out += '\t';
    out += tpl.bigram ? 'b' : 'u';
    out += '\t';
    if (tpl.extractors.empty()) {
      out += '-';
    } else {
      bool first = true;
      for (const auto& ex : tpl.extractors) {
        if (!first) out += ',';
        first = false;
        out += std::to_string(ex.offset) + ":" + ex.attr;
      }
    }
    out += '\n';
  }

  const std::size_t L = model.labels.size();
  std::string body;
  std::size_t count = 0;
  for (const auto& [key, block] : model.feature_blocks) {
    bool bigram = false;
    for (const auto& tpl : model.templates) {
      if (tpl.id == key_template(key)) {
        bigram = tpl.bigram;
        break;
      }
    }
    if (bigram) {
      for (std::size_t a = 0; a < L; ++a) {
        for (std::size_t b = 0; b < L; ++b) {
          const double w = model.weights[block + a * L + b];
          if (w == 0.0) continue;
          body += key;
          body += ' ';
          body += model.labels[a];
          body += ' ';
          body += model.labels[b];
          body += '\t';
          body += hex_double(w);
          body += '\n';
          ++count;
        }
      }
    } else {
      for (std::size_t a = 0; a < L; ++a) {
        const double w = model.weights[block + a];
        if (w == 0.0) continue;
        body += key;
        body += ' ';
        body += model.labels[a];
        body += '\t';
        body += hex_double(w);
        body += '\n';
        ++count;
      }
    }
  }
  out += "weights\t" + std::to_string(count) + "\n";
  out += body;
  out += "end\n";
  return out;
}

CrfModel load_model(std::string_view bytes) {
  LineReader in(bytes);
  if (in.require("magic") != kMagic) throw CorruptModel("bad magic string");

  const auto version_line = text::split(in.require("version"), '\t');
  long long version = 0;
  if (version_line.size() != 2 || version_line[0] != "version" ||
      !text::parse_int(version_line[1], version)) {
    throw CorruptModel("bad version line");
  }
  if (version != kFormatVersion) {
    throw VersionMismatch("model format version " + std::to_string(version) +
                          ", this build reads version " + std::to_string(kFormatVersion));
  }

  CrfModel model;
  model.format_version = static_cast<int>(version);

  const std::size_t n_labels = require_count(in.require("labels"), "labels");
  for (std::size_t i = 0; i < n_labels; ++i) {
    const auto line = in.require("label");
    if (line.empty()) throw CorruptModel("empty label name");
    model.labels.emplace_back(line);
  }

  const std::size_t n_templates = require_count(in.require("templates"), "templates");
  for (std::size_t i = 0; i < n_templates; ++i) {
    const auto cells = text::split(in.require("template"), '\t');
    if (cells.size() != 3 || cells[0].empty() || (cells[1] != "u" && cells[1] != "b")) {
      throw CorruptModel("bad template line " + std::to_string(in.line_no()));
    }
    FeatureTemplate tpl;
    tpl.id = std::string(cells[0]);
    tpl.bigram = cells[1] == "b";
    if (cells[2] != "-") {
      for (const auto part : text::split(cells[2], ',')) {
        const auto colon = part.find(':');
        long long offset = 0;
        if (colon == std::string_view::npos || !text::parse_int(part.substr(0, colon), offset) ||
            part.substr(colon + 1).empty()) {
          throw CorruptModel("bad extractor in template line " + std::to_string(in.line_no()));
        }
        tpl.extractors.push_back({static_cast<int>(offset), std::string(part.substr(colon + 1))});
      }
    }
    model.templates.push_back(std::move(tpl));
  }

  const std::size_t L = model.labels.size();
  const std::size_t n_weights = require_count(in.require("weights"), "weights");
  for (std::size_t i = 0; i < n_weights; ++i) {
    const auto line = in.require("weight");
    const auto tab = line.rfind('\t');
    if (tab == std::string_view::npos) {
      throw CorruptModel("bad weight line " + std::to_string(in.line_no()));
    }
    double w = 0.0;
    if (!parse_hex_double(line.substr(tab + 1), &w)) {
      throw CorruptModel("bad weight value on line " + std::to_string(in.line_no()));
    }
    const auto fields = text::split(line.substr(0, tab), ' ');
    if (fields.size() < 2 || fields.size() > 3) {
      throw CorruptModel("bad weight key on line " + std::to_string(in.line_no()));
    }
    const auto key = fields[0];

    bool bigram = false;
    bool known_template = false;
    for (const auto& tpl : model.templates) {
      if (tpl.id == key_template(key)) {
        bigram = tpl.bigram;
        known_template = true;
        break;
      }
    }
    if (!known_template) {
      throw CorruptModel("weight references unknown template on line " +
                         std::to_string(in.line_no()));
    }
    if (bigram != (fields.size() == 3)) {
      throw CorruptModel("weight arity does not match template on line " +
                         std::to_string(in.line_no()));
    }
    const int a = model.label_index(fields[1]);
    const int b = bigram ? model.label_index(fields[2]) : 0;
    if (a < 0 || b < 0) {
      throw CorruptModel("weight references unknown label on line " +
                         std::to_string(in.line_no()));
    }

    const std::size_t block_size = bigram ? L * L : L;
    auto [it, inserted] = model.feature_blocks.try_emplace(std::string(key), model.weights.size());
    if (inserted) model.weights.resize(model.weights.size() + block_size, 0.0);
    const std::size_t slot =
        bigram ? it->second + static_cast<std::size_t>(a) * L + static_cast<std::size_t>(b)
               : it->second + static_cast<std::size_t>(a);
    model.weights[slot] = w;
  }
  if (in.require("end") != "end") throw CorruptModel("missing end marker");
  return model;
}

}  // namespace oratag::crf
