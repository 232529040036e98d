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

#include "oratag/tsv.hpp"

#include <algorithm>
#include <map>
#include <optional>

#include "oratag/text_util.hpp"

namespace oratag::io {

namespace {

constexpr std::string_view kFixedColumns[] = {
    "tMin", "tMax", "speaker", "tok-min", "pos-min", "disfluency",
    "tok-mwu", "mwu-id", "pos-mwu", "discourse", "discourse-id", "flags",
};

std::string escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (const char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string unescape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\' && i + 1 < s.size()) {
      switch (s[i + 1]) {
        case '\\': out.push_back('\\'); ++i; continue;
        case 't': out.push_back('\t'); ++i; continue;
        case 'n': out.push_back('\n'); ++i; continue;
        case 'r': out.push_back('\r'); ++i; continue;
        default: break;
      }
    }
    out.push_back(s[i]);
  }
  return out;
}

std::string flags_of(const annot::Token& t) {
  std::string out;
  const auto add = [&](std::string_view f) {
    if (!out.empty()) out += ',';
    out += f;
  };
  if (t.is_pause) add("pause");
  if (t.false_start) add("fst");
  if (t.intra_word_pause) add("wdp");
  if (t.pause_class == annot::PauseClass::Short) add("short");
  if (t.pause_class == annot::PauseClass::Long) add("long");
  return out;
}

void apply_flags(annot::Token& t, std::string_view flags) {
  for (const auto f : text::split(flags, ',')) {
    if (f == "pause") t.is_pause = true;
    else if (f == "fst") t.false_start = true;
    else if (f == "wdp") t.intra_word_pause = true;
    else if (f == "short") t.pause_class = annot::PauseClass::Short;
    else if (f == "long") t.pause_class = annot::PauseClass::Long;
  }
}

}  // namespace

std::string write_tsv(const annot::Document& doc) {
  std::string out;
  if (!doc.meta.sample_id.empty()) out += "#sample-id=" + escape(doc.meta.sample_id) + "\n";
  if (!doc.meta.subcorpus_id.empty()) {
    out += "#subcorpus-id=" + escape(doc.meta.subcorpus_id) + "\n";
  }
  out += "#pause-symbol=" + escape(doc.pause_symbol) + "\n";

  for (std::size_t c = 0; c < std::size(kFixedColumns); ++c) {
    if (c) out += '\t';
    out += kFixedColumns[c];
  }
  for (const auto& [name, values] : doc.extra_columns) {
    out += '\t';
    out += escape(name);
  }
  out += '\n';

  // Span lookups per token.
  std::vector<std::size_t> mwu_of(doc.tokens.size(), 0);
  for (std::size_t s = 0; s < doc.tok_mwu.size(); ++s) {
    for (std::size_t i = doc.tok_mwu[s].begin; i < doc.tok_mwu[s].end && i < doc.tokens.size();
         ++i) {
      mwu_of[i] = s;
    }
  }
  std::vector<std::optional<std::size_t>> disc_of(doc.tokens.size());
  for (std::size_t s = 0; s < doc.discourse.size(); ++s) {
    for (std::size_t i = doc.discourse[s].begin; i < doc.discourse[s].end && i < doc.tokens.size();
         ++i) {
      disc_of[i] = s;
    }
  }

  for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
    const auto& t = doc.tokens[i];
    out += text::format_double(t.t_min);
    out += '\t';
    out += text::format_double(t.t_max);
    out += '\t';
    out += escape(t.speaker);
    out += '\t';
    out += escape(t.text);
    out += '\t';
    out += i < doc.pos_min.size() ? escape(doc.pos_min[i]) : "";
    out += '\t';
    out += i < doc.disfluency.size() ? escape(doc.disfluency[i]) : "";
    out += '\t';
    if (i < mwu_of.size() && mwu_of[i] < doc.tok_mwu.size()) {
      const std::size_t s = mwu_of[i];
      out += escape(doc.tok_mwu[s].value);
      out += '\t';
      out += std::to_string(s);
      out += '\t';
      out += s < doc.pos_mwu.size() ? escape(doc.pos_mwu[s]) : "";
    } else {
      out += "\t\t";
    }
    out += '\t';
    if (disc_of[i]) {
      out += escape(doc.discourse[*disc_of[i]].value);
      out += '\t';
      out += std::to_string(*disc_of[i]);
    } else {
      out += '\t';
    }
    out += '\t';
    out += flags_of(t);
    for (const auto& [name, values] : doc.extra_columns) {
      out += '\t';
      out += i < values.size() ? escape(values[i]) : "";
    }
    out += '\n';
  }
  return out;
}

annot::Document read_tsv(std::string_view bytes) {
  annot::Document doc;

  auto lines = text::split(bytes, '\n');
  // Tolerate CRLF and a trailing newline.
  if (!lines.empty() && lines.back().empty()) lines.pop_back();

  std::size_t row = 0;
  std::size_t header_line = 0;
  std::vector<std::string> header;
  for (std::size_t li = 0; li < lines.size(); ++li) {
    std::string_view line = lines[li];
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line.front() == '#') {
      const auto body = line.substr(1);
      const auto eq = body.find('=');
      if (eq != std::string_view::npos) {
        const auto key = body.substr(0, eq);
        const auto value = unescape(body.substr(eq + 1));
        if (key == "sample-id") doc.meta.sample_id = value;
        else if (key == "subcorpus-id") doc.meta.subcorpus_id = value;
        else if (key == "pause-symbol") doc.pause_symbol = value;
      }
      continue;
    }
    for (const auto col : text::split(line, '\t')) header.emplace_back(unescape(col));
    header_line = li;
    break;
  }
  if (header.empty()) {
    // A file with no header row and no rows is an empty document.
    return doc;
  }

  std::map<std::string, std::size_t, std::less<>> col_index;
  for (std::size_t c = 0; c < header.size(); ++c) col_index.emplace(header[c], c);
  for (const auto required : {"tMin", "tMax", "speaker", "tok-min"}) {
    if (!col_index.count(required)) throw MissingColumn(required);
  }

  const auto col = [&](std::string_view name) -> std::optional<std::size_t> {
    auto it = col_index.find(name);
    if (it == col_index.end()) return std::nullopt;
    return it->second;
  };
  const auto c_tmin = *col("tMin"), c_tmax = *col("tMax"), c_speaker = *col("speaker"),
             c_text = *col("tok-min");
  const auto c_pos = col("pos-min"), c_disf = col("disfluency"), c_mwu = col("tok-mwu"),
             c_mwu_id = col("mwu-id"), c_pos_mwu = col("pos-mwu"), c_disc = col("discourse"),
             c_disc_id = col("discourse-id"), c_flags = col("flags");

  std::vector<std::size_t> extra_cols;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const bool fixed = std::any_of(std::begin(kFixedColumns), std::end(kFixedColumns),
                                   [&](std::string_view f) { return f == header[c]; });
    if (!fixed) {
      extra_cols.push_back(c);
      doc.extra_columns.emplace_back(header[c], std::vector<std::string>{});
    }
  }

  struct SpanAccum {
    std::string id;
    std::size_t begin = 0, end = 0;
    std::string value;
    std::string pos;
  };
  std::optional<SpanAccum> cur_mwu, cur_disc;
  const auto flush_mwu = [&] {
    if (cur_mwu) {
      doc.tok_mwu.push_back({cur_mwu->begin, cur_mwu->end, cur_mwu->value});
      doc.pos_mwu.push_back(cur_mwu->pos);
      cur_mwu.reset();
    }
  };
  const auto flush_disc = [&] {
    if (cur_disc) {
      doc.discourse.push_back({cur_disc->begin, cur_disc->end, cur_disc->value});
      cur_disc.reset();
    }
  };

  for (std::size_t li = header_line + 1; li < lines.size(); ++li) {
    std::string_view line = lines[li];
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    const auto cells = text::split(line, '\t');
    if (cells.size() != header.size()) {
      throw ParseError("row has " + std::to_string(cells.size()) + " cells, header has " +
                           std::to_string(header.size()),
                       li + 1);
    }
    annot::Token tok;
    if (!text::parse_double(cells[c_tmin], tok.t_min)) {
      throw ParseError("bad tMin value", li + 1);
    }
    if (!text::parse_double(cells[c_tmax], tok.t_max)) {
      throw ParseError("bad tMax value", li + 1);
    }
    tok.speaker = unescape(cells[c_speaker]);
    tok.text = unescape(cells[c_text]);
    if (c_flags) {
      apply_flags(tok, cells[*c_flags]);
    } else if (tok.text == doc.pause_symbol) {
      tok.is_pause = true;
    }
    doc.tokens.push_back(std::move(tok));
    doc.pos_min.push_back(c_pos ? unescape(cells[*c_pos]) : "");
    doc.disfluency.push_back(c_disf ? unescape(cells[*c_disf]) : "");

    const std::size_t i = row;
    // tok-mwu spans: contiguous rows sharing an mwu-id.
    if (c_mwu_id && !cells[*c_mwu_id].empty()) {
      const std::string id(cells[*c_mwu_id]);
      if (cur_mwu && cur_mwu->id == id && cur_mwu->end == i) {
        cur_mwu->end = i + 1;
      } else {
        flush_mwu();
        cur_mwu = SpanAccum{id, i, i + 1, c_mwu ? unescape(cells[*c_mwu]) : std::string(),
                            c_pos_mwu ? unescape(cells[*c_pos_mwu]) : std::string()};
      }
    } else {
      flush_mwu();
      doc.tok_mwu.push_back({i, i + 1, doc.tokens.back().text});
      doc.pos_mwu.push_back(c_pos_mwu ? unescape(cells[*c_pos_mwu]) : "");
    }
    if (c_disc_id && !cells[*c_disc_id].empty()) {
      const std::string id(cells[*c_disc_id]);
      if (cur_disc && cur_disc->id == id && cur_disc->end == i) {
        cur_disc->end = i + 1;
      } else {
        flush_disc();
        cur_disc = SpanAccum{id, i, i + 1, c_disc ? unescape(cells[*c_disc]) : std::string(), ""};
      }
    } else {
      flush_disc();
    }

    for (std::size_t e = 0; e < extra_cols.size(); ++e) {
      doc.extra_columns[e].second.push_back(unescape(cells[extra_cols[e]]));
    }
    ++row;
  }
  flush_mwu();
  flush_disc();
  return doc;
}

}  // namespace oratag::io
