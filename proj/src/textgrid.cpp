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

#include "oratag/textgrid.hpp"

#include <algorithm>
#include <cmath>

#include "oratag/text_util.hpp"

namespace oratag::io {

namespace {

std::string utf16_to_utf8(std::string_view bytes, bool big_endian) {
  if (bytes.size() % 2 != 0) throw EncodingError("odd byte count in UTF-16 input");
  std::string out;
  out.reserve(bytes.size() / 2);
  std::size_t i = 0;
  const auto next_unit = [&]() -> std::uint32_t {
    const auto a = static_cast<unsigned char>(bytes[i]);
    const auto b = static_cast<unsigned char>(bytes[i + 1]);
    i += 2;
    return big_endian ? (static_cast<std::uint32_t>(a) << 8 | b)
                      : (static_cast<std::uint32_t>(b) << 8 | a);
  };
  while (i < bytes.size()) {
    std::uint32_t cp = next_unit();
    if (cp >= 0xD800 && cp <= 0xDBFF) {
      if (i + 1 < bytes.size()) {
        const std::uint32_t lo = next_unit();
        if (lo >= 0xDC00 && lo <= 0xDFFF) {
          cp = 0x10000 + ((cp - 0xD800) << 10) + (lo - 0xDC00);
        } else {
          cp = 0xFFFD;
        }
      } else {
        cp = 0xFFFD;
        i = bytes.size();
      }
    } else if (cp >= 0xDC00 && cp <= 0xDFFF) {
      cp = 0xFFFD;
    }
    text::append_utf8(out, cp);
  }
  return out;
}

std::string decode_input(std::string_view bytes) {
  if (bytes.size() >= 2) {
    const auto b0 = static_cast<unsigned char>(bytes[0]);
    const auto b1 = static_cast<unsigned char>(bytes[1]);
    if (b0 == 0xFE && b1 == 0xFF) return utf16_to_utf8(bytes.substr(2), true);
    if (b0 == 0xFF && b1 == 0xFE) return utf16_to_utf8(bytes.substr(2), false);
  }
  if (bytes.size() >= 3 && static_cast<unsigned char>(bytes[0]) == 0xEF &&
      static_cast<unsigned char>(bytes[1]) == 0xBB && static_cast<unsigned char>(bytes[2]) == 0xBF) {
    return std::string(bytes.substr(3));
  }
  return std::string(bytes);
}

// Cursor over the decoded text. Quoted string values may span lines, so
// the cursor works on raw text and keeps its own line count.
class Cursor {
 public:
  explicit Cursor(std::string text) : text_(std::move(text)) {}

  std::size_t line() const { return line_; }
  bool at_end() {
    skip_blank();
    return pos_ >= text_.size();
  }

  // Next non-blank line, trimmed. Does not consume quoted material.
  std::string_view peek_line() {
    skip_blank();
    if (pos_ >= text_.size()) return {};
    std::size_t e = text_.find('\n', pos_);
    if (e == std::string::npos) e = text_.size();
    return text::trim(std::string_view(text_).substr(pos_, e - pos_));
  }

  void drop_line() {
    std::size_t e = text_.find('\n', pos_);
    if (e == std::string::npos) {
      pos_ = text_.size();
    } else {
      pos_ = e + 1;
      ++line_;
    }
  }

  // `key = <number>`; the key may carry decorations like "intervals:".
  double expect_number(std::string_view key) {
    const auto line_sv = peek_line();
    const auto eq = line_sv.find('=');
    if (eq == std::string_view::npos || text::trim(line_sv.substr(0, eq)) != key) {
      throw ParseError("expected '" + std::string(key) + " = ...', got '" + std::string(line_sv) +
                           "'",
                       line_);
    }
    double v = 0;
    if (!text::parse_double(text::trim(line_sv.substr(eq + 1)), v)) {
      throw ParseError("bad number for '" + std::string(key) + "'", line_);
    }
    drop_line();
    return v;
  }

  // `key = "..."` with Praat's quote doubling; the value may span lines.
  std::string expect_string(std::string_view key) {
    skip_blank();
    std::size_t eol = text_.find('\n', pos_);
    if (eol == std::string::npos) eol = text_.size();
    const auto head = std::string_view(text_).substr(pos_, eol - pos_);
    const auto eq = head.find('=');
    if (eq == std::string_view::npos || text::trim(head.substr(0, eq)) != key) {
      throw ParseError("expected '" + std::string(key) + " = \"...\"', got '" +
                           std::string(text::trim(head)) + "'",
                       line_);
    }
    std::size_t q = pos_ + eq + 1;
    while (q < text_.size() && (text_[q] == ' ' || text_[q] == '\t')) ++q;
    if (q >= text_.size() || text_[q] != '"') {
      throw ParseError("expected quoted string for '" + std::string(key) + "'", line_);
    }
    ++q;
    std::string value;
    while (true) {
      if (q >= text_.size()) throw ParseError("unterminated string", line_);
      const char c = text_[q];
      if (c == '"') {
        if (q + 1 < text_.size() && text_[q + 1] == '"') {
          value.push_back('"');
          q += 2;
          continue;
        }
        ++q;
        break;
      }
      if (c == '\n') ++line_;
      value.push_back(c);
      ++q;
    }
    // Consume the remainder of the closing line.
    std::size_t e = text_.find('\n', q);
    if (e == std::string::npos) {
      pos_ = text_.size();
    } else {
      pos_ = e + 1;
      ++line_;
    }
    return value;
  }

  bool peek_is(std::string_view prefix) { return text::starts_with(peek_line(), prefix); }

  void expect_line(std::string_view exact) {
    const auto l = peek_line();
    if (l != exact) {
      throw ParseError("expected '" + std::string(exact) + "', got '" + std::string(l) + "'",
                       line_);
    }
    drop_line();
  }

 private:
  void skip_blank() {
    while (pos_ < text_.size()) {
      std::size_t e = text_.find('\n', pos_);
      if (e == std::string::npos) e = text_.size();
      if (!text::trim(std::string_view(text_).substr(pos_, e - pos_)).empty()) return;
      if (e == text_.size()) {
        pos_ = text_.size();
        return;
      }
      pos_ = e + 1;
      ++line_;
    }
  }

  std::string text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += "\"";
  return out;
}

std::string num(double v) { return text::format_double_fixed(v, 6); }

}  // namespace

TextGrid read_textgrid(std::string_view bytes) {
  Cursor cur(decode_input(bytes));

  // Header. A short-format file starts with the same two header lines but
  // then carries bare values instead of `key = value` pairs.
  {
    const auto l = cur.peek_line();
    if (l != "File type = \"ooTextFile\"") {
      throw ParseError("not an ooTextFile TextGrid", cur.line());
    }
    cur.drop_line();
  }
  {
    const auto l = cur.peek_line();
    if (l != "Object class = \"TextGrid\"") {
      throw ParseError("not a TextGrid object", cur.line());
    }
    cur.drop_line();
  }
  if (!cur.peek_is("xmin")) {
    throw ParseError("short TextGrid format is not supported; use the long text format",
                     cur.line());
  }

  TextGrid grid;
  grid.xmin = cur.expect_number("xmin");
  grid.xmax = cur.expect_number("xmax");

  {
    const auto l = cur.peek_line();
    if (l == "tiers? <absent>") {
      cur.drop_line();
      return grid;
    }
    if (l != "tiers? <exists>") throw ParseError("expected tiers? flag", cur.line());
    cur.drop_line();
  }

  const auto size = cur.expect_number("size");
  if (!(size >= 0) || size > 1e7 || size != std::floor(size)) {
    throw ParseError("bad tier count", cur.line());
  }
  cur.expect_line("item []:");

  for (std::size_t t = 0; t < static_cast<std::size_t>(size); ++t) {
    {
      const auto l = cur.peek_line();
      if (!text::starts_with(l, "item [")) {
        throw ParseError("expected item [" + std::to_string(t + 1) + "]:", cur.line());
      }
      cur.drop_line();
    }
    const std::string klass = cur.expect_string("class");
    if (klass == "IntervalTier") {
      IntervalTier tier;
      tier.name = cur.expect_string("name");
      tier.xmin = cur.expect_number("xmin");
      tier.xmax = cur.expect_number("xmax");
      const auto n = cur.expect_number("intervals: size");
      if (!(n >= 0) || n > 1e8 || n != std::floor(n)) {
        throw ParseError("bad interval count", cur.line());
      }
      tier.intervals.reserve(static_cast<std::size_t>(n));
      for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
        {
          const auto l = cur.peek_line();
          if (!text::starts_with(l, "intervals [")) {
            throw ParseError("expected intervals [" + std::to_string(i + 1) + "]:", cur.line());
          }
          cur.drop_line();
        }
        Interval iv;
        iv.xmin = cur.expect_number("xmin");
        iv.xmax = cur.expect_number("xmax");
        iv.text = cur.expect_string("text");
        tier.intervals.push_back(std::move(iv));
      }
      grid.tiers.push_back(std::move(tier));
    } else if (klass == "TextTier") {
      const std::string name = cur.expect_string("name");
      cur.expect_number("xmin");
      cur.expect_number("xmax");
      const auto n = cur.expect_number("points: size");
      if (!(n >= 0) || n > 1e8 || n != std::floor(n)) {
        throw ParseError("bad point count", cur.line());
      }
      for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
        {
          const auto l = cur.peek_line();
          if (!text::starts_with(l, "points [")) {
            throw ParseError("expected points [" + std::to_string(i + 1) + "]:", cur.line());
          }
          cur.drop_line();
        }
        cur.expect_number("number");
        cur.expect_string("mark");
      }
      grid.warnings.push_back("skipped point tier \"" + name + "\"");
    } else {
      throw ParseError("unknown tier class \"" + klass + "\"", cur.line());
    }
  }
  return grid;
}

std::string write_textgrid(const TextGrid& grid) {
  for (const auto& tier : grid.tiers) {
    double prev = tier.xmin;
    for (std::size_t i = 0; i < tier.intervals.size(); ++i) {
      const auto& iv = tier.intervals[i];
      if (iv.xmax < iv.xmin) {
        throw InvariantError("interval " + std::to_string(i + 1) + " of tier \"" + tier.name +
                             "\" has negative duration");
      }
      if (std::abs(iv.xmin - prev) > 1e-6) {
        throw InvariantError("tier \"" + tier.name + "\" is not contiguous at interval " +
                             std::to_string(i + 1));
      }
      prev = iv.xmax;
    }
    if (!tier.intervals.empty() && std::abs(prev - tier.xmax) > 1e-6) {
      throw InvariantError("tier \"" + tier.name + "\" does not reach its xmax");
    }
  }

  std::string out;
  out += "File type = \"ooTextFile\"\n";
  out += "Object class = \"TextGrid\"\n\n";
  out += "xmin = " + num(grid.xmin) + " \n";
  out += "xmax = " + num(grid.xmax) + " \n";
  if (grid.tiers.empty()) {
    out += "tiers? <exists> \n";
    out += "size = 0 \n";
    out += "item []: \n";
    return out;
  }
  out += "tiers? <exists> \n";
  out += "size = " + std::to_string(grid.tiers.size()) + " \n";
  out += "item []: \n";
  for (std::size_t t = 0; t < grid.tiers.size(); ++t) {
    const auto& tier = grid.tiers[t];
    out += "    item [" + std::to_string(t + 1) + "]:\n";
    out += "        class = \"IntervalTier\" \n";
    out += "        name = " + quote(tier.name) + " \n";
    out += "        xmin = " + num(tier.xmin) + " \n";
    out += "        xmax = " + num(tier.xmax) + " \n";
    out += "        intervals: size = " + std::to_string(tier.intervals.size()) + " \n";
    for (std::size_t i = 0; i < tier.intervals.size(); ++i) {
      const auto& iv = tier.intervals[i];
      out += "        intervals [" + std::to_string(i + 1) + "]:\n";
      out += "            xmin = " + num(iv.xmin) + " \n";
      out += "            xmax = " + num(iv.xmax) + " \n";
      out += "            text = " + quote(iv.text) + " \n";
    }
  }
  return out;
}

IntervalTier make_contiguous(IntervalTier tier, double xmin, double xmax) {
  IntervalTier out;
  out.name = std::move(tier.name);
  out.xmin = xmin;
  out.xmax = xmax;
  double cursor = xmin;
  for (auto& iv : tier.intervals) {
    if (iv.xmin - cursor > 1e-9) out.intervals.push_back({cursor, iv.xmin, ""});
    cursor = iv.xmax;
    out.intervals.push_back(std::move(iv));
  }
  if (xmax - cursor > 1e-9) out.intervals.push_back({cursor, xmax, ""});
  if (out.intervals.empty()) out.intervals.push_back({xmin, xmax, ""});
  return out;
}

}  // namespace oratag::io
