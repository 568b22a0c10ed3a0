// Copyright 2026 The tablebench Authors
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

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tablebench/errors.h"
#include "tablebench/table_model.h"

namespace tablebench {
namespace {

struct Tag {
  std::string name;  // lowercase
  bool closing = false;
  std::map<std::string, std::string> attrs;
};

struct RawCell {
  std::string text;
  int rowspan = 1;
  int colspan = 1;
  bool header = false;
};

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f'; }

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return s.substr(b, e - b);
}

void append_codepoint(std::string& out, char32_t cp) {
  out += to_utf8(std::u32string_view(&cp, 1));
}

std::string decode_entities(std::string_view text) {
  static const std::map<std::string, char32_t, std::less<>> kNamed = {
      {"amp", U'&'},       {"lt", U'<'},        {"gt", U'>'},        {"quot", U'"'},
      {"apos", U'\''},     {"nbsp", U' '},      {"ndash", U'–'}, {"mdash", U'—'},
      {"minus", U'−'}, {"plusmn", U'±'}, {"times", U'×'}, {"le", U'≤'},
      {"ge", U'≥'},   {"alpha", U'α'}, {"beta", U'β'}, {"gamma", U'γ'},
      {"delta", U'δ'}, {"mu", U'μ'},   {"sigma", U'σ'}, {"deg", U'°'},
      {"hellip", U'…'}, {"middot", U'·'}};
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '&') {
      out.push_back(text[i]);
      continue;
    }
    const std::size_t semi = text.find(';', i + 1);
    if (semi == std::string_view::npos || semi - i > 12) {
      out.push_back('&');
      continue;
    }
    const std::string_view name = text.substr(i + 1, semi - i - 1);
    if (!name.empty() && name[0] == '#') {
      char32_t cp = 0;
      bool ok = name.size() > 1;
      const bool hex = ok && (name[1] == 'x' || name[1] == 'X');
      for (std::size_t k = hex ? 2 : 1; ok && k < name.size(); ++k) {
        const char c = name[k];
        int digit = -1;
        if (c >= '0' && c <= '9') digit = c - '0';
        if (hex && c >= 'a' && c <= 'f') digit = c - 'a' + 10;
        if (hex && c >= 'A' && c <= 'F') digit = c - 'A' + 10;
        if (digit < 0) ok = false;
        cp = cp * (hex ? 16 : 10) + digit;
      }
      if (ok && (!hex || name.size() > 2) && cp > 0 && cp <= 0x10FFFF) {
        append_codepoint(out, cp);
        i = semi;
        continue;
      }
    } else if (auto it = kNamed.find(name); it != kNamed.end()) {
      append_codepoint(out, it->second);
      i = semi;
      continue;
    }
    out.push_back('&');
  }
  return out;
}

// Parses the tag starting at text[pos] == '<'. Returns the tag and advances
// pos past '>'. Returns nullopt for comments/doctype (pos still advanced).
std::optional<Tag> read_tag(std::string_view text, std::size_t& pos) {
  if (text.substr(pos, 4) == "<!--") {
    const std::size_t end = text.find("-->", pos + 4);
    pos = end == std::string_view::npos ? text.size() : end + 3;
    return std::nullopt;
  }
  std::size_t i = pos + 1;
  Tag tag;
  if (i < text.size() && text[i] == '/') {
    tag.closing = true;
    ++i;
  }
  if (i >= text.size() || !std::isalpha(static_cast<unsigned char>(text[i]))) {
    // Not a tag ('<' used as a literal, or "<!DOCTYPE").
    if (i < text.size() && (text[i] == '!' || text[i] == '?')) {
      const std::size_t end = text.find('>', i);
      pos = end == std::string_view::npos ? text.size() : end + 1;
      return std::nullopt;
    }
    return Tag{.name = "#text"};
  }
  const std::size_t name_start = i;
  while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '-')) {
    ++i;
  }
  tag.name = lower(std::string(text.substr(name_start, i - name_start)));
  while (i < text.size() && text[i] != '>') {
    if (is_space(text[i]) || text[i] == '/') {
      ++i;
      continue;
    }
    const std::size_t attr_start = i;
    while (i < text.size() && !is_space(text[i]) && text[i] != '=' && text[i] != '>' &&
           text[i] != '/') {
      ++i;
    }
    std::string name = lower(std::string(text.substr(attr_start, i - attr_start)));
    while (i < text.size() && is_space(text[i])) ++i;
    std::string value;
    if (i < text.size() && text[i] == '=') {
      ++i;
      while (i < text.size() && is_space(text[i])) ++i;
      if (i < text.size() && (text[i] == '"' || text[i] == '\'')) {
        const char quote = text[i++];
        const std::size_t end = text.find(quote, i);
        const std::size_t stop = end == std::string_view::npos ? text.size() : end;
        value = std::string(text.substr(i, stop - i));
        i = stop + (end == std::string_view::npos ? 0 : 1);
      } else {
        const std::size_t value_start = i;
        while (i < text.size() && !is_space(text[i]) && text[i] != '>') ++i;
        value = std::string(text.substr(value_start, i - value_start));
      }
    }
    if (!name.empty()) tag.attrs.emplace(std::move(name), std::move(value));
  }
  pos = i < text.size() ? i + 1 : text.size();
  return tag;
}

int span_attr(const Tag& tag, const char* name) {
  auto it = tag.attrs.find(name);
  if (it == tag.attrs.end()) return 1;
  try {
    const int v = std::stoi(it->second);
    return v >= 1 ? std::min(v, 1000) : (v == 0 ? 0 : 1);
  } catch (...) {
    return 1;
  }
}

}  // namespace

Grid parse_html(std::string_view text) {
  std::vector<std::vector<RawCell>> rows;
  bool seen_table = false;
  bool in_table = false;
  bool closed_table = false;
  bool row_open = false;
  bool cell_open = false;
  int caption_depth = 0;
  std::string pending_text;

  const auto close_cell = [&] {
    if (!cell_open) return;
    rows.back().back().text = trim(decode_entities(rows.back().back().text));
    cell_open = false;
  };

  std::size_t pos = 0;
  while (pos < text.size()) {
    if (text[pos] != '<') {
      const std::size_t next = text.find('<', pos);
      const std::size_t stop = next == std::string_view::npos ? text.size() : next;
      if (cell_open && caption_depth == 0) rows.back().back().text.append(text.substr(pos, stop - pos));
      pos = stop;
      continue;
    }
    const std::size_t tag_start = pos;
    std::optional<Tag> tag = read_tag(text, pos);
    if (!tag) continue;
    if (tag->name == "#text") {
      if (cell_open && caption_depth == 0) rows.back().back().text.push_back('<');
      pos = tag_start + 1;
      continue;
    }
    const std::string& name = tag->name;
    if (name == "table") {
      if (tag->closing) {
        if (!in_table) continue;
        close_cell();
        if (row_open) throw MalformedTable("unclosed row at </table>");
        in_table = false;
        closed_table = true;
      } else {
        if (in_table) throw MalformedTable("nested tables are not supported");
        if (closed_table) throw MalformedTable("more than one table element");
        seen_table = in_table = true;
      }
      continue;
    }
    if (!in_table) continue;
    if (name == "caption") {
      caption_depth += tag->closing ? -1 : 1;
      caption_depth = std::max(caption_depth, 0);
    } else if (name == "tr") {
      if (tag->closing) {
        close_cell();
        row_open = false;
      } else {
        close_cell();
        if (row_open) throw MalformedTable("unclosed row");
        rows.emplace_back();
        row_open = true;
      }
    } else if (name == "td" || name == "th") {
      close_cell();
      if (tag->closing) continue;
      if (!row_open) throw MalformedTable("cell outside of a row");
      rows.back().push_back(RawCell{.rowspan = span_attr(*tag, "rowspan"),
                                    .colspan = std::max(1, span_attr(*tag, "colspan")),
                                    .header = name == "th"});
      cell_open = true;
    } else if (name == "br") {
      if (cell_open) rows.back().back().text.push_back(' ');
    }
  }
  if (!seen_table) throw MalformedTable("no <table> element");
  if (in_table) {
    close_cell();
    if (row_open && !rows.empty() && !rows.back().empty()) {
      // Input ended inside a row without closing either the row or the table.
      throw MalformedTable("unclosed row at end of input");
    }
  }

  const int n_rows = static_cast<int>(rows.size());
  std::vector<std::vector<bool>> taken(n_rows);
  std::vector<Cell> cells;
  int n_cols = 0;
  for (int r = 0; r < n_rows; ++r) {
    int col = 0;
    for (const RawCell& raw : rows[r]) {
      auto& line = taken[r];
      while (col < static_cast<int>(line.size()) && line[col]) ++col;
      const int rowspan = raw.rowspan == 0 ? n_rows - r : std::min(raw.rowspan, n_rows - r);
      for (int rr = r; rr < r + rowspan; ++rr) {
        auto& occ = taken[rr];
        if (static_cast<int>(occ.size()) < col + raw.colspan) occ.resize(col + raw.colspan, false);
        for (int c = col; c < col + raw.colspan; ++c) {
          if (occ[c]) throw MalformedTable("span forces overlapping cells");
          occ[c] = true;
        }
      }
      cells.push_back(Cell{.content = raw.text,
                           .rowspan = rowspan,
                           .colspan = raw.colspan,
                           .row = r,
                           .col = col,
                           .is_header = raw.header});
      n_cols = std::max(n_cols, col + raw.colspan);
      col += raw.colspan;
    }
  }
  if (cells.empty()) throw MalformedTable("table has no cells");
  return Grid::from_cells(n_rows, n_cols, std::move(cells));
}

}  // namespace tablebench
