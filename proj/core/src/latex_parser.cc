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
#include <string>
#include <vector>

#include "tablebench/errors.h"
#include "tablebench/latex_source.h"
#include "tablebench/table_model.h"

namespace tablebench {
namespace {

using latex::match_brace;
using latex::read_group;
using latex::read_optional;
using latex::skip_spaces;

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string read_command_name(std::string_view s, std::size_t pos) {
  std::size_t e = pos;
  while (e < s.size() && std::isalpha(static_cast<unsigned char>(s[e]))) ++e;
  if (e < s.size() && s[e] == '*' && e > pos) ++e;
  return std::string(s.substr(pos, e - pos));
}

// Number of columns a column specification declares.
int count_columns(std::string_view spec) {
  int count = 0;
  std::size_t i = 0;
  while (i < spec.size()) {
    const char c = spec[i];
    if (c == '*') {
      std::size_t pos = i + 1;
      auto times = read_group(spec, pos);
      auto inner = read_group(spec, pos);
      if (!times || !inner) return count;
      int n = 0;
      try {
        n = std::stoi(*times);
      } catch (...) {
        n = 0;
      }
      count += std::max(0, n) * count_columns(*inner);
      i = pos;
    } else if (c == '@' || c == '!' || c == '>' || c == '<') {
      std::size_t pos = i + 1;
      if (!read_group(spec, pos)) return count;
      i = pos;
    } else if (c == 'p' || c == 'm' || c == 'b' || c == 'w' || c == 'W' || c == 'D' ||
               c == 'P' || c == 'M' || c == 'B') {
      ++count;
      std::size_t pos = i + 1;
      const int args = (c == 'D') ? 3 : (c == 'w' || c == 'W') ? 2 : 1;
      for (int a = 0; a < args; ++a) {
        std::size_t probe = pos;
        if (!read_group(spec, probe)) break;
        pos = probe;
      }
      i = pos;
    } else if (std::isalpha(static_cast<unsigned char>(c))) {
      ++count;
      std::size_t pos = i + 1;
      if (read_optional(spec, pos)) {
        i = pos;
      } else {
        ++i;
      }
      std::size_t probe = i;
      // X{...}-style column options, e.g. tabularx/siunitx variants.
      if (probe < spec.size() && spec[probe] == '{' && (c == 'X' || c == 'S')) {
        if (read_group(spec, probe)) i = probe;
      }
    } else if (c == '{') {
      auto close = match_brace(spec, i);
      i = close ? *close + 1 : spec.size();
    } else {
      ++i;
    }
  }
  return count;
}

// Splits on a separator recognized by `is_sep` at brace depth 0 outside nested
// environments. `is_sep` returns the separator length at pos, or 0.
template <typename SepFn>
std::vector<std::string> split_top_level(std::string_view s, SepFn is_sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  int depth = 0;
  int env_depth = 0;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (c == '\\') {
      if (depth == 0 && env_depth == 0) {
        if (std::size_t len = is_sep(s, i); len > 0) {
          parts.emplace_back(s.substr(start, i - start));
          i += len;
          start = i;
          continue;
        }
      }
      if (s.compare(i, 7, "\\begin{") == 0) {
        ++env_depth;
      } else if (s.compare(i, 5, "\\end{") == 0) {
        env_depth = std::max(0, env_depth - 1);
      }
      i += (i + 1 < s.size() && !std::isalpha(static_cast<unsigned char>(s[i + 1]))) ? 2 : 1;
      continue;
    }
    if (c == '{') {
      ++depth;
    } else if (c == '}') {
      if (--depth < 0) throw MalformedTable("unbalanced braces in tabular body");
    } else if (depth == 0 && env_depth == 0) {
      if (std::size_t len = is_sep(s, i); len > 0) {
        parts.emplace_back(s.substr(start, i - start));
        i += len;
        start = i;
        continue;
      }
    }
    ++i;
  }
  if (depth != 0) throw MalformedTable("unbalanced braces in tabular body");
  parts.emplace_back(s.substr(start));
  return parts;
}

std::size_t row_separator(std::string_view s, std::size_t i) {
  if (s.compare(i, 2, "\\\\") == 0) {
    std::size_t pos = i + 2;
    if (pos < s.size() && s[pos] == '*') ++pos;
    std::size_t probe = pos;
    if (read_optional(s, probe)) pos = probe;
    return pos - i;
  }
  if (s.compare(i, 15, "\\tabularnewline") == 0) return 15;
  return 0;
}

std::size_t cell_separator(std::string_view s, std::size_t i) {
  return s[i] == '&' ? 1 : 0;
}

// Removes rule and row-decoration commands (with their arguments).
std::string strip_rules(std::string_view row) {
  struct RuleCommand {
    const char* name;
    int optional_args;
    int parens;
    int groups;
  };
  static const RuleCommand kRules[] = {
      {"hline", 0, 0, 0},       {"toprule", 1, 0, 0},      {"midrule", 1, 0, 0},
      {"bottomrule", 1, 0, 0},  {"cline", 0, 0, 1},        {"cmidrule", 1, 1, 1},
      {"addlinespace", 1, 0, 0}, {"specialrule", 0, 0, 3}, {"hhline", 0, 0, 1},
      {"rowcolor", 1, 0, 1},    {"noalign", 0, 0, 1},      {"morecmidrules", 0, 0, 0},
      {"hdashline", 1, 0, 0},   {"cdashline", 0, 0, 1},    {"firsthline", 0, 0, 0},
      {"lasthline", 0, 0, 0},   {"endhead", 0, 0, 0},      {"endfirsthead", 0, 0, 0}};
  std::string out;
  std::size_t i = 0;
  int depth = 0;
  while (i < row.size()) {
    const char c = row[i];
    if (c == '\\') {
      const std::string name = read_command_name(row, i + 1);
      const RuleCommand* rule = nullptr;
      for (const auto& r : kRules) {
        if (depth == 0 && name == r.name) rule = &r;
      }
      if (rule != nullptr) {
        std::size_t pos = i + 1 + name.size();
        for (int k = 0; k < rule->optional_args; ++k) {
          std::size_t probe = pos;
          if (read_optional(row, probe)) pos = probe;
        }
        if (rule->parens > 0) {
          const std::size_t probe = skip_spaces(row, pos);
          if (probe < row.size() && row[probe] == '(') {
            const std::size_t close = row.find(')', probe);
            if (close != std::string_view::npos) pos = close + 1;
          }
        }
        for (int k = 0; k < rule->groups; ++k) {
          std::size_t probe = pos;
          if (read_group(row, probe)) pos = probe;
        }
        i = pos;
        continue;
      }
      out.push_back(c);
      if (i + 1 < row.size()) out.push_back(row[i + 1]);
      i += 2;
      continue;
    }
    if (c == '{') ++depth;
    if (c == '}') --depth;
    out.push_back(c);
    ++i;
  }
  return out;
}

struct RawCell {
  std::string content;
  int colspan = 1;
  int rowspan = 1;  // negative: spans upward
  int col = 0;
  bool absorbed = false;
};

// Finds "\<command>" at brace depth 0 in `cell`; returns its index.
std::size_t find_top_level_command(std::string_view cell, std::string_view command) {
  int depth = 0;
  for (std::size_t i = 0; i < cell.size(); ++i) {
    const char c = cell[i];
    if (c == '\\') {
      if (depth == 0 && cell.compare(i + 1, command.size(), command) == 0 &&
          read_command_name(cell, i + 1) == command) {
        return i;
      }
      ++i;
      continue;
    }
    if (c == '{') ++depth;
    if (c == '}') --depth;
  }
  return std::string_view::npos;
}

int parse_count(const std::string& s) {
  try {
    return std::stoi(trim(s));
  } catch (...) {
    throw MalformedTable("bad span count '" + s + "'");
  }
}

void unwrap_spans(RawCell& cell) {
  // \multicolumn{n}{spec}{body}
  std::string text = trim(cell.content);
  for (int guard = 0; guard < 4; ++guard) {
    bool changed = false;
    if (std::size_t at = find_top_level_command(text, "multicolumn"); at != std::string::npos) {
      std::size_t pos = at + 12;
      auto n = read_group(text, pos);
      auto spec = read_group(text, pos);
      auto body = read_group(text, pos);
      if (!n || !spec || !body) throw MalformedTable("incomplete \\multicolumn");
      cell.colspan = std::max(1, parse_count(*n));
      text = trim(text.substr(0, at) + *body + text.substr(pos));
      changed = true;
    }
    // \multirow[vpos]{n}[bigstruts]{width}[fixup]{body}
    if (std::size_t at = find_top_level_command(text, "multirow"); at != std::string::npos) {
      std::size_t pos = at + 9;
      read_optional(text, pos);
      auto n = read_group(text, pos);
      read_optional(text, pos);
      auto width = read_group(text, pos);
      read_optional(text, pos);
      auto body = read_group(text, pos);
      if (!n || !width || !body) throw MalformedTable("incomplete \\multirow");
      const int count = parse_count(*n);
      cell.rowspan = count == 0 ? 1 : count;
      text = trim(text.substr(0, at) + *body + text.substr(pos));
      changed = true;
    }
    if (!changed) break;
  }
  cell.content = text;
}

}  // namespace

Grid parse_latex(std::string_view source) {
  const std::string s = latex::strip_comments(source);
  std::size_t begin = s.find("\\begin{tabular");
  if (begin == std::string::npos) throw MalformedTable("no tabular environment");
  std::size_t pos = begin + 6;
  auto env = read_group(s, pos);
  if (!env || (*env != "tabular" && *env != "tabular*" && *env != "tabularx")) {
    throw MalformedTable("unsupported environment");
  }
  if (*env != "tabular") {
    if (!read_group(s, pos)) throw MalformedTable("missing width argument");
  }
  read_optional(s, pos);
  auto spec = read_group(s, pos);
  if (!spec) throw MalformedTable("missing column specification");
  const std::size_t body_begin = pos;

  // Matching \end, skipping nested environments of the same name.
  const std::string open_tag = "\\begin{" + *env + "}";
  const std::string close_tag = "\\end{" + *env + "}";
  int depth = 1;
  std::size_t scan = body_begin;
  std::size_t body_end = std::string::npos;
  while (scan < s.size()) {
    const std::size_t next_open = s.find(open_tag, scan);
    const std::size_t next_close = s.find(close_tag, scan);
    if (next_close == std::string::npos) break;
    if (next_open != std::string::npos && next_open < next_close) {
      ++depth;
      scan = next_open + open_tag.size();
      continue;
    }
    if (--depth == 0) {
      body_end = next_close;
      break;
    }
    scan = next_close + close_tag.size();
  }
  if (body_end == std::string::npos) throw MalformedTable("unterminated tabular");
  const std::string_view body(s.data() + body_begin, body_end - body_begin);
  if (!latex::braces_balanced(body)) throw MalformedTable("unbalanced braces");

  std::vector<std::vector<RawCell>> rows;
  for (const std::string& raw_row : split_top_level(body, row_separator)) {
    const std::string row = strip_rules(raw_row);
    if (trim(row).empty()) continue;
    std::vector<RawCell> cells;
    int col = 0;
    for (const std::string& part : split_top_level(row, cell_separator)) {
      RawCell cell{.content = part};
      unwrap_spans(cell);
      cell.col = col;
      col += cell.colspan;
      cells.push_back(std::move(cell));
    }
    rows.push_back(std::move(cells));
  }
  if (rows.empty()) throw MalformedTable("tabular has no rows");

  const int n_rows = static_cast<int>(rows.size());
  int n_cols = count_columns(*spec);
  for (const auto& r : rows) {
    for (const auto& c : r) n_cols = std::max(n_cols, c.col + c.colspan);
  }

  std::vector<Cell> cells;
  for (int r = 0; r < n_rows; ++r) {
    for (RawCell& cell : rows[r]) {
      if (cell.absorbed) continue;
      int top = r;
      int bottom = r;  // inclusive
      if (cell.rowspan > 1) bottom = std::min(n_rows - 1, r + cell.rowspan - 1);
      if (cell.rowspan < -1) top = std::max(0, r + cell.rowspan + 1);
      const int left = cell.col;
      const int right = cell.col + cell.colspan;  // exclusive
      for (int rr = top; rr <= bottom; ++rr) {
        if (rr == r) continue;
        for (RawCell& other : rows[rr]) {
          if (other.absorbed || other.col + other.colspan <= left || other.col >= right) continue;
          if (!trim(other.content).empty() || other.col < left ||
              other.col + other.colspan > right || other.rowspan != 1) {
            throw MalformedTable("multirow overlaps a non-empty cell");
          }
          other.absorbed = true;
        }
      }
      cells.push_back(Cell{.content = cell.content,
                           .rowspan = bottom - top + 1,
                           .colspan = cell.colspan,
                           .row = top,
                           .col = cell.col});
    }
  }
  // Cells absorbed after being emitted (upward spans) must be dropped.
  std::vector<Cell> kept;
  for (const Cell& c : cells) {
    bool absorbed = false;
    for (const RawCell& raw : rows[c.row]) {
      if (raw.col == c.col && raw.absorbed && c.rowspan == 1) absorbed = true;
    }
    if (!absorbed) kept.push_back(c);
  }
  return Grid::from_cells(n_rows, n_cols, std::move(kept));
}

}  // namespace tablebench
