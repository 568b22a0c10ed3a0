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

#include "tablebench/table_model.h"

#include <algorithm>
#include <regex>
#include <set>
#include <sstream>

#include "tablebench/errors.h"

namespace tablebench {

Grid Grid::from_cells(int n_rows, int n_cols, std::vector<Cell> cells) {
  if (n_rows < 0 || n_cols < 0) throw MalformedTable("negative grid dimensions");
  Grid g;
  if (n_rows == 0 || n_cols == 0) {
    if (!cells.empty()) throw MalformedTable("cells in a grid without slots");
    return g;
  }
  g.n_rows_ = n_rows;
  g.n_cols_ = n_cols;
  g.occupancy_.assign(static_cast<std::size_t>(n_rows) * n_cols, -1);

  std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
    return std::tie(a.row, a.col) < std::tie(b.row, b.col);
  });
  for (const Cell& c : cells) {
    if (c.rowspan < 1 || c.colspan < 1) throw MalformedTable("span must be >= 1");
    if (c.row < 0 || c.col < 0 || c.row + c.rowspan > n_rows || c.col + c.colspan > n_cols) {
      throw MalformedTable("cell extends past grid bounds");
    }
    for (int r = c.row; r < c.row + c.rowspan; ++r) {
      for (int k = c.col; k < c.col + c.colspan; ++k) {
        if (g.occupancy_[r * n_cols + k] != -1) {
          throw MalformedTable("overlapping cells at slot (" + std::to_string(r) + "," +
                               std::to_string(k) + ")");
        }
        g.occupancy_[r * n_cols + k] = 0;
      }
    }
  }
  for (int r = 0; r < n_rows; ++r) {
    for (int k = 0; k < n_cols; ++k) {
      if (g.occupancy_[r * n_cols + k] == -1) {
        cells.push_back(Cell{.content = "", .row = r, .col = k});
      }
    }
  }
  std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
    return std::tie(a.row, a.col) < std::tie(b.row, b.col);
  });
  g.cells_ = std::move(cells);
  for (std::size_t i = 0; i < g.cells_.size(); ++i) {
    const Cell& c = g.cells_[i];
    for (int r = c.row; r < c.row + c.rowspan; ++r) {
      for (int k = c.col; k < c.col + c.colspan; ++k) {
        g.occupancy_[r * n_cols + k] = static_cast<int>(i);
      }
    }
  }
  return g;
}

std::string_view format_name(Format f) {
  switch (f) {
    case Format::kHtml:
      return "html";
    case Format::kMarkdown:
      return "markdown";
    case Format::kLatex:
      return "latex";
    case Format::kPlainText:
      return "text";
  }
  return "text";
}

std::optional<Format> format_from_name(std::string_view name) {
  if (name == "html") return Format::kHtml;
  if (name == "markdown" || name == "md") return Format::kMarkdown;
  if (name == "latex" || name == "tex") return Format::kLatex;
  if (name == "text" || name == "txt" || name == "plain") return Format::kPlainText;
  return std::nullopt;
}

std::optional<Format> format_from_extension(std::string_view ext) {
  if (!ext.empty() && ext.front() == '.') ext.remove_prefix(1);
  if (ext == "html" || ext == "htm") return Format::kHtml;
  if (ext == "md") return Format::kMarkdown;
  if (ext == "tex") return Format::kLatex;
  if (ext == "txt") return Format::kPlainText;
  return std::nullopt;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto not_space = [](char c) {
    return c != ' ' && c != '\t' && c != '\n' && c != '\r' && c != '\f' && c != '\v';
  };
  auto b = std::find_if(s.begin(), s.end(), not_space);
  auto e = std::find_if(s.rbegin(), s.rend(), not_space).base();
  if (b >= e) return {};
  return s.substr(b - s.begin(), e - b);
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

bool is_delimiter_row(std::string_view line) {
  static const std::regex kDelim(R"(^\s*\|?\s*:?-+:?\s*(\|\s*:?-+:?\s*)*\|?\s*$)");
  if (line.find('|') == std::string_view::npos) return false;
  return std::regex_match(line.begin(), line.end(), kDelim);
}

// Splits a markdown row on unescaped pipes, dropping the border pipes.
std::vector<std::string> split_pipe_row(std::string_view line) {
  line = trim(line);
  std::vector<std::string> cells;
  std::string current;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '\\' && i + 1 < line.size() && line[i + 1] == '|') {
      current.push_back('|');
      ++i;
    } else if (line[i] == '|') {
      cells.push_back(current);
      current.clear();
    } else {
      current.push_back(line[i]);
    }
  }
  cells.push_back(current);
  if (!line.empty() && line.front() == '|') cells.erase(cells.begin());
  const bool trailing_pipe = line.size() >= 1 && line.back() == '|' &&
                             !(line.size() >= 2 && line[line.size() - 2] == '\\');
  if (trailing_pipe && !cells.empty()) cells.pop_back();
  for (auto& c : cells) c = std::string(trim(c));
  return cells;
}

Grid grid_from_rows(const std::vector<std::vector<std::string>>& rows, bool first_row_header) {
  int n_cols = 0;
  for (const auto& r : rows) n_cols = std::max(n_cols, static_cast<int>(r.size()));
  std::vector<Cell> cells;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      cells.push_back(Cell{.content = rows[r][c],
                           .row = static_cast<int>(r),
                           .col = static_cast<int>(c),
                           .is_header = first_row_header && r == 0});
    }
  }
  Grid g = Grid::from_cells(static_cast<int>(rows.size()), n_cols, std::move(cells));
  if (first_row_header) {
    // Padding cells in the header row are header cells too.
    std::vector<Cell> all(g.cells().begin(), g.cells().end());
    for (Cell& c : all) c.is_header = c.row == 0;
    g = Grid::from_cells(g.n_rows(), g.n_cols(), std::move(all));
  }
  return g;
}

}  // namespace

Format sniff_format(std::string_view text) {
  const std::string_view t = trim(text);
  if (!t.empty() && t.front() == '<' && ascii_lower(t).find("<table") != std::string::npos) {
    return Format::kHtml;
  }
  if (t.find("\\begin{tabular") != std::string_view::npos) return Format::kLatex;
  for (std::string_view line : split_lines(t)) {
    if (is_delimiter_row(line)) return Format::kMarkdown;
  }
  return Format::kPlainText;
}

Grid parse_markdown(std::string_view table_text) {
  std::vector<std::string_view> lines;
  for (std::string_view line : split_lines(table_text)) {
    if (!trim(line).empty()) lines.push_back(line);
  }
  if (lines.size() < 2 || is_delimiter_row(lines[0]) || !is_delimiter_row(lines[1])) {
    throw MalformedTable("markdown table needs a header row followed by a delimiter row");
  }
  std::vector<std::vector<std::string>> rows;
  rows.push_back(split_pipe_row(lines[0]));
  for (std::size_t i = 2; i < lines.size(); ++i) {
    if (lines[i].find('|') == std::string_view::npos) break;
    rows.push_back(split_pipe_row(lines[i]));
  }
  return grid_from_rows(rows, /*first_row_header=*/true);
}

Grid parse_plain_text(std::string_view text) {
  static const std::regex kSeparator(R"(\t+| {2,})");
  std::vector<std::vector<std::string>> rows;
  for (std::string_view line : split_lines(text)) {
    const std::string trimmed(trim(line));
    if (trimmed.empty()) continue;
    std::vector<std::string> row;
    std::sregex_token_iterator it(trimmed.begin(), trimmed.end(), kSeparator, -1), end;
    for (; it != end; ++it) row.push_back(std::string(trim(it->str())));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw MalformedTable("no content rows");
  return grid_from_rows(rows, /*first_row_header=*/false);
}

Grid parse_auto(std::string_view table_text, std::optional<Format> hint) {
  const auto run = [&](Format f) -> Grid {
    switch (f) {
      case Format::kHtml:
        return parse_html(table_text);
      case Format::kMarkdown:
        return parse_markdown(table_text);
      case Format::kLatex:
        return parse_latex(table_text);
      case Format::kPlainText:
        return parse_plain_text(table_text);
    }
    return parse_plain_text(table_text);
  };
  if (hint) return run(*hint);
  if (trim(table_text).empty()) throw MalformedTable("empty input");

  const Format first = sniff_format(table_text);
  std::string errors;
  for (Format f : {first, Format::kHtml, Format::kLatex, Format::kMarkdown, Format::kPlainText}) {
    try {
      return run(f);
    } catch (const MalformedTable& e) {
      errors += std::string(format_name(f)) + ": " + e.what() + "; ";
    }
  }
  throw MalformedTable("no parser accepted the input (" + errors + ")");
}

Grid remove_rows(const Grid& g, std::span<const int> rows) {
  const std::set<int> removed(rows.begin(), rows.end());
  std::vector<int> new_index(g.n_rows(), -1);
  int next = 0;
  for (int r = 0; r < g.n_rows(); ++r) {
    if (!removed.contains(r)) new_index[r] = next++;
  }
  std::vector<Cell> cells;
  for (const Cell& c : g.cells()) {
    int first = -1;
    int kept = 0;
    for (int r = c.row; r < c.row + c.rowspan; ++r) {
      if (new_index[r] < 0) continue;
      if (first < 0) first = new_index[r];
      ++kept;
    }
    if (kept == 0) continue;
    Cell moved = c;
    moved.row = first;
    moved.rowspan = kept;
    cells.push_back(std::move(moved));
  }
  return Grid::from_cells(next, next == 0 ? 0 : g.n_cols(), std::move(cells));
}

int TableTree::add(int parent, TreeNode node) {
  nodes.push_back(std::move(node));
  const int id = static_cast<int>(nodes.size()) - 1;
  if (parent >= 0) nodes[parent].children.push_back(id);
  return id;
}

TableTree to_table_tree(const Grid& g) {
  TableTree tree;
  tree.add(-1, TreeNode{.kind = NodeKind::kTable});
  std::size_t next_cell = 0;
  const auto cells = g.cells();
  for (int r = 0; r < g.n_rows(); ++r) {
    const int row = tree.add(0, TreeNode{.kind = NodeKind::kRow});
    for (; next_cell < cells.size() && cells[next_cell].row == r; ++next_cell) {
      const Cell& c = cells[next_cell];
      tree.add(row, TreeNode{.kind = NodeKind::kCell,
                             .colspan = c.colspan,
                             .rowspan = c.rowspan,
                             .content = tokenize(c.content)});
    }
  }
  return tree;
}

std::vector<CellTuple> to_cell_tuples(const Grid& g) {
  std::vector<CellTuple> out;
  out.reserve(g.cells().size());
  for (const Cell& c : g.cells()) {
    out.push_back(CellTuple{c.row, c.col, lowercase(normalize_text(c.content))});
  }
  return out;
}

nlohmann::json grid_to_json(const Grid& g) {
  nlohmann::json cells = nlohmann::json::array();
  for (const Cell& c : g.cells()) {
    cells.push_back({{"r", c.row},
                     {"c", c.col},
                     {"rs", c.rowspan},
                     {"cs", c.colspan},
                     {"text", c.content},
                     {"header", c.is_header}});
  }
  return {{"n_rows", g.n_rows()}, {"n_cols", g.n_cols()}, {"cells", std::move(cells)}};
}

Grid grid_from_json(const nlohmann::json& j) {
  try {
    std::vector<Cell> cells;
    for (const auto& c : j.at("cells")) {
      cells.push_back(Cell{.content = c.at("text").get<std::string>(),
                           .rowspan = c.at("rs").get<int>(),
                           .colspan = c.at("cs").get<int>(),
                           .row = c.at("r").get<int>(),
                           .col = c.at("c").get<int>(),
                           .is_header = c.value("header", false)});
    }
    return Grid::from_cells(j.at("n_rows").get<int>(), j.at("n_cols").get<int>(),
                            std::move(cells));
  } catch (const nlohmann::json::exception& e) {
    throw MalformedTable(std::string("bad grid json: ") + e.what());
  }
}

}  // namespace tablebench
