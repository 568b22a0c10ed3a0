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

#ifndef TABLEBENCH_TABLE_MODEL_H_
#define TABLEBENCH_TABLE_MODEL_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "tablebench/text_sim.h"

namespace tablebench {

struct Cell {
  std::string content;
  int rowspan = 1;
  int colspan = 1;
  int row = 0;  // anchor
  int col = 0;
  bool is_header = false;

  friend bool operator==(const Cell&, const Cell&) = default;
};

// Canonical 2D table. Every slot is owned by exactly one cell once a Grid is
// constructed: holes left by span arithmetic are filled with empty 1x1 cells.
// Cells are stored in row-major anchor order. The default Grid is the 0x0
// empty table.
class Grid {
 public:
  Grid() = default;

  // Throws MalformedTable on overlapping or out-of-bounds cells.
  static Grid from_cells(int n_rows, int n_cols, std::vector<Cell> cells);

  int n_rows() const { return n_rows_; }
  int n_cols() const { return n_cols_; }
  bool empty() const { return n_rows_ == 0 || n_cols_ == 0; }
  std::size_t slot_count() const {
    return static_cast<std::size_t>(n_rows_) * static_cast<std::size_t>(n_cols_);
  }

  std::span<const Cell> cells() const { return cells_; }
  int owner(int r, int c) const { return occupancy_[r * n_cols_ + c]; }
  const Cell& cell_at(int r, int c) const { return cells_[owner(r, c)]; }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  int n_rows_ = 0;
  int n_cols_ = 0;
  std::vector<Cell> cells_;
  std::vector<int> occupancy_;
};

enum class Format { kHtml, kMarkdown, kLatex, kPlainText };

std::string_view format_name(Format f);
std::optional<Format> format_from_name(std::string_view name);
// ".html"/".htm" -> HTML, ".md" -> Markdown, ".tex" -> LaTeX, ".txt" -> plain.
std::optional<Format> format_from_extension(std::string_view ext);
Format sniff_format(std::string_view text);

Grid parse_html(std::string_view table_markup);
Grid parse_markdown(std::string_view table_text);
Grid parse_latex(std::string_view tabular_source);
// Columns split on runs of two or more spaces, or on tabs.
Grid parse_plain_text(std::string_view text);

// With a hint, exactly parse_<hint>. Without one, the sniffed parser runs
// first and the remaining parsers are tried in order; MalformedTable only if
// all of them fail.
Grid parse_auto(std::string_view table_text, std::optional<Format> hint = std::nullopt);

// Copy of g with the given rows removed. Cells spanning a removed row shrink;
// cells anchored only in removed rows disappear.
Grid remove_rows(const Grid& g, std::span<const int> rows);

enum class NodeKind { kTable, kRow, kCell };

struct TreeNode {
  NodeKind kind = NodeKind::kCell;
  int colspan = 1;
  int rowspan = 1;
  TokenSeq content;
  std::vector<int> children;
};

// Ordered tree in HTML shape: table -> row -> cell. Node 0 is the root.
struct TableTree {
  std::vector<TreeNode> nodes;

  std::size_t size() const { return nodes.size(); }
  int add(int parent, TreeNode node);
};

TableTree to_table_tree(const Grid& g);

struct CellTuple {
  int row = 0;
  int col = 0;
  std::string content;

  friend bool operator==(const CellTuple&, const CellTuple&) = default;
};

// One tuple per anchored cell, content normalized and lowercased.
std::vector<CellTuple> to_cell_tuples(const Grid& g);

// {n_rows, n_cols, cells: [{r, c, rs, cs, text, header}]}
nlohmann::json grid_to_json(const Grid& g);
Grid grid_from_json(const nlohmann::json& j);

}  // namespace tablebench

#endif  // TABLEBENCH_TABLE_MODEL_H_
