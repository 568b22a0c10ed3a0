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

#include <gtest/gtest.h>

#include <random>

#include "tablebench/teds.h"
#include "test_util.h"

namespace tablebench {
namespace {

Grid html(const char* s) { return parse_html(s); }

TEST(Teds, Examples) {
  const Grid g = html("<table><tr><td>a</td><td>b</td></tr><tr><td>c</td><td>d</td></tr></table>");
  EXPECT_DOUBLE_EQ(teds(g, g).score, 1.0);

  const Grid x = html("<table><tr><td>x</td></tr></table>");
  const Grid y = html("<table><tr><td>y</td></tr></table>");
  const TedsResult xy = teds(x, y);
  EXPECT_DOUBLE_EQ(xy.distance, 1.0);
  EXPECT_NEAR(xy.score, 1.0 - 1.0 / 3.0, 1e-12);

  const Grid first_row = html("<table><tr><td>a</td><td>b</td></tr></table>");
  const TedsResult r = teds(g, first_row);
  EXPECT_DOUBLE_EQ(r.distance, 3.0);
  EXPECT_EQ(r.size_gt, 7u);
  EXPECT_EQ(r.size_pred, 4u);
  EXPECT_NEAR(r.score, 1.0 - 3.0 / 7.0, 1e-12);
}

TEST(Teds, EmptyTableTree) {
  TableTree root_only;
  root_only.nodes.push_back(TreeNode{NodeKind::kTable, 1, 1, {}, {}});
  const TableTree x = to_table_tree(html("<table><tr><td>x</td></tr></table>"));
  EXPECT_DOUBLE_EQ(tree_edit_distance(x, root_only), 2.0);
  EXPECT_DOUBLE_EQ(tree_edit_distance(root_only, x), 2.0);
}

TEST(Teds, RelabelCosts) {
  const TreeNode row{NodeKind::kRow, 1, 1, {}, {}};
  const TreeNode table{NodeKind::kTable, 1, 1, {}, {}};
  const TreeNode a{NodeKind::kCell, 1, 1, U"85.0%", {}};
  const TreeNode b{NodeKind::kCell, 1, 1, U"85%", {}};
  const TreeNode wide{NodeKind::kCell, 2, 1, U"85.0%", {}};
  EXPECT_DOUBLE_EQ(relabel_cost(row, row), 0.0);
  EXPECT_DOUBLE_EQ(relabel_cost(row, table), 1.0);
  EXPECT_DOUBLE_EQ(relabel_cost(row, a), 1.0);
  EXPECT_NEAR(relabel_cost(a, b), 0.4, 1e-12);
  EXPECT_DOUBLE_EQ(relabel_cost(a, wide), 1.0);
}

TEST(Teds, HeaderFlagIgnored) {
  const Grid th = html("<table><tr><th>a</th></tr><tr><td>1</td></tr></table>");
  const Grid td = html("<table><tr><td>a</td></tr><tr><td>1</td></tr></table>");
  EXPECT_DOUBLE_EQ(teds(th, td).score, 1.0);
}

TEST(TedsProperty, MatchesExhaustiveOracle) {
  std::mt19937_64 rng(11);
  const std::vector<std::string> alphabet = {"a", "b"};
  for (int iter = 0; iter < 500; ++iter) {
    const TableTree a = tbtest::random_tree(rng, 7, alphabet);
    const TableTree b = tbtest::random_tree(rng, 7, alphabet);
    const double dp = tree_edit_distance(a, b);
    const double brute = tbtest::brute_tree_edit_distance(a, b);
    ASSERT_NEAR(dp, brute, 1e-9) << "iteration " << iter;
  }
}

TEST(TedsProperty, SymmetryAndIdentity) {
  std::mt19937_64 rng(12);
  const std::vector<std::string> alphabet = {"a", "b", "ab", "12.5"};
  for (int iter = 0; iter < 300; ++iter) {
    const Grid g = tbtest::random_grid(rng, 4, 4, alphabet);
    const Grid h = tbtest::random_grid(rng, 4, 4, alphabet);
    ASSERT_DOUBLE_EQ(teds(g, g).score, 1.0);
    const TableTree tg = to_table_tree(g);
    const TableTree th = to_table_tree(h);
    ASSERT_NEAR(tree_edit_distance(tg, th), tree_edit_distance(th, tg), 1e-9);
    const TedsResult r = teds(g, h);
    ASSERT_GE(r.score, 0.0);
    ASSERT_LE(r.score, 1.0);
  }
}

TEST(TedsProperty, SpuriousRowStrictlyDegrades) {
  std::mt19937_64 rng(13);
  for (int iter = 0; iter < 200; ++iter) {
    const Grid g = tbtest::random_plain_grid(rng, 1 + iter % 4, 1 + iter % 3, {"a", "b", "c"});
    std::vector<Cell> cells(g.cells().begin(), g.cells().end());
    for (int c = 0; c < g.n_cols(); ++c) cells.push_back(Cell{"zz", 1, 1, g.n_rows(), c});
    const Grid extended = Grid::from_cells(g.n_rows() + 1, g.n_cols(), cells);
    ASSERT_LT(teds(g, extended).score, teds(g, g).score);
  }
}

}  // namespace
}  // namespace tablebench
