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
#include <algorithm>

#include "tablebench/score_metric.h"
#include "test_util.h"

namespace tablebench {
namespace {

constexpr double kEps = 1e-12;

TEST(Score, Identity) {
  const Grid g =
      parse_html("<table><tr><td>a</td><td>b</td></tr><tr><td>c</td><td>d</td></tr></table>");
  for (int t : {0, 1, 3}) {
    const ScorePair s = score_metric(g, g, t);
    EXPECT_DOUBLE_EQ(s.index_accuracy, 1.0);
    EXPECT_DOUBLE_EQ(s.content_accuracy, 1.0);
    EXPECT_DOUBLE_EQ(s.average, 1.0);
  }
}

TEST(Score, TolerantMatch) {
  const Grid gt = Grid::from_cells(1, 1, {Cell{"x", 1, 1, 0, 0}});
  const Grid pred = Grid::from_cells(1, 2, {Cell{"", 1, 1, 0, 0}, Cell{"x", 1, 1, 0, 1}});
  const ScorePair s = score_metric(gt, pred, 1);
  EXPECT_DOUBLE_EQ(s.index_accuracy, 0.5);
  EXPECT_DOUBLE_EQ(s.content_accuracy, 1.0);
  const ScorePair strict = score_metric(gt, pred, 0);
  EXPECT_DOUBLE_EQ(strict.index_accuracy, 0.0);
}

TEST(Score, EmptyPrediction) {
  const Grid gt =
      parse_html("<table><tr><td>a</td><td>b</td></tr><tr><td>c</td><td>d</td></tr></table>");
  const ScorePair s = score_metric(gt, Grid{}, 1);
  EXPECT_DOUBLE_EQ(s.index_accuracy, 0.0);
  EXPECT_DOUBLE_EQ(s.content_accuracy, 0.0);
}

TEST(Score, CaseAndWhitespaceInsensitive) {
  const Grid gt = parse_html("<table><tr><td>Total  Cost</td></tr></table>");
  const Grid pred = parse_html("<table><tr><td>total cost</td></tr></table>");
  EXPECT_DOUBLE_EQ(score_metric(gt, pred).index_accuracy, 1.0);
}

TEST(Score, PartialContentCredit) {
  const Grid gt = parse_html("<table><tr><td>85.0%</td></tr></table>");
  const Grid pred = parse_html("<table><tr><td>85%</td></tr></table>");
  const ScorePair s = score_metric(gt, pred, 1);
  EXPECT_DOUBLE_EQ(s.index_accuracy, 0.0);
  EXPECT_NEAR(s.content_accuracy, 0.6, kEps);
}

// A whole column displaced by one slot is still mostly credited: the
// tolerance hides a genuine structural error.
TEST(Score, ColumnShiftMasked) {
  const Grid gt = parse_html(
      "<table><tr><td>a</td><td>b</td><td>c</td></tr>"
      "<tr><td>d</td><td>e</td><td>f</td></tr></table>");
  const Grid pred = parse_html(
      "<table><tr><td>a</td><td>b</td><td></td><td>c</td></tr>"
      "<tr><td>d</td><td>e</td><td></td><td>f</td></tr></table>");
  const ScorePair s = score_metric(gt, pred, 1);
  EXPECT_GT(s.index_accuracy, 0.5);
  EXPECT_LT(s.index_accuracy, 1.0);
}

TEST(ScoreProperty, BoundsAverageAndToleranceMonotone) {
  std::mt19937_64 rng(31);
  for (int iter = 0; iter < 500; ++iter) {
    const Grid a = tbtest::random_grid(rng, 4, 4, {"a", "b", "ab", "c"});
    const Grid b = tbtest::random_grid(rng, 4, 4, {"a", "b", "ab", "c"});
    double previous = -1.0;
    for (int t = 0; t <= 4; ++t) {
      const ScorePair s = score_metric(a, b, t);
      ASSERT_GE(s.index_accuracy, 0.0);
      ASSERT_LE(s.index_accuracy, 1.0);
      ASSERT_GE(s.content_accuracy, 0.0);
      ASSERT_LE(s.content_accuracy, 1.0);
      ASSERT_EQ(s.average, (s.index_accuracy + s.content_accuracy) / 2);
      ASSERT_GE(s.index_accuracy, previous);
      previous = s.index_accuracy;
    }
    const ScorePair self = score_metric(a, a, iter % 3);
    ASSERT_DOUBLE_EQ(self.average, 1.0);
  }
}

// With unique contents and no tolerance, index accuracy is the share of gt
// cells whose content sits at the same anchor in pred.
TEST(ScoreProperty, ZeroToleranceOracle) {
  std::mt19937_64 rng(32);
  for (int iter = 0; iter < 500; ++iter) {
    const int rows = 1 + iter % 3;
    const int cols = 1 + (iter / 3) % 3;
    std::vector<std::string> labels;
    for (int i = 0; i < 9; ++i) labels.push_back("v" + std::to_string(i));
    std::shuffle(labels.begin(), labels.end(), rng);
    std::vector<Cell> gt_cells;
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) gt_cells.push_back(Cell{labels[r * cols + c], 1, 1, r, c});
    }
    const Grid gt = Grid::from_cells(rows, cols, gt_cells);
    const int prow = 1 + std::uniform_int_distribution<int>(0, 2)(rng);
    const int pcol = 1 + std::uniform_int_distribution<int>(0, 2)(rng);
    std::shuffle(labels.begin(), labels.end(), rng);
    std::vector<Cell> pred_cells;
    for (int r = 0; r < prow; ++r) {
      for (int c = 0; c < pcol; ++c) pred_cells.push_back(Cell{labels[r * pcol + c], 1, 1, r, c});
    }
    // Keep a few cells in place so the oracle is not always 0.
    for (auto& pc : pred_cells) {
      if (pc.row < rows && pc.col < cols && std::bernoulli_distribution(0.5)(rng)) {
        const std::string want = gt.cell_at(pc.row, pc.col).content;
        for (auto& other : pred_cells) {
          if (other.content == want) other.content = pc.content;
        }
        pc.content = want;
      }
    }
    const Grid pred = Grid::from_cells(prow, pcol, pred_cells);
    int exact = 0;
    for (const auto& c : gt.cells()) {
      if (c.row < prow && c.col < pcol && pred.cell_at(c.row, c.col).content == c.content) ++exact;
    }
    ASSERT_NEAR(score_metric(gt, pred, 0).index_accuracy,
                static_cast<double>(exact) / gt.cells().size(), kEps);
  }
}

}  // namespace
}  // namespace tablebench
