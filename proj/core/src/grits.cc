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

#include "tablebench/grits.h"

#include <algorithm>
#include <functional>

namespace tablebench {

std::vector<SpanRect> span_grid(const Grid& g) {
  std::vector<SpanRect> out;
  out.reserve(g.slot_count());
  for (int r = 0; r < g.n_rows(); ++r) {
    for (int c = 0; c < g.n_cols(); ++c) {
      const Cell& cell = g.cell_at(r, c);
      out.push_back(SpanRect{.left = cell.col - c,
                             .top = cell.row - r,
                             .right = cell.col + cell.colspan - 1 - c,
                             .bottom = cell.row + cell.rowspan - 1 - r});
    }
  }
  return out;
}

double cell_sim_top(const SpanRect& a, const SpanRect& b) {
  const auto area = [](const SpanRect& s) {
    return static_cast<double>(s.right - s.left + 1) * static_cast<double>(s.bottom - s.top + 1);
  };
  const int w = std::min(a.right, b.right) - std::max(a.left, b.left) + 1;
  const int h = std::min(a.bottom, b.bottom) - std::max(a.top, b.top) + 1;
  const double inter = (w > 0 && h > 0) ? static_cast<double>(w) * h : 0.0;
  const double uni = area(a) + area(b) - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

namespace {

// Slot similarities for one grid pair, cached per (gt cell, pred cell) for
// content and per slot for topology.
class SlotSimilarity {
 public:
  SlotSimilarity(const Grid& gt, const Grid& pred, GritsVariant variant)
      : gt_(gt), pred_(pred), variant_(variant) {
    if (variant == GritsVariant::kTop) {
      gt_rects_ = span_grid(gt);
      pred_rects_ = span_grid(pred);
    } else {
      std::vector<TokenSeq> gt_tokens;
      std::vector<TokenSeq> pred_tokens;
      for (const Cell& c : gt.cells()) gt_tokens.push_back(tokenize(c.content));
      for (const Cell& c : pred.cells()) pred_tokens.push_back(tokenize(c.content));
      cell_sim_.resize(gt_tokens.size() * pred_tokens.size());
      for (std::size_t i = 0; i < gt_tokens.size(); ++i) {
        for (std::size_t j = 0; j < pred_tokens.size(); ++j) {
          cell_sim_[i * pred_tokens.size() + j] = lcs_sim(gt_tokens[i], pred_tokens[j]);
        }
      }
    }
  }

  double operator()(int gr, int gc, int pr, int pc) const {
    if (variant_ == GritsVariant::kTop) {
      return cell_sim_top(gt_rects_[gr * gt_.n_cols() + gc], pred_rects_[pr * pred_.n_cols() + pc]);
    }
    return cell_sim_[static_cast<std::size_t>(gt_.owner(gr, gc)) * pred_.cells().size() +
                     pred_.owner(pr, pc)];
  }

 private:
  const Grid& gt_;
  const Grid& pred_;
  GritsVariant variant_;
  std::vector<SpanRect> gt_rects_;
  std::vector<SpanRect> pred_rects_;
  std::vector<double> cell_sim_;
};

struct Alignment1D {
  double score = 0.0;
  std::vector<std::pair<int, int>> pairs;
};

// Maximum-weight order-preserving matching between [0, n) and [0, m).
Alignment1D align_sequences(int n, int m, const std::function<double(int, int)>& weight) {
  std::vector<double> dp(static_cast<std::size_t>(n + 1) * (m + 1), 0.0);
  const auto at = [&](int i, int j) -> double& { return dp[i * (m + 1) + j]; };
  std::vector<double> w(static_cast<std::size_t>(n) * m);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) w[i * m + j] = weight(i, j);
  }
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= m; ++j) {
      at(i, j) = std::max({at(i - 1, j), at(i, j - 1), at(i - 1, j - 1) + w[(i - 1) * m + j - 1]});
    }
  }
  Alignment1D out;
  out.score = at(n, m);
  int i = n;
  int j = m;
  while (i > 0 && j > 0) {
    if (at(i, j) == at(i - 1, j)) {
      --i;
    } else if (at(i, j) == at(i, j - 1)) {
      --j;
    } else {
      out.pairs.emplace_back(i - 1, j - 1);
      --i;
      --j;
    }
  }
  std::reverse(out.pairs.begin(), out.pairs.end());
  return out;
}

double total_similarity(const GridAlignment& a, const SlotSimilarity& sim) {
  double total = 0.0;
  for (auto [gr, pr] : a.rows) {
    for (auto [gc, pc] : a.cols) total += sim(gr, gc, pr, pc);
  }
  return total;
}

constexpr std::size_t kMaxRestartSeeds = 16;

GridAlignment align_grids(const Grid& gt, const Grid& pred, const SlotSimilarity& sim) {
  const int R1 = gt.n_rows();
  const int C1 = gt.n_cols();
  const int R2 = pred.n_rows();
  const int C2 = pred.n_cols();

  const auto cols_given_rows = [&](const std::vector<std::pair<int, int>>& rows) {
    return align_sequences(C1, C2, [&](int gc, int pc) {
      double s = 0.0;
      for (auto [gr, pr] : rows) s += sim(gr, gc, pr, pc);
      return s;
    });
  };
  const auto rows_given_cols = [&](const std::vector<std::pair<int, int>>& cols) {
    return align_sequences(R1, R2, [&](int gr, int pr) {
      double s = 0.0;
      for (auto [gc, pc] : cols) s += sim(gr, gc, pr, pc);
      return s;
    });
  };

  // Alternately re-aligns one axis under the other until the similarity
  // mass stops improving. Each step is an exact 1D optimum, so the mass is
  // non-decreasing and bounded by the exhaustive optimum.
  const auto refine = [&](GridAlignment a) {
    double score = total_similarity(a, sim);
    for (int pass = 0; pass < 8; ++pass) {
      GridAlignment next{a.rows, cols_given_rows(a.rows).pairs};
      next.rows = rows_given_cols(next.cols).pairs;
      const double next_score = total_similarity(next, sim);
      if (next_score <= score) break;
      a = std::move(next);
      score = next_score;
    }
    return std::make_pair(std::move(a), score);
  };

  // Inner DP: best column alignment for every candidate row pair. Those
  // scores are the outer DP's row-pair reward.
  std::vector<double> row_pair_reward(static_cast<std::size_t>(R1) * R2);
  for (int gr = 0; gr < R1; ++gr) {
    for (int pr = 0; pr < R2; ++pr) {
      row_pair_reward[gr * R2 + pr] =
          align_sequences(C1, C2, [&](int gc, int pc) { return sim(gr, gc, pr, pc); }).score;
    }
  }
  std::vector<double> col_pair_reward(static_cast<std::size_t>(C1) * C2);
  for (int gc = 0; gc < C1; ++gc) {
    for (int pc = 0; pc < C2; ++pc) {
      col_pair_reward[gc * C2 + pc] =
          align_sequences(R1, R2, [&](int gr, int pr) { return sim(gr, gc, pr, pc); }).score;
    }
  }

  // Outer DP on rows, then columns re-aligned under the fixed rows; and the
  // transposed order.
  const Alignment1D rows = align_sequences(
      R1, R2, [&](int gr, int pr) { return row_pair_reward[gr * R2 + pr]; });
  auto [best, best_score] = refine(GridAlignment{rows.pairs, cols_given_rows(rows.pairs).pairs});
  const Alignment1D cols = align_sequences(
      C1, C2, [&](int gc, int pc) { return col_pair_reward[gc * C2 + pc]; });
  const auto consider = [&](std::pair<GridAlignment, double> candidate) {
    if (candidate.second > best_score) {
      best = std::move(candidate.first);
      best_score = candidate.second;
    }
  };
  consider(refine(GridAlignment{rows_given_cols(cols.pairs).pairs, cols.pairs}));

  // The outer DP breaks ties arbitrarily and can settle on a poor local
  // optimum. Restart the refinement from the strongest single row pairs and
  // column pairs.
  const auto top_pairs = [](const std::vector<double>& reward, int width, std::size_t limit) {
    std::vector<int> order(reward.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return reward[a] > reward[b]; });
    if (order.size() > limit) order.resize(limit);
    std::vector<std::pair<int, int>> out;
    for (int k : order) out.emplace_back(k / width, k % width);
    return out;
  };
  for (auto seed : top_pairs(row_pair_reward, R2, kMaxRestartSeeds)) {
    consider(refine(GridAlignment{{seed}, cols_given_rows({seed}).pairs}));
  }
  for (auto seed : top_pairs(col_pair_reward, C2, kMaxRestartSeeds)) {
    consider(refine(GridAlignment{rows_given_cols({seed}).pairs, {seed}}));
  }
  return best;
}

}  // namespace

double slot_similarity(const Grid& gt, int gt_row, int gt_col, const Grid& pred, int pred_row,
                       int pred_col, GritsVariant variant) {
  if (variant == GritsVariant::kTop) {
    const Cell& a = gt.cell_at(gt_row, gt_col);
    const Cell& b = pred.cell_at(pred_row, pred_col);
    return cell_sim_top(
        SpanRect{a.col - gt_col, a.row - gt_row, a.col + a.colspan - 1 - gt_col,
                 a.row + a.rowspan - 1 - gt_row},
        SpanRect{b.col - pred_col, b.row - pred_row, b.col + b.colspan - 1 - pred_col,
                 b.row + b.rowspan - 1 - pred_row});
  }
  return lcs_sim(tokenize(gt.cell_at(gt_row, gt_col).content),
                 tokenize(pred.cell_at(pred_row, pred_col).content));
}

GridAlignment grits_alignment(const Grid& gt, const Grid& pred, GritsVariant variant) {
  if (gt.empty() || pred.empty()) return {};
  const SlotSimilarity sim(gt, pred, variant);
  return align_grids(gt, pred, sim);
}

GritsResult grits(const Grid& gt, const Grid& pred, GritsVariant variant) {
  GritsResult result;
  result.variant = variant;
  if (gt.empty() && pred.empty()) {
    result.precision = result.recall = result.f_score = 1.0;
    return result;
  }
  if (gt.empty() || pred.empty()) return result;

  const SlotSimilarity sim(gt, pred, variant);
  const GridAlignment alignment = align_grids(gt, pred, sim);
  result.raw_similarity = total_similarity(alignment, sim);
  result.precision = result.raw_similarity / static_cast<double>(pred.slot_count());
  result.recall = result.raw_similarity / static_cast<double>(gt.slot_count());
  const double denom = result.precision + result.recall;
  result.f_score = denom > 0.0 ? 2.0 * result.precision * result.recall / denom : 0.0;
  return result;
}

}  // namespace tablebench
