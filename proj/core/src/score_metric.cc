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

#include "tablebench/score_metric.h"

#include <algorithm>
#include <cstdlib>
#include <vector>

namespace tablebench {
namespace {

int chebyshev(const CellTuple& a, const CellTuple& b) {
  return std::max(std::abs(a.row - b.row), std::abs(a.col - b.col));
}

}  // namespace

ScorePair score_metric(const Grid& gt, const Grid& pred, int tolerance) {
  tolerance = std::max(0, tolerance);
  const std::vector<CellTuple> gt_tuples = to_cell_tuples(gt);
  const std::vector<CellTuple> pred_tuples = to_cell_tuples(pred);
  ScorePair out;
  if (gt_tuples.empty()) {
    const double v = pred_tuples.empty() ? 1.0 : 0.0;
    out.index_accuracy = out.content_accuracy = out.average = v;
    return out;
  }

  // Tuples are already row-major (Grid stores cells in anchor order).
  std::vector<int> partner(gt_tuples.size(), -1);
  std::vector<bool> used(pred_tuples.size(), false);
  double index_mass = 0.0;
  for (int distance = 0; distance <= tolerance; ++distance) {
    for (std::size_t g = 0; g < gt_tuples.size(); ++g) {
      if (partner[g] >= 0) continue;
      for (std::size_t p = 0; p < pred_tuples.size(); ++p) {
        if (used[p] || pred_tuples[p].content != gt_tuples[g].content) continue;
        if (chebyshev(gt_tuples[g], pred_tuples[p]) != distance) continue;
        partner[g] = static_cast<int>(p);
        used[p] = true;
        index_mass += distance == 0 ? 1.0 : kTolerantMatchWeight;
        break;
      }
    }
  }

  std::vector<TokenSeq> gt_tokens;
  std::vector<TokenSeq> pred_tokens;
  for (const auto& t : gt_tuples) gt_tokens.push_back(tokenize(t.content));
  for (const auto& t : pred_tuples) pred_tokens.push_back(tokenize(t.content));

  double content_mass = 0.0;
  for (std::size_t g = 0; g < gt_tuples.size(); ++g) {
    if (partner[g] >= 0) {
      content_mass += 1.0;
      continue;
    }
    int best = -1;
    double best_sim = 0.0;
    int best_distance = 0;
    for (std::size_t p = 0; p < pred_tuples.size(); ++p) {
      if (used[p]) continue;
      const int d = chebyshev(gt_tuples[g], pred_tuples[p]);
      if (d > tolerance) continue;
      const double sim = 1.0 - norm_lev(gt_tokens[g], pred_tokens[p]);
      if (sim > best_sim || (sim == best_sim && best >= 0 && d < best_distance)) {
        best = static_cast<int>(p);
        best_sim = sim;
        best_distance = d;
      }
    }
    if (best >= 0 && best_sim > 0.0) {
      used[best] = true;
      content_mass += best_sim;
    }
  }

  const double n = static_cast<double>(gt_tuples.size());
  out.index_accuracy = index_mass / n;
  out.content_accuracy = content_mass / n;
  out.average = (out.index_accuracy + out.content_accuracy) / 2.0;
  return out;
}

}  // namespace tablebench
