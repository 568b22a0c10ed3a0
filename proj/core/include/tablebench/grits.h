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

#ifndef TABLEBENCH_GRITS_H_
#define TABLEBENCH_GRITS_H_

#include <utility>
#include <vector>

#include "tablebench/table_model.h"

namespace tablebench {

// Extent of a slot's owning cell, as offsets from the slot in slot units.
struct SpanRect {
  int left = 0;    // <= 0
  int top = 0;     // <= 0
  int right = 0;   // >= 0
  int bottom = 0;  // >= 0

  friend bool operator==(const SpanRect&, const SpanRect&) = default;
};

// Row-major n_rows x n_cols matrix of relative span rectangles.
std::vector<SpanRect> span_grid(const Grid& g);

// Intersection over union of two rectangles anchored at the same slot.
double cell_sim_top(const SpanRect& a, const SpanRect& b);

enum class GritsVariant { kTop, kCon };

struct GritsResult {
  GritsVariant variant = GritsVariant::kCon;
  double precision = 0.0;
  double recall = 0.0;
  double f_score = 0.0;
  double raw_similarity = 0.0;
};

// Order-preserving alignment of gt rows/columns to pred rows/columns.
struct GridAlignment {
  std::vector<std::pair<int, int>> rows;
  std::vector<std::pair<int, int>> cols;
};

GritsResult grits(const Grid& gt, const Grid& pred, GritsVariant variant);

// The alignment behind grits(); exposed for diagnostics and tests.
GridAlignment grits_alignment(const Grid& gt, const Grid& pred, GritsVariant variant);

// Per-slot similarity used by the variant: span-rect IoU for Top, LCS
// similarity of the owning cells' contents for Con.
double slot_similarity(const Grid& gt, int gt_row, int gt_col, const Grid& pred, int pred_row,
                       int pred_col, GritsVariant variant);

}  // namespace tablebench

#endif  // TABLEBENCH_GRITS_H_
