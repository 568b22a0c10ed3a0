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

#ifndef TABLEBENCH_SCORE_METRIC_H_
#define TABLEBENCH_SCORE_METRIC_H_

#include "tablebench/table_model.h"

namespace tablebench {

struct ScorePair {
  double index_accuracy = 0.0;
  double content_accuracy = 0.0;
  double average = 0.0;  // (index + content) / 2
};

// Weight of a match found within the tolerance window but off its anchor.
inline constexpr double kTolerantMatchWeight = 0.5;

// Cell-tuple metric with positional tolerance.
//
// Index accuracy: ground-truth tuples are matched to unmatched predicted
// tuples carrying identical (normalized, lowercased) content within Chebyshev
// distance `tolerance`. Matching runs in rounds of increasing distance (exact
// positions first), gt tuples in row-major order, candidates tie-broken
// row-major. An exact match weighs 1, a tolerant one kTolerantMatchWeight.
//
// Content accuracy: identical-content matches count 1; each remaining gt
// tuple takes the unused predicted tuple inside the window with the best
// 1 - norm_lev; gt tuples left without a partner count 0.
ScorePair score_metric(const Grid& gt, const Grid& pred, int tolerance = 1);

}  // namespace tablebench

#endif  // TABLEBENCH_SCORE_METRIC_H_
