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

#ifndef TABLEBENCH_TEDS_H_
#define TABLEBENCH_TEDS_H_

#include <cstddef>

#include "tablebench/table_model.h"

namespace tablebench {

struct TedsResult {
  double distance = 0.0;
  std::size_t size_pred = 0;
  std::size_t size_gt = 0;
  double score = 1.0;  // 1 - distance / max(size_pred, size_gt), clamped to [0, 1]
};

// Relabel cost between two tree nodes: table/row nodes of the same kind are
// free, different kinds cost 1, cells with different spans cost 1, otherwise
// cells cost the normalized Levenshtein distance of their contents.
double relabel_cost(const TreeNode& a, const TreeNode& b);

// Exact ordered tree edit distance (Zhang-Shasha) with unit insert/delete.
double tree_edit_distance(const TableTree& t1, const TableTree& t2);

TedsResult teds(const Grid& gt, const Grid& pred);

}  // namespace tablebench

#endif  // TABLEBENCH_TEDS_H_
