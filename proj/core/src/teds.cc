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

#include "tablebench/teds.h"

#include <algorithm>
#include <vector>

namespace tablebench {
namespace {

// Tree in postorder with 1-based indices, as the Zhang-Shasha recurrences
// expect. leftmost[i] is the postorder index of i's leftmost leaf.
struct PostorderTree {
  std::vector<const TreeNode*> node;  // node[0] unused
  std::vector<int> leftmost;
  std::vector<int> keyroots;
};

PostorderTree flatten(const TableTree& t) {
  PostorderTree out;
  out.node.push_back(nullptr);
  out.leftmost.push_back(0);
  if (t.nodes.empty()) return out;

  // Iterative postorder: (node id, next child index).
  std::vector<int> post_index(t.nodes.size(), 0);
  std::vector<std::pair<int, std::size_t>> stack = {{0, 0}};
  while (!stack.empty()) {
    auto& [id, next] = stack.back();
    const auto& children = t.nodes[id].children;
    if (next < children.size()) {
      const int child = children[next++];
      stack.emplace_back(child, 0);
      continue;
    }
    out.node.push_back(&t.nodes[id]);
    const int index = static_cast<int>(out.node.size()) - 1;
    post_index[id] = index;
    out.leftmost.push_back(children.empty() ? index : out.leftmost[post_index[children.front()]]);
    stack.pop_back();
  }
  // Keyroots: the highest node for each distinct leftmost leaf.
  const int n = static_cast<int>(out.node.size()) - 1;
  std::vector<bool> seen(n + 1, false);
  for (int i = n; i >= 1; --i) {
    if (!seen[out.leftmost[i]]) {
      out.keyroots.push_back(i);
      seen[out.leftmost[i]] = true;
    }
  }
  std::sort(out.keyroots.begin(), out.keyroots.end());
  return out;
}

}  // namespace

double relabel_cost(const TreeNode& a, const TreeNode& b) {
  if (a.kind == NodeKind::kCell && b.kind == NodeKind::kCell) {
    if (a.colspan != b.colspan || a.rowspan != b.rowspan) return 1.0;
    return norm_lev(a.content, b.content);
  }
  return a.kind == b.kind ? 0.0 : 1.0;
}

double tree_edit_distance(const TableTree& t1, const TableTree& t2) {
  const PostorderTree a = flatten(t1);
  const PostorderTree b = flatten(t2);
  const int n = static_cast<int>(a.node.size()) - 1;
  const int m = static_cast<int>(b.node.size()) - 1;
  if (n == 0 || m == 0) return static_cast<double>(n + m);

  std::vector<double> treedist(static_cast<std::size_t>(n + 1) * (m + 1), 0.0);
  const auto td = [&](int i, int j) -> double& { return treedist[i * (m + 1) + j]; };
  std::vector<double> fd;

  for (int i : a.keyroots) {
    for (int j : b.keyroots) {
      const int li = a.leftmost[i];
      const int lj = b.leftmost[j];
      const int rows = i - li + 2;
      const int cols = j - lj + 2;
      fd.assign(static_cast<std::size_t>(rows) * cols, 0.0);
      // fd index (x, y) stands for forests l(i)..l(i)+x-1 and l(j)..l(j)+y-1.
      const auto f = [&](int x, int y) -> double& { return fd[x * cols + y]; };
      for (int x = 1; x < rows; ++x) f(x, 0) = f(x - 1, 0) + 1.0;
      for (int y = 1; y < cols; ++y) f(0, y) = f(0, y - 1) + 1.0;
      for (int x = 1; x < rows; ++x) {
        const int i1 = li + x - 1;
        for (int y = 1; y < cols; ++y) {
          const int j1 = lj + y - 1;
          const double del = f(x - 1, y) + 1.0;
          const double ins = f(x, y - 1) + 1.0;
          if (a.leftmost[i1] == li && b.leftmost[j1] == lj) {
            const double ren = f(x - 1, y - 1) + relabel_cost(*a.node[i1], *b.node[j1]);
            f(x, y) = std::min({del, ins, ren});
            td(i1, j1) = f(x, y);
          } else {
            const int px = a.leftmost[i1] - li;
            const int py = b.leftmost[j1] - lj;
            f(x, y) = std::min({del, ins, f(px, py) + td(i1, j1)});
          }
        }
      }
    }
  }
  return td(n, m);
}

TedsResult teds(const Grid& gt, const Grid& pred) {
  const TableTree gt_tree = to_table_tree(gt);
  const TableTree pred_tree = to_table_tree(pred);
  TedsResult result;
  result.distance = tree_edit_distance(pred_tree, gt_tree);
  result.size_pred = pred_tree.size();
  result.size_gt = gt_tree.size();
  const double denom = static_cast<double>(std::max(result.size_pred, result.size_gt));
  result.score = denom == 0.0 ? 1.0 : std::clamp(1.0 - result.distance / denom, 0.0, 1.0);
  return result;
}

}  // namespace tablebench
