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

#include "test_util.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "tablebench/grits.h"
#include "tablebench/teds.h"
#include "tablebench/text_sim.h"

#ifndef TABLEBENCH_FIXTURE_DIR
#error "TABLEBENCH_FIXTURE_DIR must be defined"
#endif

namespace tbtest {

using tablebench::Cell;
using tablebench::NodeKind;
using tablebench::TreeNode;

std::string render_html(const Grid& g) {
  std::string out = "<table>";
  for (int r = 0; r < g.n_rows(); ++r) {
    out += "<tr>";
    for (const Cell& c : g.cells()) {
      if (c.row != r) continue;
      const char* tag = c.is_header ? "th" : "td";
      out += std::string("<") + tag;
      if (c.rowspan > 1) out += " rowspan=\"" + std::to_string(c.rowspan) + "\"";
      if (c.colspan > 1) out += " colspan=\"" + std::to_string(c.colspan) + "\"";
      out += ">" + c.content + "</" + tag + ">";
    }
    out += "</tr>";
  }
  return out + "</table>";
}

std::string render_markdown(const Grid& g) {
  std::string out;
  for (int r = 0; r < g.n_rows(); ++r) {
    out += "|";
    for (int c = 0; c < g.n_cols(); ++c) out += " " + g.cell_at(r, c).content + " |";
    out += "\n";
    if (r == 0) {
      out += "|";
      for (int c = 0; c < g.n_cols(); ++c) out += "---|";
      out += "\n";
    }
  }
  return out;
}

std::string render_latex(const Grid& g) {
  std::string out = "\\begin{tabular}{" + std::string(static_cast<std::size_t>(g.n_cols()), 'c') + "}\n";
  for (int r = 0; r < g.n_rows(); ++r) {
    std::vector<std::string> parts;
    for (int c = 0; c < g.n_cols();) {
      const Cell& cell = g.cell_at(r, c);
      std::string body;
      if (cell.row == r) {
        body = cell.content;
        if (cell.rowspan > 1) body = "\\multirow{" + std::to_string(cell.rowspan) + "}{*}{" + body + "}";
      }
      if (cell.colspan > 1) body = "\\multicolumn{" + std::to_string(cell.colspan) + "}{c}{" + body + "}";
      parts.push_back(body);
      c += cell.colspan;
    }
    for (std::size_t i = 0; i < parts.size(); ++i) {
      out += (i ? " & " : " ") + parts[i];
    }
    out += " \\\\\n";
  }
  return out + "\\end{tabular}";
}

Grid random_grid(std::mt19937_64& rng, int max_rows, int max_cols,
                 const std::vector<std::string>& alphabet, double span_probability) {
  std::uniform_int_distribution<int> rows_d(1, max_rows), cols_d(1, max_cols);
  std::uniform_int_distribution<std::size_t> sym(0, alphabet.size() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int R = rows_d(rng), C = cols_d(rng);
  std::vector<int> owner(static_cast<std::size_t>(R * C), -1);
  std::vector<Cell> cells;
  for (int r = 0; r < R; ++r) {
    for (int c = 0; c < C; ++c) {
      if (owner[r * C + c] >= 0) continue;
      int h = 1, w = 1;
      if (unit(rng) < span_probability) {
        h = std::uniform_int_distribution<int>(1, std::min(2, R - r))(rng);
        w = std::uniform_int_distribution<int>(1, std::min(2, C - c))(rng);
        for (int rr = r; rr < r + h; ++rr) {
          for (int cc = c; cc < c + w; ++cc) {
            if (owner[rr * C + cc] >= 0) h = w = 1;
          }
        }
      }
      const int id = static_cast<int>(cells.size());
      for (int rr = r; rr < r + h; ++rr) {
        for (int cc = c; cc < c + w; ++cc) owner[rr * C + cc] = id;
      }
      cells.push_back(Cell{alphabet[sym(rng)], h, w, r, c, false});
    }
  }
  return Grid::from_cells(R, C, std::move(cells));
}

Grid random_plain_grid(std::mt19937_64& rng, int rows, int cols,
                       const std::vector<std::string>& alphabet) {
  std::uniform_int_distribution<std::size_t> sym(0, alphabet.size() - 1);
  std::vector<Cell> cells;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) cells.push_back(Cell{alphabet[sym(rng)], 1, 1, r, c, false});
  }
  return Grid::from_cells(rows, cols, std::move(cells));
}

TableTree random_tree(std::mt19937_64& rng, int max_nodes, const std::vector<std::string>& alphabet) {
  const int n = std::uniform_int_distribution<int>(1, max_nodes)(rng);
  std::uniform_int_distribution<int> kind(0, 2), span(1, 2);
  std::uniform_int_distribution<std::size_t> sym(0, alphabet.size() - 1);
  TableTree t;
  auto make = [&] {
    TreeNode node;
    node.kind = static_cast<NodeKind>(kind(rng));
    if (node.kind == NodeKind::kCell) {
      node.content = tablebench::tokenize(alphabet[sym(rng)]);
      // Spans vary rarely so that content relabels dominate.
      node.colspan = std::uniform_int_distribution<int>(0, 4)(rng) == 0 ? span(rng) : 1;
      node.rowspan = std::uniform_int_distribution<int>(0, 4)(rng) == 0 ? span(rng) : 1;
    }
    return node;
  };
  t.add(-1, make());
  for (int i = 1; i < n; ++i) {
    const int parent = std::uniform_int_distribution<int>(0, i - 1)(rng);
    t.add(parent, make());
  }
  return t;
}

// ---- oracles -----------------------------------------------------------

namespace {

// Enumerates every order-preserving partial matching between [0, n) and
// [0, m), calling visit with the matched pairs.
void for_each_matching(int n, int m, const std::function<void(const std::vector<std::pair<int, int>>&)>& visit) {
  std::vector<std::pair<int, int>> pairs;
  std::function<void(int, int)> rec = [&](int i, int j0) {
    if (i == n) {
      visit(pairs);
      return;
    }
    rec(i + 1, j0);  // i unmatched
    for (int j = j0; j < m; ++j) {
      pairs.emplace_back(i, j);
      rec(i + 1, j + 1);
      pairs.pop_back();
    }
  };
  rec(0, 0);
}

}  // namespace

std::size_t brute_levenshtein(const std::u32string& a, const std::u32string& b) {
  std::size_t best = std::numeric_limits<std::size_t>::max();
  for_each_matching(static_cast<int>(a.size()), static_cast<int>(b.size()),
                    [&](const std::vector<std::pair<int, int>>& pairs) {
                      std::size_t cost = a.size() + b.size() - 2 * pairs.size();
                      for (const auto& [i, j] : pairs) cost += a[i] != b[j] ? 1 : 0;
                      best = std::min(best, cost);
                    });
  return best;
}

std::size_t brute_lcs(const std::u32string& a, const std::u32string& b) {
  std::size_t best = 0;
  for_each_matching(static_cast<int>(a.size()), static_cast<int>(b.size()),
                    [&](const std::vector<std::pair<int, int>>& pairs) {
                      for (const auto& [i, j] : pairs) {
                        if (a[i] != b[j]) return;
                      }
                      best = std::max(best, pairs.size());
                    });
  return best;
}

namespace {

struct Orders {
  std::vector<int> pre, post;
};

Orders orders(const TableTree& t) {
  Orders o{std::vector<int>(t.size()), std::vector<int>(t.size())};
  int pre = 0, post = 0;
  std::function<void(int)> walk = [&](int v) {
    o.pre[v] = pre++;
    for (int c : t.nodes[v].children) walk(c);
    o.post[v] = post++;
  };
  if (t.size() > 0) walk(0);
  return o;
}

}  // namespace

double brute_tree_edit_distance(const TableTree& a, const TableTree& b) {
  const Orders oa = orders(a), ob = orders(b);
  const int n = static_cast<int>(a.size()), m = static_cast<int>(b.size());
  const auto anc = [](const Orders& o, int x, int y) { return o.pre[x] < o.pre[y] && o.post[x] > o.post[y]; };
  const auto left = [](const Orders& o, int x, int y) { return o.pre[x] < o.pre[y] && o.post[x] < o.post[y]; };

  std::vector<std::pair<int, int>> mapping;
  std::vector<bool> used(static_cast<std::size_t>(m), false);
  double best = static_cast<double>(n + m);
  std::function<void(int, double)> rec = [&](int i, double relabel) {
    const double lower = relabel + static_cast<double>((n - static_cast<int>(mapping.size())) +
                                                       (m - static_cast<int>(mapping.size()))) -
                         2.0 * static_cast<double>(n - i);
    if (lower >= best) return;
    if (i == n) {
      best = std::min(best, relabel + static_cast<double>(n + m - 2 * static_cast<int>(mapping.size())));
      return;
    }
    rec(i + 1, relabel);
    for (int j = 0; j < m; ++j) {
      if (used[j]) continue;
      bool ok = true;
      for (const auto& [x, y] : mapping) {
        if (anc(oa, x, i) != anc(ob, y, j) || anc(oa, i, x) != anc(ob, j, y) ||
            left(oa, x, i) != left(ob, y, j) || left(oa, i, x) != left(ob, j, y)) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      used[j] = true;
      mapping.emplace_back(i, j);
      rec(i + 1, relabel + tablebench::relabel_cost(a.nodes[i], b.nodes[j]));
      mapping.pop_back();
      used[j] = false;
    }
  };
  rec(0, 0.0);
  return best;
}

double brute_grits_raw(const Grid& gt, const Grid& pred, bool content) {
  const auto variant = content ? tablebench::GritsVariant::kCon : tablebench::GritsVariant::kTop;
  double best = 0.0;
  for_each_matching(gt.n_rows(), pred.n_rows(), [&](const std::vector<std::pair<int, int>>& rows) {
    for_each_matching(gt.n_cols(), pred.n_cols(), [&](const std::vector<std::pair<int, int>>& cols) {
      double total = 0.0;
      for (const auto& [gr, pr] : rows) {
        for (const auto& [gc, pc] : cols) {
          total += tablebench::slot_similarity(gt, gr, gc, pred, pr, pc, variant);
        }
      }
      best = std::max(best, total);
    });
  });
  return best;
}

double direct_pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    syy += y[i] * y[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
}

std::vector<double> counting_mid_ranks(const std::vector<double>& x) {
  std::vector<double> ranks;
  for (double v : x) {
    double below = 0, equal = 0;
    for (double w : x) {
      below += w < v ? 1 : 0;
      equal += w == v ? 1 : 0;
    }
    ranks.push_back(below + (equal + 1.0) / 2.0);
  }
  return ranks;
}

double pair_count_kendall_tau_b(const std::vector<double>& x, const std::vector<double>& y) {
  double concordant = 0, discordant = 0, ties_x = 0, ties_y = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const double dx = x[i] - x[j], dy = y[i] - y[j];
      if (dx == 0 && dy == 0) continue;
      if (dx == 0) {
        ++ties_x;
      } else if (dy == 0) {
        ++ties_y;
      } else if ((dx > 0) == (dy > 0)) {
        ++concordant;
      } else {
        ++discordant;
      }
    }
  }
  return (concordant - discordant) /
         std::sqrt((concordant + discordant + ties_x) * (concordant + discordant + ties_y));
}

double pairwise_alpha_interval(const tablebench::RatingSet& r) {
  std::vector<std::vector<double>> units;
  for (const auto& [pair, by_annotator] : r.by_pair()) {
    if (by_annotator.size() < 2) continue;
    std::vector<double> v;
    for (const auto& [a, s] : by_annotator) v.push_back(s);
    units.push_back(std::move(v));
  }
  double n = 0, observed = 0;
  std::vector<double> all;
  for (const auto& u : units) {
    n += static_cast<double>(u.size());
    double within = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      for (std::size_t j = 0; j < u.size(); ++j) {
        if (i != j) within += (u[i] - u[j]) * (u[i] - u[j]);
      }
    }
    observed += within / static_cast<double>(u.size() - 1);
    all.insert(all.end(), u.begin(), u.end());
  }
  observed /= n;
  double expected = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = 0; j < all.size(); ++j) {
      if (i != j) expected += (all[i] - all[j]) * (all[i] - all[j]);
    }
  }
  expected /= n * (n - 1);
  if (expected == 0) return 1.0;
  return 1.0 - observed / expected;
}

TempDir::TempDir() {
  std::string tmpl = (std::filesystem::temp_directory_path() / "tablebench-XXXXXX").string();
  if (mkdtemp(tmpl.data()) == nullptr) throw std::runtime_error("mkdtemp failed");
  path_ = tmpl;
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::filesystem::path fixture_dir() { return TABLEBENCH_FIXTURE_DIR; }

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << text;
}

}  // namespace tbtest
