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


#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "tablebench/grits.h"
#include "tablebench/meta_eval.h"
#include "tablebench/post_validate.h"
#include "tablebench/score_metric.h"
#include "tablebench/table_model.h"
#include "tablebench/teds.h"

namespace {

using namespace tablebench;

Grid make_grid(int rows, int cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> value(0, 999);
  std::vector<Cell> cells;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      cells.push_back(Cell{r == 0 ? "col " + std::to_string(c) : std::to_string(value(rng)) + ".5", 1, 1, r, c,
                           r == 0});
    }
  }
  return Grid::from_cells(rows, cols, std::move(cells));
}

// A prediction with one row dropped and a tenth of the cells rewritten.
Grid make_noisy(const Grid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::vector<int> drop = {g.n_rows() / 2};
  const Grid kept = remove_rows(g, drop);
  std::vector<Cell> cells(kept.cells().begin(), kept.cells().end());
  for (auto& c : cells) {
    if (std::bernoulli_distribution(0.1)(rng)) c.content += "x";
  }
  return Grid::from_cells(kept.n_rows(), kept.n_cols(), std::move(cells));
}

void BM_Teds(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Grid gt = make_grid(n, 6, 1);
  const Grid pred = make_noisy(gt, 2);
  for (auto _ : state) benchmark::DoNotOptimize(teds(gt, pred).score);
  state.SetLabel(std::to_string(n) + "x6");
}
BENCHMARK(BM_Teds)->Arg(5)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMicrosecond);

void BM_GritsCon(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Grid gt = make_grid(n, 6, 3);
  const Grid pred = make_noisy(gt, 4);
  for (auto _ : state) benchmark::DoNotOptimize(grits(gt, pred, GritsVariant::kCon).f_score);
  state.SetLabel(std::to_string(n) + "x6");
}
BENCHMARK(BM_GritsCon)->Arg(5)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMicrosecond);

void BM_GritsTop(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Grid gt = make_grid(n, 6, 5);
  const Grid pred = make_noisy(gt, 6);
  for (auto _ : state) benchmark::DoNotOptimize(grits(gt, pred, GritsVariant::kTop).f_score);
}
BENCHMARK(BM_GritsTop)->Arg(10)->Arg(40)->Unit(benchmark::kMicrosecond);

void BM_Score(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Grid gt = make_grid(n, 6, 7);
  const Grid pred = make_noisy(gt, 8);
  for (auto _ : state) benchmark::DoNotOptimize(score_metric(gt, pred, 1).average);
}
BENCHMARK(BM_Score)->Arg(10)->Arg(40)->Unit(benchmark::kMicrosecond);

void BM_HtmlParse(benchmark::State& state) {
  const Grid g = make_grid(static_cast<int>(state.range(0)), 6, 9);
  std::string html = "<table>";
  for (int r = 0; r < g.n_rows(); ++r) {
    html += "<tr>";
    for (int c = 0; c < g.n_cols(); ++c) html += "<td>" + g.cell_at(r, c).content + "</td>";
    html += "</tr>";
  }
  html += "</table>";
  for (auto _ : state) benchmark::DoNotOptimize(parse_html(html).n_rows());
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * html.size()));
}
BENCHMARK(BM_HtmlParse)->Arg(10)->Arg(100);

void BM_PostValidateFuzzy(benchmark::State& state) {
  std::string output;
  for (int i = 0; i < state.range(0); ++i) output += "| row " + std::to_string(i) + " | " + std::to_string(i * 3) + " |\n";
  std::string cand;
  for (int i = 10; i < 30; ++i) cand += "| row " + std::to_string(i) + " | " + std::to_string(i == 20 ? 0 : i * 3) + " |\n";
  for (auto _ : state) benchmark::DoNotOptimize(post_validate(cand, output).validation);
}
BENCHMARK(BM_PostValidateFuzzy)->Arg(100)->Arg(1000);

void BM_KrippendorffAlpha(benchmark::State& state) {
  std::mt19937_64 rng(11);
  RatingSet ratings;
  for (int u = 0; u < state.range(0); ++u) {
    for (int a = 0; a < 3; ++a) {
      ratings.add("u" + std::to_string(u), "a" + std::to_string(a), std::uniform_int_distribution<int>(0, 10)(rng));
    }
  }
  for (auto _ : state) benchmark::DoNotOptimize(krippendorff_alpha_interval(ratings));
}
BENCHMARK(BM_KrippendorffAlpha)->Arg(518);

}  // namespace

BENCHMARK_MAIN();
