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

#ifndef TABLEBENCH_HARNESS_H_
#define TABLEBENCH_HARNESS_H_

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <tuple>
#include <string>
#include <utility>
#include <vector>

#include "tablebench/benchgen.h"
#include "tablebench/llm_tasks.h"
#include "tablebench/meta_eval.h"
#include "tablebench/score_record.h"
#include "tablebench/table_model.h"

namespace tablebench {

struct ParserOutput {
  std::string text;
  Format format = Format::kPlainText;  // from the file extension
  std::filesystem::path path;
};

struct IngestResult {
  // (parser id, page id) -> output. Pages a parser did not produce are absent.
  std::map<std::pair<std::string, std::string>, ParserOutput> outputs;
  std::set<std::string> parsers;
  std::vector<std::string> warnings;

  const ParserOutput* find(const std::string& parser, const std::string& page) const;
};

// Reads <root>/<parser>/<page>.{html,htm,md,tex,txt}. Files with other
// extensions are ignored; when a page exists in several formats the first of
// html, md, tex, txt wins. Unreadable files throw IoError.
IngestResult ingest_outputs(const std::filesystem::path& root);

// A table-looking region of a parser output.
struct TableSegment {
  std::size_t begin = 0;
  std::size_t end = 0;
  Format format = Format::kPlainText;
  std::string text;
};

// HTML <table> elements, Markdown pipe tables, tabular environments and
// whitespace-aligned plain-text blocks, in document order.
std::vector<TableSegment> segment_tables(std::string_view output, Format hint);

// Similarity of a ground-truth grid and a candidate grid from cell text
// character bigrams (Dice coefficient).
double content_affinity(const Grid& gt, const Grid& candidate);

inline constexpr double kOfflineMatchThreshold = 0.3;

// Rule-based stand-in for the LLM matcher: segments the output and assigns
// segments to ground-truth tables greedily by content_affinity.
std::vector<MatchRecord> match_tables_offline(const std::vector<prompts::GtTable>& gt_tables,
                                              std::string_view parser_output, Format hint,
                                              const std::string& parser_id,
                                              const std::string& page_id);

// ---- scoring -----------------------------------------------------------

struct GtTableRef {
  std::string page_id;
  std::string table_id;
  std::string latex;
  Complexity complexity = Complexity::kSimple;
};

std::vector<GtTableRef> gt_tables_of(std::span<const PageGroundTruth> pages);

enum class MatcherMode { kLlm, kOffline };

struct BenchmarkOptions {
  MatcherMode matcher = MatcherMode::kOffline;
  bool judge = false;
  LlmGateway* gateway = nullptr;  // required for the LLM matcher or the judge
  int workers = 1;
  int score_tolerance = 1;
};

// Rule metrics and (optionally) the judge for one matched pair.
ScoreRecord score_pair(const GtTableRef& gt, const MatchRecord& match, const std::string& parser_id,
                       const BenchmarkOptions& opts);

using MatchKey = std::tuple<std::string, std::string, std::string>;  // parser, page, table

// Matches every ground-truth table on every page against every parser,
// using `precomputed` where available, then scores the pairs concurrently.
// Records come back sorted by pair id.
std::vector<ScoreRecord> run_benchmark(std::span<const PageGroundTruth> pages,
                                       const IngestResult& outputs, const BenchmarkOptions& opts,
                                       const std::map<MatchKey, MatchRecord>* precomputed = nullptr);

std::vector<MatchRecord> run_matching(std::span<const PageGroundTruth> pages,
                                      const IngestResult& outputs, const BenchmarkOptions& opts);

void write_jsonl_records(const std::filesystem::path& path, std::span<const ScoreRecord> records);
std::vector<ScoreRecord> read_jsonl_records(const std::filesystem::path& path);
void write_jsonl_matches(const std::filesystem::path& path, std::span<const MatchRecord> matches);
std::map<MatchKey, MatchRecord> read_jsonl_matches(const std::filesystem::path& path);

// ---- leaderboard -------------------------------------------------------

struct BucketStat {
  std::optional<double> mean;
  std::size_t count = 0;
};

struct LeaderboardRow {
  std::string parser_id;
  std::optional<double> overall;
  BucketStat simple;
  BucketStat moderate;
  BucketStat complex;
  // Absent when none of the parser's extractions carried tabular markup.
  std::optional<double> mean_teds;
  std::size_t n_tables = 0;
  std::size_t n_misses = 0;
};

// Plain mean of `metric` over all of a parser's tables (misses count as 0;
// records without a value, such as judge failures, are left out), rescaled
// by `scale`. Sorted by overall score, best first.
std::vector<LeaderboardRow> build_leaderboard(std::span<const ScoreRecord> records,
                                              MetricSelector metric = MetricSelector::kJudge,
                                              double scale = 1.0);

std::string leaderboard_csv(std::span<const LeaderboardRow> rows);
std::string leaderboard_markdown(std::span<const LeaderboardRow> rows);

}  // namespace tablebench

#endif  // TABLEBENCH_HARNESS_H_
