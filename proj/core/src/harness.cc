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

#include "tablebench/harness.h"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "tablebench/errors.h"
#include "tablebench/grits.h"
#include "tablebench/score_metric.h"
#include "tablebench/teds.h"

namespace tablebench {

namespace fs = std::filesystem;

const ParserOutput* IngestResult::find(const std::string& parser, const std::string& page) const {
  auto it = outputs.find({parser, page});
  return it == outputs.end() ? nullptr : &it->second;
}

namespace {

int extension_rank(const fs::path& p) {
  const std::string ext = p.extension().string();
  if (ext == ".html" || ext == ".htm") return 0;
  if (ext == ".md") return 1;
  if (ext == ".tex") return 2;
  if (ext == ".txt") return 3;
  return -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot read " + p.string());
  std::stringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failed: " + p.string());
  return buf.str();
}

}  // namespace

IngestResult ingest_outputs(const fs::path& root) {
  IngestResult result;
  std::error_code ec;
  if (!fs::exists(root, ec)) return result;
  if (!fs::is_directory(root, ec)) throw IoError("not a directory: " + root.string());

  std::vector<fs::path> parser_dirs;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory()) parser_dirs.push_back(entry.path());
  }
  std::sort(parser_dirs.begin(), parser_dirs.end());
  for (const auto& dir : parser_dirs) {
    const std::string parser = dir.filename().string();
    result.parsers.insert(parser);
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.is_regular_file() && extension_rank(entry.path()) >= 0) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end(), [](const fs::path& a, const fs::path& b) {
      if (a.stem() != b.stem()) return a.stem() < b.stem();
      return extension_rank(a) < extension_rank(b);
    });
    for (const auto& file : files) {
      const std::string page = file.stem().string();
      const auto key = std::make_pair(parser, page);
      if (result.outputs.count(key) > 0) {
        result.warnings.push_back("ignoring " + file.string() + ": page already ingested");
        continue;
      }
      const auto format = format_from_extension(file.extension().string());
      result.outputs.emplace(key, ParserOutput{slurp(file), format.value_or(Format::kPlainText), file});
    }
  }
  return result;
}

std::vector<GtTableRef> gt_tables_of(std::span<const PageGroundTruth> pages) {
  std::vector<GtTableRef> out;
  for (const auto& p : pages) {
    for (const auto& b : p.blocks) {
      if (b.kind == BlockKind::kTable) out.push_back({p.page_id, b.table_id, b.latex, b.complexity});
    }
  }
  return out;
}

namespace {

void zero_metrics(ScoreRecord& r) {
  r.teds = 0.0;
  r.grits_top = r.grits_con = r.grits_avg = 0.0;
  r.score_index = r.score_content = r.score_avg = 0.0;
}

}  // namespace

ScoreRecord score_pair(const GtTableRef& gt, const MatchRecord& match, const std::string& parser_id,
                       const BenchmarkOptions& opts) {
  ScoreRecord r;
  r.parser_id = parser_id;
  r.page_id = gt.page_id;
  r.gt_table_id = gt.table_id;
  r.complexity = gt.complexity;
  r.validation = match.validation;

  if (!match.extracted_text || match.extracted_text->empty()) {
    r.miss = true;
    zero_metrics(r);
    if (opts.judge) r.judge = 0;
    return r;
  }
  const std::string& snippet = *match.extracted_text;
  const Format format = sniff_format(snippet);
  r.extracted_format = std::string(format_name(format));

  try {
    const Grid gt_grid = parse_latex(gt.latex);
    const Grid pred = parse_auto(snippet, format);
    if (format != Format::kPlainText) r.teds = teds(gt_grid, pred).score;
    r.grits_top = grits(gt_grid, pred, GritsVariant::kTop).f_score;
    r.grits_con = grits(gt_grid, pred, GritsVariant::kCon).f_score;
    r.grits_avg = (r.grits_top + r.grits_con) / 2.0;
    const ScorePair s = score_metric(gt_grid, pred, opts.score_tolerance);
    r.score_index = s.index_accuracy;
    r.score_content = s.content_accuracy;
    r.score_avg = s.average;
  } catch (const MalformedTable&) {
    r.malformed = true;
    zero_metrics(r);
  }

  if (opts.judge) {
    if (opts.gateway == nullptr) throw std::invalid_argument("judge enabled without a gateway");
    const auto verdict = judge_pair(*opts.gateway, gt.latex, snippet);
    if (verdict) {
      r.judge = verdict->score;
      r.judge_flagged = verdict->clamped;
    } else {
      r.judge_flagged = true;
    }
  }
  return r;
}

namespace {

// Runs fn(i) for i in [0, n) on up to `workers` threads; rethrows the first
// exception after all threads have stopped.
template <typename Fn>
void parallel_for(std::size_t n, int workers, Fn fn) {
  const std::size_t threads = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), 1, std::max<std::size_t>(n, 1));
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mu;
  auto body = [&] {
    while (!failed.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  if (threads == 1) {
    body();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(body);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
}

struct PageTask {
  const PageGroundTruth* page;
  std::string parser;
};

std::vector<PageTask> page_tasks(std::span<const PageGroundTruth> pages, const IngestResult& outputs) {
  std::vector<PageTask> tasks;
  for (const auto& parser : outputs.parsers) {
    for (const auto& page : pages) {
      if (page.table_count() > 0) tasks.push_back({&page, parser});
    }
  }
  return tasks;
}

std::vector<MatchRecord> match_page(const PageTask& task, const IngestResult& outputs,
                                    const BenchmarkOptions& opts) {
  std::vector<prompts::GtTable> gts;
  for (const auto& b : task.page->blocks) {
    if (b.kind == BlockKind::kTable) gts.push_back({b.table_id, b.latex});
  }
  const ParserOutput* out = outputs.find(task.parser, task.page->page_id);
  if (out == nullptr || collapse_whitespace(out->text).empty()) {
    std::vector<MatchRecord> misses;
    for (const auto& g : gts) {
      misses.push_back(resolve_match(g.id, task.parser, task.page->page_id, std::nullopt, ""));
    }
    return misses;
  }
  if (opts.matcher == MatcherMode::kLlm) {
    if (opts.gateway == nullptr) throw std::invalid_argument("LLM matching needs a gateway");
    return match_tables(*opts.gateway, gts, out->text, task.parser, task.page->page_id);
  }
  return match_tables_offline(gts, out->text, out->format, task.parser, task.page->page_id);
}

}  // namespace

std::vector<MatchRecord> run_matching(std::span<const PageGroundTruth> pages,
                                      const IngestResult& outputs, const BenchmarkOptions& opts) {
  const auto tasks = page_tasks(pages, outputs);
  std::vector<std::vector<MatchRecord>> per_task(tasks.size());
  parallel_for(tasks.size(), opts.workers,
               [&](std::size_t i) { per_task[i] = match_page(tasks[i], outputs, opts); });
  std::vector<MatchRecord> all;
  for (auto& v : per_task) {
    for (auto& m : v) all.push_back(std::move(m));
  }
  return all;
}

std::vector<ScoreRecord> run_benchmark(std::span<const PageGroundTruth> pages,
                                       const IngestResult& outputs, const BenchmarkOptions& opts,
                                       const std::map<MatchKey, MatchRecord>* precomputed) {
  const auto tasks = page_tasks(pages, outputs);
  std::vector<std::vector<ScoreRecord>> per_task(tasks.size());
  parallel_for(tasks.size(), opts.workers, [&](std::size_t i) {
    const PageTask& task = tasks[i];
    std::vector<MatchRecord> matches;
    bool complete = precomputed != nullptr;
    if (complete) {
      for (const auto& b : task.page->blocks) {
        if (b.kind != BlockKind::kTable) continue;
        auto it = precomputed->find({task.parser, task.page->page_id, b.table_id});
        if (it == precomputed->end()) {
          complete = false;
          break;
        }
        matches.push_back(it->second);
      }
    }
    if (!complete) matches = match_page(task, outputs, opts);

    std::size_t k = 0;
    for (const auto& b : task.page->blocks) {
      if (b.kind != BlockKind::kTable) continue;
      const GtTableRef gt{task.page->page_id, b.table_id, b.latex, b.complexity};
      per_task[i].push_back(score_pair(gt, matches.at(k++), task.parser, opts));
    }
  });
  std::vector<ScoreRecord> records;
  for (auto& v : per_task) {
    for (auto& r : v) records.push_back(std::move(r));
  }
  std::sort(records.begin(), records.end(), [](const ScoreRecord& a, const ScoreRecord& b) {
    return std::tie(a.parser_id, a.page_id, a.gt_table_id) <
           std::tie(b.parser_id, b.page_id, b.gt_table_id);
  });
  return records;
}

namespace {

template <typename T, typename ToJson>
void write_jsonl(const fs::path& path, std::span<const T> items, ToJson to) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  for (const auto& item : items) out << to(item).dump() << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

template <typename Fn>
void read_jsonl(const fs::path& path, Fn fn) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (collapse_whitespace(line).empty()) continue;
    try {
      fn(nlohmann::json::parse(line));
    } catch (const std::exception& e) {
      throw IoError(path.string() + ":" + std::to_string(n) + ": " + e.what());
    }
  }
}

}  // namespace

void write_jsonl_records(const fs::path& path, std::span<const ScoreRecord> records) {
  write_jsonl(path, records, [](const ScoreRecord& r) { return to_json(r); });
}

std::vector<ScoreRecord> read_jsonl_records(const fs::path& path) {
  std::vector<ScoreRecord> out;
  read_jsonl(path, [&](const nlohmann::json& j) { out.push_back(score_record_from_json(j)); });
  return out;
}

void write_jsonl_matches(const fs::path& path, std::span<const MatchRecord> matches) {
  write_jsonl(path, matches, [](const MatchRecord& m) { return to_json(m); });
}

std::map<MatchKey, MatchRecord> read_jsonl_matches(const fs::path& path) {
  std::map<MatchKey, MatchRecord> out;
  read_jsonl(path, [&](const nlohmann::json& j) {
    MatchRecord m = match_record_from_json(j);
    MatchKey key{m.parser_id, m.page_id, m.gt_table_id};
    out.insert_or_assign(std::move(key), std::move(m));
  });
  return out;
}

// ---- leaderboard -------------------------------------------------------

std::vector<LeaderboardRow> build_leaderboard(std::span<const ScoreRecord> records,
                                              MetricSelector metric, double scale) {
  struct Acc {
    double sum = 0.0;
    std::size_t n = 0;
  };
  struct ParserAcc {
    Acc overall, simple, moderate, complex, teds;
    bool any_structured = false;
    std::size_t tables = 0, misses = 0;
  };
  std::map<std::string, ParserAcc> acc;
  for (const auto& r : records) {
    ParserAcc& a = acc[r.parser_id];
    ++a.tables;
    if (r.miss) ++a.misses;
    if (r.teds) {
      a.teds.sum += *r.teds;
      ++a.teds.n;
      if (!r.miss) a.any_structured = true;
    }
    const auto v = select_metric(r, metric);
    if (!v) continue;
    const double x = *v * scale;
    a.overall.sum += x;
    ++a.overall.n;
    Acc& bucket = r.complexity == Complexity::kSimple     ? a.simple
                  : r.complexity == Complexity::kModerate ? a.moderate
                                                          : a.complex;
    bucket.sum += x;
    ++bucket.n;
  }
  const auto mean = [](const Acc& a) -> std::optional<double> {
    if (a.n == 0) return std::nullopt;
    return a.sum / static_cast<double>(a.n);
  };
  std::vector<LeaderboardRow> rows;
  for (const auto& [parser, a] : acc) {
    LeaderboardRow row;
    row.parser_id = parser;
    row.overall = mean(a.overall);
    row.simple = {mean(a.simple), a.simple.n};
    row.moderate = {mean(a.moderate), a.moderate.n};
    row.complex = {mean(a.complex), a.complex.n};
    if (a.any_structured) row.mean_teds = mean(a.teds);
    row.n_tables = a.tables;
    row.n_misses = a.misses;
    rows.push_back(std::move(row));
  }
  std::stable_sort(rows.begin(), rows.end(), [](const LeaderboardRow& x, const LeaderboardRow& y) {
    const double a = x.overall.value_or(-1.0);
    const double b = y.overall.value_or(-1.0);
    return a > b;
  });
  return rows;
}

namespace {

std::string num(const std::optional<double>& v, int decimals) {
  if (!v) return "N/A";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, *v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string leaderboard_csv(std::span<const LeaderboardRow> rows) {
  std::string out =
      "rank,parser,overall,simple,moderate,complex,n_simple,n_moderate,n_complex,teds,n_tables,"
      "n_misses\n";
  int rank = 0;
  for (const auto& r : rows) {
    out += std::to_string(++rank) + "," + csv_field(r.parser_id) + "," + num(r.overall, 4) + "," +
           num(r.simple.mean, 4) + "," + num(r.moderate.mean, 4) + "," + num(r.complex.mean, 4) +
           "," + std::to_string(r.simple.count) + "," + std::to_string(r.moderate.count) + "," +
           std::to_string(r.complex.count) + "," + num(r.mean_teds, 4) + "," +
           std::to_string(r.n_tables) + "," + std::to_string(r.n_misses) + "\n";
  }
  return out;
}

std::string leaderboard_markdown(std::span<const LeaderboardRow> rows) {
  std::size_t ns = 0, nm = 0, nc = 0;
  for (const auto& r : rows) {
    ns = std::max(ns, r.simple.count);
    nm = std::max(nm, r.moderate.count);
    nc = std::max(nc, r.complex.count);
  }
  std::string out = "| # | Parser | Overall | Simple (" + std::to_string(ns) + ") | Moderate (" +
                    std::to_string(nm) + ") | Complex (" + std::to_string(nc) + ") | TEDS |\n";
  out += "|---:|---|---:|---:|---:|---:|---:|\n";
  int rank = 0;
  for (const auto& r : rows) {
    out += "| " + std::to_string(++rank) + " | " + r.parser_id + " | " + num(r.overall, 2) + " | " +
           num(r.simple.mean, 2) + " | " + num(r.moderate.mean, 2) + " | " + num(r.complex.mean, 2) +
           " | " + num(r.mean_teds, 2) + " |\n";
  }
  return out;
}

}  // namespace tablebench
