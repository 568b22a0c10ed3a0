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

// Command-line front end: harvest -> gen-pages -> ingest/match/score ->
// leaderboard, plus the meta-evaluation and annotation subcommands.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tablebench/annotation_service.h"
#include "tablebench/benchgen.h"
#include "tablebench/errors.h"
#include "tablebench/harness.h"
#include "tablebench/llm_gateway.h"
#include "tablebench/llm_tasks.h"
#include "tablebench/meta_eval.h"

namespace fs = std::filesystem;
using namespace tablebench;

namespace {

struct GatewayFlags {
  std::string model;
  std::string base_url = LlmEndpointConfig{}.base_url;
  std::string cache_dir = "cache";
  std::string api_key_env = LlmEndpointConfig{}.auth_env;
  int max_concurrent = 4;
  int retries = 3;
  double timeout = 120.0;

  void add(CLI::App* cmd) {
    cmd->add_option("--model", model, "Chat model identifier");
    cmd->add_option("--base-url", base_url, "Chat-completions base URL")->capture_default_str();
    cmd->add_option("--cache-dir", cache_dir, "Response cache directory")->capture_default_str();
    cmd->add_option("--api-key-env", api_key_env, "Environment variable holding the API token")
        ->capture_default_str();
    cmd->add_option("--max-concurrent", max_concurrent, "Requests in flight at once")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--retries", retries, "Retry budget per request")->capture_default_str();
    cmd->add_option("--timeout", timeout, "Request timeout in seconds")->capture_default_str();
  }

  std::unique_ptr<LlmGateway> make() const {
    if (model.empty()) throw CLI::ValidationError("--model", "a model identifier is required");
    LlmEndpointConfig cfg;
    cfg.base_url = base_url;
    cfg.model = model;
    cfg.auth_env = api_key_env;
    cfg.max_concurrent = max_concurrent;
    cfg.retry_budget = retries;
    cfg.timeout_seconds = timeout;
    cfg.cache_dir = cache_dir;
    return std::make_unique<LlmGateway>(cfg);
  }
};

nlohmann::json read_json(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw IoError("cannot read " + p.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(p.string() + ": " + e.what());
  }
}

void write_text(const fs::path& p, const std::string& text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + p.string());
  out << text;
}

std::string fmt(const std::optional<double>& v) {
  if (!v) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", *v);
  return buf;
}

bool parse_on_off(const std::string& s) {
  if (s == "on") return true;
  if (s == "off") return false;
  throw CLI::ValidationError("--judge", "expected on or off");
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 step so neighbouring page seeds are unrelated.
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

int cmd_harvest(const std::string& src, const std::string& out, const std::string& work,
                const std::string& latex, bool classify_llm, const GatewayFlags& gw) {
  const HarvestResult harvest = extract_tabulars(src);
  for (const auto& w : harvest.warnings) std::cerr << "warning: " << w << "\n";
  PdflatexRunner runner(latex);
  std::unique_ptr<LlmGateway> gateway;
  if (classify_llm) gateway = gw.make();

  nlohmann::json tables = nlohmann::json::array();
  nlohmann::json rejected = nlohmann::json::array();
  int n = 0;
  for (const auto& raw : harvest.tables) {
    const std::string id = "t" + std::to_string(n++);
    try {
      const std::string cleaned = clean_table(raw.source);
      TableAsset asset = validate_standalone(id, cleaned, runner, fs::path(work) / id);
      const ComplexityResult c = classify_complexity(gateway.get(), cleaned);
      asset.complexity = c.label;
      asset.complexity_from_llm = c.from_llm;
      asset.origin = raw.origin;
      tables.push_back(to_json(asset));
    } catch (const CleanFailure& e) {
      rejected.push_back({{"origin", raw.origin}, {"reason", e.what()}});
    } catch (const CompileError& e) {
      rejected.push_back({{"origin", raw.origin}, {"reason", e.what()}, {"log_tail", e.log_tail()}});
    }
  }
  write_text(out, nlohmann::json{{"tables", tables}, {"rejected", rejected}}.dump(2) + "\n");
  std::cerr << "harvested " << tables.size() << " tables, rejected " << rejected.size() << "\n";
  return 0;
}

int cmd_gen_pages(const std::string& assets_path, const std::string& out, int n_pages,
                  std::uint64_t seed, const std::string& config_path, const std::string& latex) {
  BenchgenConfig cfg;
  if (!config_path.empty()) cfg = benchgen_config_from_json(read_json(config_path));
  std::vector<TableAsset> pool;
  for (const auto& t : read_json(assets_path).at("tables")) pool.push_back(table_asset_from_json(t));
  PdflatexRunner runner(latex);

  std::vector<PageGroundTruth> pages;
  for (int i = 0; i < n_pages && !pool.empty(); ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "page-%04d", i + 1);
    Sampler layout_rng(mix_seed(seed, 2 * static_cast<std::uint64_t>(i)));
    const LayoutConfig layout = sample_layout(cfg, layout_rng);
    AssembleOptions opts{fs::path(out) / "work" / id, id, fs::path(out) / "pages"};
    PageGroundTruth page =
        assemble_page(pool, layout, mix_seed(seed, 2 * static_cast<std::uint64_t>(i) + 1), runner, opts, cfg);
    std::erase_if(pool, [&](const TableAsset& t) {
      return std::any_of(page.blocks.begin(), page.blocks.end(),
                         [&](const ContentBlock& b) { return b.table_id == t.id; });
    });
    std::cerr << id << ": " << page.table_count() << " tables\n";
    pages.push_back(std::move(page));
  }
  const fs::path manifest = emit_ground_truth(pages, out);
  std::cout << manifest.string() << "\n";
  return 0;
}

int cmd_ingest(const std::string& outputs, const std::string& out) {
  const IngestResult ingest = ingest_outputs(outputs);
  for (const auto& w : ingest.warnings) std::cerr << "warning: " << w << "\n";
  nlohmann::json summary = {{"parsers", ingest.parsers}, {"outputs", nlohmann::json::array()}};
  for (const auto& [key, o] : ingest.outputs) {
    summary["outputs"].push_back({{"parser", key.first},
                                  {"page", key.second},
                                  {"format", format_name(o.format)},
                                  {"path", o.path.generic_string()},
                                  {"bytes", o.text.size()}});
  }
  if (out.empty()) {
    std::cout << summary.dump(2) << "\n";
  } else {
    write_text(out, summary.dump(2) + "\n");
  }
  return 0;
}

MatcherMode parse_matcher(const std::string& s) {
  if (s == "llm") return MatcherMode::kLlm;
  if (s == "offline") return MatcherMode::kOffline;
  throw CLI::ValidationError("--matcher", "expected llm or offline");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tablebench: table extraction evaluation and benchmark harness"};
  app.require_subcommand(1);

  // harvest
  std::string src, harvest_out = "assets.json", work = "harvest-work", latex = "pdflatex";
  std::string classify = "heuristic";
  GatewayFlags harvest_gw;
  auto* harvest = app.add_subcommand("harvest", "Extract, clean and validate tabulars from .tex sources");
  harvest->add_option("--src", src, "Directory of LaTeX sources")->required();
  harvest->add_option("--out", harvest_out, "Asset pool JSON")->capture_default_str();
  harvest->add_option("--work", work, "Scratch directory for standalone compiles")->capture_default_str();
  harvest->add_option("--latex", latex, "LaTeX compiler")->capture_default_str();
  harvest->add_option("--classify", classify, "Complexity classifier: llm or heuristic")
      ->check(CLI::IsMember({"llm", "heuristic"}))
      ->capture_default_str();
  harvest_gw.add(harvest);

  // gen-pages
  std::string assets = "assets.json", pages_out = "bench", config;
  int n_pages = 100;
  std::uint64_t seed = 1;
  auto* gen = app.add_subcommand("gen-pages", "Assemble synthetic pages with exact ground truth");
  gen->add_option("--assets", assets, "Asset pool from harvest")->capture_default_str();
  gen->add_option("--out", pages_out, "Output directory")->capture_default_str();
  gen->add_option("--pages", n_pages, "Number of pages")->capture_default_str();
  gen->add_option("--seed", seed, "Random seed")->capture_default_str();
  gen->add_option("--config", config, "JSON sampling configuration");
  gen->add_option("--latex", latex, "LaTeX compiler")->capture_default_str();

  // ingest
  std::string outputs = "outputs", ingest_out;
  auto* ingest = app.add_subcommand("ingest", "Index parser outputs (outputs/<parser>/<page>.<ext>)");
  ingest->add_option("--outputs", outputs, "Parser output root")->capture_default_str();
  ingest->add_option("--out", ingest_out, "Write the index here instead of stdout");

  // match
  std::string manifest = "bench/manifest.json", matches_out = "matches.jsonl", matcher = "llm";
  int workers = 4;
  GatewayFlags match_gw;
  auto* match = app.add_subcommand("match", "Locate every ground-truth table in every parser output");
  match->add_option("--manifest", manifest, "Ground-truth manifest")->capture_default_str();
  match->add_option("--outputs", outputs, "Parser output root")->capture_default_str();
  match->add_option("--out", matches_out, "Match records JSONL")->capture_default_str();
  match->add_option("--matcher", matcher, "llm or offline")->capture_default_str();
  match->add_option("--workers", workers, "Concurrent pages")->capture_default_str();
  match_gw.add(match);

  // score
  std::string records_out = "records.jsonl", matches_in, judge = "on";
  GatewayFlags score_gw;
  int tolerance = 1;
  auto* score = app.add_subcommand("score", "Compute rule-based metrics and the LLM judge");
  score->add_option("--manifest", manifest, "Ground-truth manifest")->capture_default_str();
  score->add_option("--outputs", outputs, "Parser output root")->capture_default_str();
  score->add_option("--matches", matches_in, "Precomputed matches (from `match`)");
  score->add_option("--matcher", matcher, "Matcher for pages without precomputed matches")
      ->capture_default_str();
  score->add_option("--judge", judge, "on or off")->capture_default_str();
  score->add_option("--workers", workers, "Concurrent pages")->capture_default_str();
  score->add_option("--tolerance", tolerance, "SCORE offset tolerance")->capture_default_str();
  score->add_option("--out", records_out, "Score records JSONL")->capture_default_str();
  score_gw.add(score);

  // leaderboard
  std::string records = "records.jsonl", csv_out = "leaderboard.csv", md_out = "leaderboard.md";
  std::string metric = "judge";
  auto* board = app.add_subcommand("leaderboard", "Aggregate records into the ranked leaderboard");
  board->add_option("--records", records, "Score records JSONL")->capture_default_str();
  board->add_option("--csv", csv_out, "CSV output")->capture_default_str();
  board->add_option("--md", md_out, "Markdown output")->capture_default_str();
  board->add_option("--metric", metric, "Ranking metric")->capture_default_str();

  // correlate
  std::string ratings = "ratings.jsonl", corr_csv, corr_json;
  auto* corr = app.add_subcommand("correlate", "Correlate every metric with averaged human ratings");
  corr->add_option("--records", records, "Score records JSONL")->capture_default_str();
  corr->add_option("--ratings", ratings, "Human ratings JSONL")->capture_default_str();
  corr->add_option("--csv", corr_csv, "CSV output");
  corr->add_option("--json", corr_json, "JSON output");

  // agreement
  std::string agree_json;
  auto* agree = app.add_subcommand("agreement", "Inter-annotator agreement statistics");
  agree->add_option("--ratings", ratings, "Human ratings JSONL")->capture_default_str();
  agree->add_option("--json", agree_json, "JSON output");

  // build-pairs
  std::string pairs = "pairs.json";
  std::size_t n_pairs = 518;
  bool with_hints = false;
  GatewayFlags pairs_gw;
  auto* build = app.add_subcommand("build-pairs", "Sample ground-truth/extraction pairs for annotation");
  build->add_option("--manifest", manifest, "Ground-truth manifest")->capture_default_str();
  build->add_option("--matches", matches_in, "Match records JSONL")->required();
  build->add_option("--n", n_pairs, "Number of pairs")->capture_default_str();
  build->add_option("--seed", seed, "Sampling seed")->capture_default_str();
  build->add_option("--out", pairs, "Pair store JSON")->capture_default_str();
  build->add_flag("--hints", with_hints, "Generate discrepancy hints with the model");
  build->add_option("--workers", workers, "Concurrent hint requests")->capture_default_str();
  pairs_gw.add(build);

  // serve-annotate
  std::string bind = "127.0.0.1:8080", static_dir;
  auto* serve = app.add_subcommand("serve-annotate", "Serve the annotation backend");
  serve->add_option("--bind", bind, "host:port")->capture_default_str();
  serve->add_option("--pairs", pairs, "Pair store JSON")->capture_default_str();
  serve->add_option("--ratings", ratings, "Ratings JSONL sink")->capture_default_str();
  serve->add_option("--static", static_dir, "Directory with the built rating UI");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*harvest) {
      return cmd_harvest(src, harvest_out, work, latex, classify == "llm", harvest_gw);
    }
    if (*gen) return cmd_gen_pages(assets, pages_out, n_pages, seed, config, latex);
    if (*ingest) return cmd_ingest(outputs, ingest_out);
    if (*match) {
      BenchmarkOptions opts;
      opts.matcher = parse_matcher(matcher);
      opts.workers = workers;
      std::unique_ptr<LlmGateway> gateway;
      if (opts.matcher == MatcherMode::kLlm) {
        gateway = match_gw.make();
        opts.gateway = gateway.get();
      }
      const auto pages = load_ground_truth(manifest);
      const IngestResult in = ingest_outputs(outputs);
      const auto matches = run_matching(pages, in, opts);
      write_jsonl_matches(matches_out, matches);
      std::cerr << "wrote " << matches.size() << " match records\n";
      return 0;
    }
    if (*score) {
      BenchmarkOptions opts;
      opts.matcher = parse_matcher(matcher);
      opts.judge = parse_on_off(judge);
      opts.workers = workers;
      opts.score_tolerance = tolerance;
      std::unique_ptr<LlmGateway> gateway;
      if (opts.judge || opts.matcher == MatcherMode::kLlm) {
        gateway = score_gw.make();
        opts.gateway = gateway.get();
      }
      const auto pages = load_ground_truth(manifest);
      const IngestResult in = ingest_outputs(outputs);
      std::optional<std::map<MatchKey, MatchRecord>> pre;
      if (!matches_in.empty()) pre = read_jsonl_matches(matches_in);
      const auto recs = run_benchmark(pages, in, opts, pre ? &*pre : nullptr);
      write_jsonl_records(records_out, recs);
      std::cerr << "wrote " << recs.size() << " score records";
      if (gateway) {
        std::cerr << " (" << gateway->http_requests() << " HTTP requests, " << gateway->cache_hits()
                  << " cache hits)";
      }
      std::cerr << "\n";
      return 0;
    }
    if (*board) {
      const auto sel = metric_from_name(metric);
      if (!sel) throw CLI::ValidationError("--metric", "unknown metric " + metric);
      const auto recs = read_jsonl_records(records);
      const auto rows = build_leaderboard(recs, *sel, 1.0);
      write_text(csv_out, leaderboard_csv(rows));
      const std::string md = leaderboard_markdown(rows);
      write_text(md_out, md);
      std::cout << md;
      return 0;
    }
    if (*corr) {
      const auto recs = read_jsonl_records(records);
      const RatingSet rs = load_ratings_jsonl(ratings);
      static constexpr MetricSelector kAll[] = {
          MetricSelector::kTeds,       MetricSelector::kGritsTop,     MetricSelector::kGritsCon,
          MetricSelector::kGritsAvg,   MetricSelector::kScoreIndex,   MetricSelector::kScoreContent,
          MetricSelector::kScoreAvg,   MetricSelector::kJudge};
      std::string csv = "metric,pearson,spearman,kendall,n\n";
      nlohmann::json js = nlohmann::json::array();
      std::cout << "| Metric | Pearson r | Spearman rho | Kendall tau | n |\n|---|---:|---:|---:|---:|\n";
      for (const auto m : kAll) {
        CorrelationReport rep;
        try {
          rep = metric_vs_human(recs, rs, m, default_scale(m));
        } catch (const DegenerateInput& e) {
          std::cerr << metric_name(m) << ": " << e.what() << "\n";
          continue;
        }
        const std::string name(metric_name(m));
        csv += name + "," + fmt(rep.pearson) + "," + fmt(rep.spearman) + "," + fmt(rep.kendall) + "," +
               std::to_string(rep.n) + "\n";
        js.push_back({{"metric", name},
                      {"pearson", rep.pearson ? nlohmann::json(*rep.pearson) : nlohmann::json()},
                      {"spearman", rep.spearman ? nlohmann::json(*rep.spearman) : nlohmann::json()},
                      {"kendall", rep.kendall ? nlohmann::json(*rep.kendall) : nlohmann::json()},
                      {"n", rep.n}});
        std::cout << "| " << name << " | " << fmt(rep.pearson) << " | " << fmt(rep.spearman) << " | "
                  << fmt(rep.kendall) << " | " << rep.n << " |\n";
      }
      if (!corr_csv.empty()) write_text(corr_csv, csv);
      if (!corr_json.empty()) write_text(corr_json, js.dump(2) + "\n");
      return 0;
    }
    if (*agree) {
      const AgreementReport rep = agreement(load_ratings_jsonl(ratings));
      const nlohmann::json js = {
          {"krippendorff_alpha_interval", rep.alpha},
          {"mean_pairwise_pearson",
           rep.mean_pairwise_pearson ? nlohmann::json(*rep.mean_pairwise_pearson) : nlohmann::json()},
          {"mean_abs_difference", rep.mean_abs_difference},
          {"leave_one_out_pearson",
           rep.leave_one_out_pearson ? nlohmann::json(*rep.leave_one_out_pearson) : nlohmann::json()},
          {"n_pairs", rep.n_pairs},
          {"n_annotators", rep.n_annotators}};
      std::cout << js.dump(2) << "\n";
      if (!agree_json.empty()) write_text(agree_json, js.dump(2) + "\n");
      return 0;
    }
    if (*build) {
      const auto pages = load_ground_truth(manifest);
      auto sampled = sample_annotation_pairs(pages, read_jsonl_matches(matches_in), n_pairs, seed);
      if (with_hints) {
        auto gateway = pairs_gw.make();
        attach_hints(sampled, *gateway, workers);
      }
      save_pairs(pairs, sampled);
      std::cerr << "wrote " << sampled.size() << " pairs to " << pairs << "\n";
      return 0;
    }
    if (*serve) {
      const auto colon = bind.rfind(':');
      if (colon == std::string::npos) throw CLI::ValidationError("--bind", "expected host:port");
      const std::string host = bind.substr(0, colon);
      const int port = std::stoi(bind.substr(colon + 1));
      AnnotationService service(load_pairs(pairs), ratings);
      if (!static_dir.empty()) service.set_static_dir(static_dir);
      std::cerr << "serving annotation API on " << host << ":" << port << "\n";
      service.listen(host, port);
      return 0;
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
