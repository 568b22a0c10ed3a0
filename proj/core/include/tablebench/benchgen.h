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

#ifndef TABLEBENCH_BENCHGEN_H_
#define TABLEBENCH_BENCHGEN_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "tablebench/score_record.h"

namespace tablebench {

class LlmGateway;

struct LayoutConfig {
  std::string document_class = "article";
  std::string font_family = "lmodern";
  double margin_pt = 72.0;
  double font_size_pt = 10.0;
  double line_spacing = 1.0;
  bool two_column = false;

  friend bool operator==(const LayoutConfig&, const LayoutConfig&) = default;
};

nlohmann::json to_json(const LayoutConfig& l);
LayoutConfig layout_from_json(const nlohmann::json& j);

struct TableAsset {
  std::string id;
  std::string latex;  // cleaned
  double width_pt = 0.0;
  double height_pt = 0.0;
  Complexity complexity = Complexity::kSimple;
  bool complexity_from_llm = false;
  std::string origin;  // "<file>#<index>"

  friend bool operator==(const TableAsset&, const TableAsset&) = default;
};

nlohmann::json to_json(const TableAsset& a);
TableAsset table_asset_from_json(const nlohmann::json& j);

enum class BlockKind { kFiller, kTable };

struct ContentBlock {
  BlockKind kind = BlockKind::kFiller;
  std::string text;      // filler paragraph(s)
  std::string table_id;  // table blocks
  std::string latex;     // table blocks: the asset's cleaned source, verbatim in the page
  Complexity complexity = Complexity::kSimple;
  bool scaled = false;   // wrapped to the column width

  friend bool operator==(const ContentBlock&, const ContentBlock&) = default;
};

struct PageGroundTruth {
  std::string page_id;
  LayoutConfig layout;
  // Reading order; for two-column pages this is column-major.
  std::vector<ContentBlock> blocks;
  std::filesystem::path tex_path;
  std::filesystem::path pdf_path;

  std::size_t table_count() const;

  friend bool operator==(const PageGroundTruth&, const PageGroundTruth&) = default;
};

nlohmann::json to_json(const PageGroundTruth& p);
PageGroundTruth page_from_json(const nlohmann::json& j);

// ---- harvesting --------------------------------------------------------

struct RawTabular {
  std::string origin;
  std::string source;
};

struct HarvestResult {
  std::vector<RawTabular> tables;
  std::vector<std::string> warnings;  // unreadable files, skipped
};

// Top-level tabular / tabular* environments of every *.tex file below
// source_dir, visited in sorted path order.
HarvestResult extract_tabulars(const std::filesystem::path& source_dir);

// Drops comments, labels and citations; references become placeholder
// numbers. Throws CleanFailure when the result is not brace balanced.
std::string clean_table(std::string_view raw);

// ---- compilation -------------------------------------------------------

struct CompileResult {
  bool ok = false;
  std::string log;
  int pages = 0;
  std::filesystem::path pdf_path;
};

class LatexRunner {
 public:
  virtual ~LatexRunner() = default;
  // Compiles `source` as <workdir>/<jobname>.tex.
  virtual CompileResult compile(const std::string& source, const std::filesystem::path& workdir,
                                const std::string& jobname) = 0;
};

// Runs pdflatex from PATH (or `executable`). Throws ToolMissing at
// construction when it cannot be found.
class PdflatexRunner : public LatexRunner {
 public:
  explicit PdflatexRunner(std::string executable = "pdflatex");
  CompileResult compile(const std::string& source, const std::filesystem::path& workdir,
                        const std::string& jobname) override;

 private:
  std::filesystem::path executable_;
};

std::optional<std::filesystem::path> find_executable(std::string_view name);

// Packages every generated document loads.
std::string_view latex_preamble_packages();

// Compiles the table in a minimal document and measures its box. Throws
// CompileError (with the log tail) when it does not compile cleanly.
TableAsset validate_standalone(const std::string& id, const std::string& table_latex,
                               LatexRunner& runner, const std::filesystem::path& workdir);

// Log lines that disqualify a document.
bool log_has_warnings(std::string_view log);
std::string log_tail(std::string_view log, std::size_t lines = 20);

// ---- page assembly -----------------------------------------------------

template <typename T>
struct Range {
  T lo{};
  T hi{};
};

struct BenchgenConfig {
  std::vector<std::string> document_classes = {"article", "scrartcl"};
  std::vector<std::string> font_families = {"lmodern", "times", "palatino", "helvet"};
  Range<double> font_size_pt = {9.0, 12.0};
  Range<double> margin_cm = {1.5, 3.0};
  Range<double> line_spacing = {1.0, 1.3};
  double two_column_probability = 0.3;
  // Chance that the next candidate block is a table rather than filler.
  double table_probability = 0.6;
  // Tables up to this multiple of the column width are scaled down to fit.
  double oversize_factor = 1.4;
  int max_tables_per_page = 8;
  // Assembly stops after this many rejected blocks in a row.
  int max_consecutive_rejections = 6;
  Range<int> filler_paragraphs = {1, 2};
};

// Missing keys keep their defaults; unknown keys throw std::invalid_argument.
BenchgenConfig benchgen_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const BenchgenConfig& c);

// Bounded sampling on top of mt19937_64 so output bytes do not depend on the
// standard library's distribution implementations.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : engine_(seed) {}
  double uniform();  // [0, 1)
  double uniform(double lo, double hi);
  // Inclusive.
  int uniform_int(int lo, int hi);
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

LayoutConfig sample_layout(const BenchgenConfig& cfg, Sampler& rng);

// The document for a page with the given blocks. Tables are emitted verbatim
// as centered, non-floating blocks.
std::string render_page_tex(const LayoutConfig& layout, std::span<const ContentBlock> blocks);

struct AssembleOptions {
  std::filesystem::path workdir;  // private scratch directory for this page
  std::string page_id;
  // Where <page_id>.tex and .pdf end up; defaults to workdir.
  std::filesystem::path output_dir;
};

// Iteratively appends sampled filler and tables from `pool`, recompiling
// after every addition and discarding blocks that overflow the page or cause
// warnings. Table ids used on the page are never repeated on it.
PageGroundTruth assemble_page(std::span<const TableAsset> pool, const LayoutConfig& layout,
                              std::uint64_t rng_seed, LatexRunner& runner,
                              const AssembleOptions& opts, const BenchgenConfig& cfg = {});

// Writes <out_dir>/pages/<id>.json and <out_dir>/manifest.json.
std::filesystem::path emit_ground_truth(std::span<const PageGroundTruth> pages,
                                        const std::filesystem::path& out_dir);
std::vector<PageGroundTruth> load_ground_truth(const std::filesystem::path& manifest);

std::span<const std::string_view> filler_corpus();

}  // namespace tablebench

#endif  // TABLEBENCH_BENCHGEN_H_
