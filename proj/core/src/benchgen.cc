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

#include "tablebench/benchgen.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include "tablebench/errors.h"
#include "tablebench/latex_source.h"

namespace tablebench {

namespace fs = std::filesystem;

// ---- serialization -----------------------------------------------------

nlohmann::json to_json(const LayoutConfig& l) {
  return {{"document_class", l.document_class}, {"font_family", l.font_family},
          {"margin_pt", l.margin_pt},           {"font_size_pt", l.font_size_pt},
          {"line_spacing", l.line_spacing},     {"columns", l.two_column ? 2 : 1}};
}

LayoutConfig layout_from_json(const nlohmann::json& j) {
  LayoutConfig l;
  l.document_class = j.at("document_class").get<std::string>();
  l.font_family = j.at("font_family").get<std::string>();
  l.margin_pt = j.at("margin_pt").get<double>();
  l.font_size_pt = j.at("font_size_pt").get<double>();
  l.line_spacing = j.at("line_spacing").get<double>();
  const int columns = j.at("columns").get<int>();
  if (columns != 1 && columns != 2) throw std::invalid_argument("columns must be 1 or 2");
  l.two_column = columns == 2;
  return l;
}

nlohmann::json to_json(const TableAsset& a) {
  return {{"id", a.id},
          {"latex", a.latex},
          {"width_pt", a.width_pt},
          {"height_pt", a.height_pt},
          {"complexity", complexity_name(a.complexity)},
          {"complexity_source", a.complexity_from_llm ? "llm" : "heuristic"},
          {"origin", a.origin}};
}

namespace {

Complexity complexity_or_throw(const nlohmann::json& j) {
  const auto c = complexity_from_name(j.get<std::string>());
  if (!c) throw std::invalid_argument("unknown complexity label " + j.dump());
  return *c;
}

}  // namespace

TableAsset table_asset_from_json(const nlohmann::json& j) {
  TableAsset a;
  a.id = j.at("id").get<std::string>();
  a.latex = j.at("latex").get<std::string>();
  a.width_pt = j.at("width_pt").get<double>();
  a.height_pt = j.at("height_pt").get<double>();
  a.complexity = complexity_or_throw(j.at("complexity"));
  a.complexity_from_llm = j.value("complexity_source", "heuristic") == "llm";
  a.origin = j.value("origin", "");
  return a;
}

std::size_t PageGroundTruth::table_count() const {
  return static_cast<std::size_t>(std::count_if(
      blocks.begin(), blocks.end(), [](const ContentBlock& b) { return b.kind == BlockKind::kTable; }));
}

nlohmann::json to_json(const PageGroundTruth& p) {
  nlohmann::json blocks = nlohmann::json::array();
  for (const auto& b : p.blocks) {
    if (b.kind == BlockKind::kFiller) {
      blocks.push_back({{"kind", "filler"}, {"text", b.text}});
    } else {
      blocks.push_back({{"kind", "table"},
                        {"table_id", b.table_id},
                        {"latex", b.latex},
                        {"complexity", complexity_name(b.complexity)},
                        {"scaled", b.scaled}});
    }
  }
  return {{"page_id", p.page_id},
          {"layout", to_json(p.layout)},
          {"blocks", std::move(blocks)},
          {"tex_path", p.tex_path.generic_string()},
          {"pdf_path", p.pdf_path.generic_string()}};
}

PageGroundTruth page_from_json(const nlohmann::json& j) {
  PageGroundTruth p;
  p.page_id = j.at("page_id").get<std::string>();
  p.layout = layout_from_json(j.at("layout"));
  for (const auto& b : j.at("blocks")) {
    ContentBlock block;
    const std::string kind = b.at("kind").get<std::string>();
    if (kind == "filler") {
      block.kind = BlockKind::kFiller;
      block.text = b.at("text").get<std::string>();
    } else if (kind == "table") {
      block.kind = BlockKind::kTable;
      block.table_id = b.at("table_id").get<std::string>();
      block.latex = b.at("latex").get<std::string>();
      block.complexity = complexity_or_throw(b.at("complexity"));
      block.scaled = b.value("scaled", false);
    } else {
      throw std::invalid_argument("unknown block kind " + kind);
    }
    p.blocks.push_back(std::move(block));
  }
  p.tex_path = j.value("tex_path", "");
  p.pdf_path = j.value("pdf_path", "");
  return p;
}

// ---- harvesting --------------------------------------------------------

HarvestResult extract_tabulars(const fs::path& source_dir) {
  HarvestResult result;
  std::error_code ec;
  if (!fs::is_directory(source_dir, ec)) {
    throw IoError("not a directory: " + source_dir.string());
  }
  std::vector<fs::path> files;
  for (fs::recursive_directory_iterator it(source_dir, ec), end; !ec && it != end; it.increment(ec)) {
    if (it->is_regular_file(ec) && it->path().extension() == ".tex") files.push_back(it->path());
  }
  if (ec) result.warnings.push_back("directory walk stopped early: " + ec.message());
  std::sort(files.begin(), files.end());

  static const std::vector<std::string> kEnvs = {"tabular", "tabular*"};
  for (const auto& file : files) {
    std::ifstream in(file, std::ios::binary);
    std::stringstream buf;
    if (!in || !(buf << in.rdbuf())) {
      result.warnings.push_back("unreadable, skipped: " + file.string());
      continue;
    }
    const std::string text = latex::strip_comments(buf.str());
    const std::string rel = fs::relative(file, source_dir, ec).generic_string();
    int index = 0;
    for (const auto& env : latex::find_top_level_envs(text, kEnvs)) {
      result.tables.push_back({rel + "#" + std::to_string(index++),
                               text.substr(env.begin, env.end - env.begin)});
    }
  }
  return result;
}

namespace {

bool is_cite(const std::string& name) {
  return name.find("cite") != std::string::npos || name == "citeauthor";
}

bool is_ref(const std::string& name) {
  static const std::set<std::string> kRefs = {"ref", "autoref", "cref", "Cref", "pageref",
                                              "vref", "nameref", "Autoref"};
  return kRefs.count(name) > 0;
}

std::string required_group(std::string_view s, std::size_t& pos, const std::string& cmd) {
  auto g = latex::read_group(s, pos);
  if (!g) throw CleanFailure("\\" + cmd + " without a braced argument");
  return *g;
}

}  // namespace

std::string clean_table(std::string_view raw) {
  const std::string s = latex::strip_comments(raw);
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] != '\\') {
      out.push_back(s[i++]);
      continue;
    }
    std::size_t j = i + 1;
    while (j < s.size() && std::isalpha(static_cast<unsigned char>(s[j]))) ++j;
    if (j == i + 1) {  // control symbol such as \\ or \%
      out.append(s, i, std::min<std::size_t>(2, s.size() - i));
      i += 2;
      continue;
    }
    const std::string name = s.substr(i + 1, j - i - 1);
    std::size_t pos = j;
    if (name == "label") {
      required_group(s, pos, name);
      i = pos;
    } else if (is_cite(name)) {
      if (pos < s.size() && s[pos] == '*') ++pos;
      for (int k = 0; k < 2 && latex::read_optional(s, pos); ++k) {
      }
      required_group(s, pos, name);
      while (!out.empty() && (out.back() == ' ' || out.back() == '~' || out.back() == '\t')) {
        out.pop_back();
      }
      i = pos;
    } else if (is_ref(name)) {
      if (pos < s.size() && s[pos] == '*') ++pos;
      required_group(s, pos, name);
      out += "1";
      i = pos;
    } else if (name == "eqref") {
      required_group(s, pos, name);
      out += "(1)";
      i = pos;
    } else {
      out.append(s, i, j - i);
      i = j;
    }
  }
  if (!latex::braces_balanced(out)) throw CleanFailure("cleaning left unbalanced braces");
  const auto first = out.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = out.find_last_not_of(" \t\r\n");
  return out.substr(first, last - first + 1);
}

// ---- compilation -------------------------------------------------------

std::optional<fs::path> find_executable(std::string_view name) {
  std::error_code ec;
  if (name.find('/') != std::string_view::npos) {
    fs::path p(name);
    if (fs::is_regular_file(p, ec)) return p;
    return std::nullopt;
  }
  const char* path = std::getenv("PATH");
  if (path == nullptr) return std::nullopt;
  std::string_view rest(path);
  while (!rest.empty()) {
    const auto colon = rest.find(':');
    const std::string_view dir = rest.substr(0, colon);
    if (!dir.empty()) {
      fs::path candidate = fs::path(dir) / name;
      if (fs::is_regular_file(candidate, ec)) return candidate;
    }
    if (colon == std::string_view::npos) break;
    rest.remove_prefix(colon + 1);
  }
  return std::nullopt;
}

namespace {

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out.push_back(c);
    }
  }
  return out + "'";
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& p, std::string_view data) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + p.string());
  out << data;
  if (!out) throw IoError("write failed: " + p.string());
}

}  // namespace

PdflatexRunner::PdflatexRunner(std::string executable) {
  auto found = find_executable(executable);
  if (!found) throw ToolMissing("LaTeX compiler not found: " + executable);
  executable_ = *found;
}

CompileResult PdflatexRunner::compile(const std::string& source, const fs::path& workdir,
                                      const std::string& jobname) {
  fs::create_directories(workdir);
  write_file(workdir / (jobname + ".tex"), source);
  std::string cmd = "cd " + shell_quote(workdir.string()) + " && ";
  if (find_executable("timeout")) cmd += "timeout 120 ";
  cmd += shell_quote(executable_.string()) +
         " -interaction=nonstopmode -halt-on-error -no-shell-escape -jobname=" +
         shell_quote(jobname) + " " + shell_quote(jobname + ".tex") + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());

  CompileResult res;
  res.log = read_file(workdir / (jobname + ".log"));
  res.pdf_path = workdir / (jobname + ".pdf");
  static const std::regex kPages(R"(Output written on[\s\S]*?\((\d+) pages?)");
  std::smatch m;
  if (std::regex_search(res.log, m, kPages)) res.pages = std::stoi(m.str(1));
  std::error_code ec;
  res.ok = rc == 0 && res.pages > 0 && fs::exists(res.pdf_path, ec);
  return res;
}

std::string_view latex_preamble_packages() {
  return "\\usepackage[T1]{fontenc}\n"
         "\\usepackage[utf8]{inputenc}\n"
         "\\usepackage{amsmath,amssymb}\n"
         "\\usepackage{array,booktabs,multirow}\n"
         "\\usepackage{graphicx}\n"
         "\\usepackage{adjustbox}\n"
         "\\usepackage[table]{xcolor}\n";
}

bool log_has_warnings(std::string_view log) {
  static constexpr std::string_view kMarkers[] = {
      "Overfull \\hbox", "Overfull \\vbox", "LaTeX Warning:", "Undefined control sequence",
      "Missing character"};
  return std::any_of(std::begin(kMarkers), std::end(kMarkers),
                     [&](std::string_view m) { return log.find(m) != std::string_view::npos; });
}

std::string log_tail(std::string_view log, std::size_t lines) {
  std::size_t pos = log.size();
  for (std::size_t n = 0; n <= lines && pos > 0; ++n) {
    const auto nl = log.rfind('\n', pos - 1);
    if (nl == std::string_view::npos) {
      pos = 0;
      break;
    }
    pos = nl;
  }
  return std::string(log.substr(pos == 0 ? 0 : pos + 1));
}

namespace {

std::optional<double> typeout_pt(std::string_view log, const std::string& tag, int field = 1) {
  const std::regex re(tag + R"(:(-?[0-9.]+)pt(?::(-?[0-9.]+)pt)?(?::(-?[0-9.]+)pt)?)");
  std::cmatch m;
  if (!std::regex_search(log.data(), log.data() + log.size(), m, re) || !m[field].matched) {
    return std::nullopt;
  }
  return std::stod(m.str(field));
}

}  // namespace

TableAsset validate_standalone(const std::string& id, const std::string& table_latex,
                               LatexRunner& runner, const fs::path& workdir) {
  std::string doc = "\\documentclass{article}\n";
  doc += latex_preamble_packages();
  doc += "\\usepackage{lmodern}\n\\pagestyle{empty}\n\\newsavebox{\\tbbox}\n\\begin{document}\n";
  doc += "\\sbox{\\tbbox}{" + table_latex + "}\n";
  doc += "\\typeout{TBDIM:\\the\\wd\\tbbox:\\the\\ht\\tbbox:\\the\\dp\\tbbox}\n";
  doc += "\\noindent\\usebox{\\tbbox}\n\\end{document}\n";

  const CompileResult res = runner.compile(doc, workdir, "table");
  if (!res.ok) throw CompileError("table " + id + " does not compile", log_tail(res.log));
  const auto wd = typeout_pt(res.log, "TBDIM", 1);
  const auto ht = typeout_pt(res.log, "TBDIM", 2);
  const auto dp = typeout_pt(res.log, "TBDIM", 3);
  if (!wd || !ht || !dp) throw CompileError("no measurement for table " + id, log_tail(res.log));
  TableAsset asset;
  asset.id = id;
  asset.latex = table_latex;
  asset.width_pt = *wd;
  asset.height_pt = *ht + *dp;
  if (!(asset.width_pt > 0.0) || !(asset.height_pt > 0.0)) {
    throw CompileError("table " + id + " has an empty box", log_tail(res.log));
  }
  return asset;
}

// ---- configuration -----------------------------------------------------

namespace {

template <typename T>
Range<T> range_from_json(const nlohmann::json& j, const char* key) {
  if (!j.is_array() || j.size() != 2) {
    throw std::invalid_argument(std::string(key) + " must be a [lo, hi] pair");
  }
  Range<T> r{j[0].get<T>(), j[1].get<T>()};
  if (r.hi < r.lo) throw std::invalid_argument(std::string(key) + ": hi < lo");
  return r;
}

}  // namespace

BenchgenConfig benchgen_config_from_json(const nlohmann::json& j) {
  BenchgenConfig c;
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "document_classes") {
      c.document_classes = value.get<std::vector<std::string>>();
    } else if (key == "font_families") {
      c.font_families = value.get<std::vector<std::string>>();
    } else if (key == "font_size_pt") {
      c.font_size_pt = range_from_json<double>(value, "font_size_pt");
    } else if (key == "margin_cm") {
      c.margin_cm = range_from_json<double>(value, "margin_cm");
    } else if (key == "line_spacing") {
      c.line_spacing = range_from_json<double>(value, "line_spacing");
    } else if (key == "two_column_probability") {
      c.two_column_probability = value.get<double>();
    } else if (key == "table_probability") {
      c.table_probability = value.get<double>();
    } else if (key == "oversize_factor") {
      c.oversize_factor = value.get<double>();
    } else if (key == "max_tables_per_page") {
      c.max_tables_per_page = value.get<int>();
    } else if (key == "max_consecutive_rejections") {
      c.max_consecutive_rejections = value.get<int>();
    } else if (key == "filler_paragraphs") {
      c.filler_paragraphs = range_from_json<int>(value, "filler_paragraphs");
    } else {
      throw std::invalid_argument("unknown config key: " + key);
    }
  }
  if (c.document_classes.empty() || c.font_families.empty()) {
    throw std::invalid_argument("document_classes and font_families must be non-empty");
  }
  if (c.oversize_factor < 1.0) throw std::invalid_argument("oversize_factor must be >= 1");
  if (c.filler_paragraphs.lo < 1) throw std::invalid_argument("filler_paragraphs must be >= 1");
  return c;
}

nlohmann::json to_json(const BenchgenConfig& c) {
  return {{"document_classes", c.document_classes},
          {"font_families", c.font_families},
          {"font_size_pt", {c.font_size_pt.lo, c.font_size_pt.hi}},
          {"margin_cm", {c.margin_cm.lo, c.margin_cm.hi}},
          {"line_spacing", {c.line_spacing.lo, c.line_spacing.hi}},
          {"two_column_probability", c.two_column_probability},
          {"table_probability", c.table_probability},
          {"oversize_factor", c.oversize_factor},
          {"max_tables_per_page", c.max_tables_per_page},
          {"max_consecutive_rejections", c.max_consecutive_rejections},
          {"filler_paragraphs", {c.filler_paragraphs.lo, c.filler_paragraphs.hi}}};
}

// ---- sampling ----------------------------------------------------------

double Sampler::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Sampler::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

int Sampler::uniform_int(int lo, int hi) {
  if (hi <= lo) return lo;
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return lo + static_cast<int>(x % span);
}

namespace {

constexpr double kPtPerCm = 72.27 / 2.54;

// Rounds to one decimal so the layout, the JSON and the tex agree exactly.
double round1(double x) { return std::round(x * 10.0) / 10.0; }
double round2(double x) { return std::round(x * 100.0) / 100.0; }

std::string fmt_num(double x, int decimals) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
  return buf;
}

}  // namespace

LayoutConfig sample_layout(const BenchgenConfig& cfg, Sampler& rng) {
  LayoutConfig l;
  l.document_class =
      cfg.document_classes[rng.uniform_int(0, static_cast<int>(cfg.document_classes.size()) - 1)];
  l.font_family =
      cfg.font_families[rng.uniform_int(0, static_cast<int>(cfg.font_families.size()) - 1)];
  l.margin_pt = round1(rng.uniform(cfg.margin_cm.lo, cfg.margin_cm.hi) * kPtPerCm);
  l.font_size_pt = round1(rng.uniform(cfg.font_size_pt.lo, cfg.font_size_pt.hi));
  l.line_spacing = round2(rng.uniform(cfg.line_spacing.lo, cfg.line_spacing.hi));
  l.two_column = rng.bernoulli(cfg.two_column_probability);
  return l;
}

// ---- page rendering ----------------------------------------------------

namespace {

std::string font_packages(const std::string& family) {
  if (family == "lmodern") return "\\usepackage{lmodern}\n";
  if (family == "times") return "\\usepackage{mathptmx}\n";
  if (family == "palatino") return "\\usepackage{mathpazo}\n";
  if (family == "helvet") {
    return "\\usepackage{lmodern}\n\\usepackage[scaled]{helvet}\n"
           "\\renewcommand{\\familydefault}{\\sfdefault}\n";
  }
  return "\\usepackage{" + family + "}\n";
}

std::string table_block_tex(const ContentBlock& b) {
  if (b.scaled) {
    return "\\begin{center}\n\\adjustbox{max width=\\columnwidth}{" + b.latex + "}\n\\end{center}\n";
  }
  return "\\begin{center}\n" + b.latex + "\n\\end{center}\n";
}

}  // namespace

std::string render_page_tex(const LayoutConfig& layout, std::span<const ContentBlock> blocks) {
  const std::string size = fmt_num(layout.font_size_pt, 1);
  const std::string skip = fmt_num(round1(layout.font_size_pt * 1.2), 1);
  std::string tex = "\\documentclass[" + std::string(layout.two_column ? "twocolumn" : "onecolumn") +
                    "]{" + layout.document_class + "}\n";
  tex += "\\usepackage[margin=" + fmt_num(layout.margin_pt, 1) + "pt]{geometry}\n";
  tex += latex_preamble_packages();
  tex += font_packages(layout.font_family);
  tex += "\\linespread{" + fmt_num(layout.line_spacing, 2) + "}\n";
  tex += "\\pagestyle{empty}\n\\setlength{\\parindent}{0pt}\n\\setlength{\\parskip}{0.5\\baselineskip}\n";
  tex += "\\begin{document}\n";
  tex += "\\fontsize{" + size + "}{" + skip + "}\\selectfont\n\n";
  for (const auto& b : blocks) {
    tex += b.kind == BlockKind::kTable ? table_block_tex(b) : b.text + "\n";
    tex += "\n";
  }
  tex += "\\par\n";
  tex += "\\typeout{TBCOL:\\the\\columnwidth}\n";
  tex += "\\typeout{TBTEXT:\\the\\textheight}\n";
  tex += "\\makeatletter\n";
  tex += "\\typeout{TBREMAIN:\\the\\dimexpr\\pagegoal-\\pagetotal\\relax}\n";
  tex += "\\typeout{TBCOLUMN:\\if@firstcolumn 1\\else 2\\fi}\n";
  tex += "\\makeatother\n";
  tex += "\\end{document}\n";
  return tex;
}

// ---- page assembly -----------------------------------------------------

namespace {

struct PageState {
  double column_width = 0.0;
  double text_height = 0.0;
  double remaining = 0.0;
  bool first_column = true;
};

PageState read_state(const std::string& log) {
  PageState st;
  st.column_width = typeout_pt(log, "TBCOL").value_or(0.0);
  st.text_height = typeout_pt(log, "TBTEXT").value_or(0.0);
  st.remaining = typeout_pt(log, "TBREMAIN").value_or(st.text_height);
  // An empty page reports \maxdimen as its goal.
  st.remaining = std::min(st.remaining, st.text_height);
  st.first_column = log.find("TBCOLUMN:2") == std::string::npos;
  return st;
}

bool accepted(const CompileResult& res) {
  return res.ok && res.pages == 1 && !log_has_warnings(res.log);
}

std::string filler_text(Sampler& rng, const BenchgenConfig& cfg) {
  const auto corpus = filler_corpus();
  const int n = rng.uniform_int(cfg.filler_paragraphs.lo, cfg.filler_paragraphs.hi);
  std::string text;
  for (int i = 0; i < n; ++i) {
    if (i > 0) text += "\n\n";
    text += corpus[rng.uniform_int(0, static_cast<int>(corpus.size()) - 1)];
  }
  return text;
}

}  // namespace

PageGroundTruth assemble_page(std::span<const TableAsset> pool, const LayoutConfig& layout,
                              std::uint64_t rng_seed, LatexRunner& runner,
                              const AssembleOptions& opts, const BenchgenConfig& cfg) {
  if (pool.empty()) throw std::invalid_argument("empty table pool");
  Sampler rng(rng_seed);
  const std::string job = "page";

  std::vector<ContentBlock> blocks;
  CompileResult last = runner.compile(render_page_tex(layout, blocks), opts.workdir, job);
  if (!accepted(last)) throw CompileError("page skeleton does not compile", log_tail(last.log));
  PageState state = read_state(last.log);
  std::string last_tex = render_page_tex(layout, blocks);

  // Table boxes were measured at 10pt.
  const double scale = layout.font_size_pt / 10.0;
  std::set<std::string> tried;
  int tables = 0;
  int rejections = 0;
  bool need_filler = true;  // every page opens with running text

  while (rejections < cfg.max_consecutive_rejections) {
    ContentBlock block;
    bool want_table = !need_filler && tables < cfg.max_tables_per_page &&
                      rng.bernoulli(cfg.table_probability);
    if (want_table) {
      const double avail = state.first_column && layout.two_column
                               ? std::max(state.remaining, state.text_height)
                               : state.remaining;
      std::vector<const TableAsset*> candidates;
      for (const auto& t : pool) {
        if (tried.count(t.id) > 0) continue;
        const double w = t.width_pt * scale;
        double h = t.height_pt * scale;
        if (w > cfg.oversize_factor * state.column_width) continue;
        if (w > state.column_width) h *= state.column_width / w;
        if (h > state.text_height || h > avail) continue;
        candidates.push_back(&t);
      }
      if (candidates.empty()) {
        want_table = false;
      } else {
        const TableAsset& t = *candidates[rng.uniform_int(0, static_cast<int>(candidates.size()) - 1)];
        tried.insert(t.id);
        block.kind = BlockKind::kTable;
        block.table_id = t.id;
        block.latex = t.latex;
        block.complexity = t.complexity;
        block.scaled = t.width_pt * scale > state.column_width;
      }
    }
    if (!want_table) {
      if (tables >= cfg.max_tables_per_page && !need_filler) break;
      block.kind = BlockKind::kFiller;
      block.text = filler_text(rng, cfg);
    }

    blocks.push_back(block);
    const std::string tex = render_page_tex(layout, blocks);
    CompileResult res = runner.compile(tex, opts.workdir, job);
    if (!accepted(res)) {
      blocks.pop_back();
      ++rejections;
      if (block.kind == BlockKind::kFiller && need_filler) need_filler = false;
      continue;
    }
    rejections = 0;
    need_filler = false;
    if (block.kind == BlockKind::kTable) ++tables;
    last = std::move(res);
    last_tex = tex;
    state = read_state(last.log);
  }

  // The last accepted state may not be what is on disk after a rejection.
  last = runner.compile(last_tex, opts.workdir, job);
  if (!accepted(last)) throw CompileError("final page does not compile", log_tail(last.log));

  const fs::path out_dir = opts.output_dir.empty() ? opts.workdir : opts.output_dir;
  fs::create_directories(out_dir);
  PageGroundTruth page;
  page.page_id = opts.page_id;
  page.layout = layout;
  page.blocks = std::move(blocks);
  page.tex_path = out_dir / (opts.page_id + ".tex");
  write_file(page.tex_path, last_tex);
  std::error_code ec;
  if (fs::exists(last.pdf_path, ec)) {
    page.pdf_path = out_dir / (opts.page_id + ".pdf");
    if (fs::absolute(last.pdf_path) != fs::absolute(page.pdf_path)) {
      fs::copy_file(last.pdf_path, page.pdf_path, fs::copy_options::overwrite_existing, ec);
      if (ec) throw IoError("cannot copy " + last.pdf_path.string());
    }
  }
  return page;
}

// ---- ground truth ------------------------------------------------------

fs::path emit_ground_truth(std::span<const PageGroundTruth> pages, const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir / "pages", ec);
  if (ec) throw IoError("cannot create " + (out_dir / "pages").string());

  nlohmann::json ids = nlohmann::json::array();
  nlohmann::json tables = nlohmann::json::array();
  std::map<std::string, int> by_complexity = {{"simple", 0}, {"moderate", 0}, {"complex", 0}};
  for (const auto& p : pages) {
    write_file(out_dir / "pages" / (p.page_id + ".json"), to_json(p).dump(2) + "\n");
    ids.push_back(p.page_id);
    for (const auto& b : p.blocks) {
      if (b.kind != BlockKind::kTable) continue;
      const std::string c(complexity_name(b.complexity));
      tables.push_back({{"page_id", p.page_id}, {"table_id", b.table_id}, {"complexity", c}});
      ++by_complexity[c];
    }
  }
  nlohmann::json counts = {{"pages", pages.size()}, {"tables", tables.size()}};
  for (const auto& [k, v] : by_complexity) counts[k] = v;
  const nlohmann::json manifest = {
      {"version", 1}, {"pages", ids}, {"tables", tables}, {"counts", counts}};
  const fs::path path = out_dir / "manifest.json";
  write_file(path, manifest.dump(2) + "\n");
  return path;
}

std::vector<PageGroundTruth> load_ground_truth(const fs::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw IoError("cannot read manifest " + manifest.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw IoError("bad manifest " + manifest.string() + ": " + e.what());
  }
  std::vector<PageGroundTruth> pages;
  const fs::path dir = manifest.parent_path() / "pages";
  for (const auto& id : j.at("pages")) {
    const fs::path p = dir / (id.get<std::string>() + ".json");
    std::ifstream page_in(p);
    if (!page_in) throw IoError("cannot read page " + p.string());
    try {
      pages.push_back(page_from_json(nlohmann::json::parse(page_in)));
    } catch (const nlohmann::json::exception& e) {
      throw IoError("bad page file " + p.string() + ": " + e.what());
    }
  }
  return pages;
}

}  // namespace tablebench
