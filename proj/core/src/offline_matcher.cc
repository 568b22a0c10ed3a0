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

#include <algorithm>
#include <regex>
#include <tuple>
#include <unordered_map>

#include "tablebench/errors.h"
#include "tablebench/harness.h"
#include "tablebench/latex_source.h"
#include "tablebench/post_validate.h"
#include "tablebench/text_sim.h"

namespace tablebench {
namespace {

bool overlaps(const std::vector<TableSegment>& segs, std::size_t begin, std::size_t end) {
  return std::any_of(segs.begin(), segs.end(),
                     [&](const TableSegment& s) { return begin < s.end && s.begin < end; });
}

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

void html_segments(std::string_view text, std::vector<TableSegment>& out) {
  const std::string lower = ascii_lower(text);
  static const std::regex kTag(R"(<(/?)table\b[^>]*>)");
  std::size_t depth = 0;
  std::size_t start = 0;
  for (auto it = std::sregex_iterator(lower.begin(), lower.end(), kTag); it != std::sregex_iterator();
       ++it) {
    const auto pos = static_cast<std::size_t>(it->position());
    if ((*it)[1].length() == 0) {
      if (depth++ == 0) start = pos;
    } else if (depth > 0 && --depth == 0) {
      const std::size_t end = pos + static_cast<std::size_t>(it->length());
      out.push_back({start, end, Format::kHtml, std::string(text.substr(start, end - start))});
    }
  }
}

void latex_segments(std::string_view text, std::vector<TableSegment>& out) {
  static const std::vector<std::string> kEnvs = {"tabular", "tabular*", "tabularx"};
  for (const auto& env : latex::find_top_level_envs(text, kEnvs)) {
    if (overlaps(out, env.begin, env.end)) continue;
    out.push_back({env.begin, env.end, Format::kLatex,
                   std::string(text.substr(env.begin, env.end - env.begin))});
  }
}

struct LineRef {
  std::size_t begin;
  std::size_t end;  // excluding '\n'
  std::string_view text;
};

std::vector<LineRef> split_lines(std::string_view text) {
  std::vector<LineRef> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    std::size_t end = nl;
    if (end > start && text[end - 1] == '\r') --end;
    lines.push_back({start, end, text.substr(start, end - start)});
    if (nl == text.size()) break;
    start = nl + 1;
  }
  return lines;
}

void markdown_segments(std::string_view text, std::vector<TableSegment>& out) {
  static const std::regex kDelim(R"(^\s*\|?\s*:?-+:?\s*(\|\s*:?-+:?\s*)*\|?\s*$)");
  const auto lines = split_lines(text);
  const auto has_pipe = [](std::string_view l) { return l.find('|') != std::string_view::npos; };
  std::size_t i = 1;
  while (i < lines.size()) {
    const std::string line(lines[i].text);
    if (has_pipe(line) && line.find('-') != std::string::npos && std::regex_match(line, kDelim) &&
        has_pipe(lines[i - 1].text)) {
      std::size_t last = i;
      while (last + 1 < lines.size() && has_pipe(lines[last + 1].text)) ++last;
      const std::size_t begin = lines[i - 1].begin;
      const std::size_t end = lines[last].end;
      if (!overlaps(out, begin, end)) {
        out.push_back({begin, end, Format::kMarkdown, std::string(text.substr(begin, end - begin))});
      }
      i = last + 2;
    } else {
      ++i;
    }
  }
}

bool looks_columnar(std::string_view line) {
  static const std::regex kSep(R"(\S(\t| {2,})\S)");
  return std::regex_search(line.begin(), line.end(), kSep);
}

void plain_segments(std::string_view text, std::vector<TableSegment>& out) {
  const auto lines = split_lines(text);
  std::size_t i = 0;
  while (i < lines.size()) {
    if (!looks_columnar(lines[i].text)) {
      ++i;
      continue;
    }
    std::size_t last = i;
    while (last + 1 < lines.size() && looks_columnar(lines[last + 1].text)) ++last;
    if (last > i) {
      const std::size_t begin = lines[i].begin;
      const std::size_t end = lines[last].end;
      if (!overlaps(out, begin, end)) {
        out.push_back({begin, end, Format::kPlainText, std::string(text.substr(begin, end - begin))});
      }
    }
    i = last + 1;
  }
}

// Cell text with LaTeX control words, braces and math shifts dropped, so a
// LaTeX ground truth and a rendered extraction share bigrams.
std::u32string visible_text(const Grid& g) {
  static const std::regex kControl(R"(\\[A-Za-z]+\*?|[{}$~\\])");
  std::string joined;
  for (const auto& cell : g.cells()) {
    if (cell.content.empty()) continue;
    joined += std::regex_replace(cell.content, kControl, " ");
    joined += ' ';
  }
  return tokenize(lowercase(collapse_whitespace(joined)));
}

double dice_bigrams(const std::u32string& a, const std::u32string& b) {
  if (a.size() < 2 || b.size() < 2) return a == b && !a.empty() ? 1.0 : 0.0;
  std::unordered_map<std::uint64_t, int> counts;
  const auto key = [](char32_t x, char32_t y) {
    return (static_cast<std::uint64_t>(x) << 32) | static_cast<std::uint64_t>(y);
  };
  for (std::size_t i = 0; i + 1 < a.size(); ++i) ++counts[key(a[i], a[i + 1])];
  std::size_t shared = 0;
  for (std::size_t i = 0; i + 1 < b.size(); ++i) {
    auto it = counts.find(key(b[i], b[i + 1]));
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++shared;
    }
  }
  return 2.0 * static_cast<double>(shared) / static_cast<double>(a.size() + b.size() - 2);
}

}  // namespace

std::vector<TableSegment> segment_tables(std::string_view output, Format hint) {
  std::vector<TableSegment> segs;
  html_segments(output, segs);
  latex_segments(output, segs);
  markdown_segments(output, segs);
  if (segs.empty() || hint == Format::kPlainText) plain_segments(output, segs);
  std::sort(segs.begin(), segs.end(),
            [](const TableSegment& a, const TableSegment& b) { return a.begin < b.begin; });
  return segs;
}

double content_affinity(const Grid& gt, const Grid& candidate) {
  return dice_bigrams(visible_text(gt), visible_text(candidate));
}

std::vector<MatchRecord> match_tables_offline(const std::vector<prompts::GtTable>& gt_tables,
                                              std::string_view parser_output, Format hint,
                                              const std::string& parser_id,
                                              const std::string& page_id) {
  const auto segs = segment_tables(parser_output, hint);
  std::vector<std::optional<Grid>> seg_grids;
  for (const auto& s : segs) {
    try {
      seg_grids.emplace_back(parse_auto(s.text, s.format));
    } catch (const MalformedTable&) {
      seg_grids.emplace_back(std::nullopt);
    }
  }

  std::vector<std::tuple<double, std::size_t, std::size_t>> scored;
  for (std::size_t i = 0; i < gt_tables.size(); ++i) {
    Grid gt;
    try {
      gt = parse_latex(gt_tables[i].latex);
    } catch (const MalformedTable&) {
      continue;
    }
    for (std::size_t j = 0; j < segs.size(); ++j) {
      if (!seg_grids[j]) continue;
      const double a = content_affinity(gt, *seg_grids[j]);
      if (a >= kOfflineMatchThreshold) scored.emplace_back(a, i, j);
    }
  }
  std::sort(scored.begin(), scored.end(), [](const auto& x, const auto& y) {
    if (std::get<0>(x) != std::get<0>(y)) return std::get<0>(x) > std::get<0>(y);
    return std::tie(std::get<1>(x), std::get<2>(x)) < std::tie(std::get<1>(y), std::get<2>(y));
  });

  std::vector<std::optional<std::size_t>> assigned(gt_tables.size());
  std::vector<bool> used(segs.size(), false);
  for (const auto& [a, i, j] : scored) {
    if (assigned[i] || used[j]) continue;
    assigned[i] = j;
    used[j] = true;
  }

  std::vector<MatchRecord> records;
  for (std::size_t i = 0; i < gt_tables.size(); ++i) {
    std::optional<std::string> snippet;
    if (assigned[i]) snippet = segs[*assigned[i]].text;
    records.push_back(resolve_match(gt_tables[i].id, parser_id, page_id, snippet, parser_output));
  }
  return records;
}

}  // namespace tablebench
