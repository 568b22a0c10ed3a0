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

#include "tablebench/post_validate.h"

#include <algorithm>
#include <vector>

namespace tablebench {
namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

// Whitespace-collapsed, trimmed copy of s with the source offset of every
// kept byte. A collapsed run is represented by the offset of its first byte.
struct Collapsed {
  std::string text;
  std::vector<std::size_t> origin;
};

Collapsed collapse_with_offsets(std::string_view s) {
  Collapsed out;
  bool pending_space = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (is_space(s[i])) {
      if (!out.text.empty() && !pending_space) {
        pending_space = true;
        out.text.push_back(' ');
        out.origin.push_back(i);
      }
      continue;
    }
    pending_space = false;
    out.text.push_back(s[i]);
    out.origin.push_back(i);
  }
  if (!out.text.empty() && out.text.back() == ' ') {
    out.text.pop_back();
    out.origin.pop_back();
  }
  return out;
}

struct Line {
  std::size_t begin = 0;  // byte offsets of the line content, without '\n'
  std::size_t end = 0;
  std::string key;  // collapsed form
};

std::vector<Line> nonempty_lines(std::string_view s) {
  std::vector<Line> lines;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t nl = s.find('\n', start);
    if (nl == std::string_view::npos) nl = s.size();
    Line line{start, nl, collapse_with_offsets(s.substr(start, nl - start)).text};
    if (!line.key.empty()) lines.push_back(std::move(line));
    if (nl == s.size()) break;
    start = nl + 1;
  }
  return lines;
}

// Shrinks [begin, end) so it neither starts nor ends on whitespace.
std::pair<std::size_t, std::size_t> trim_span(std::string_view s, std::size_t begin,
                                              std::size_t end) {
  while (begin < end && is_space(s[begin])) ++begin;
  while (end > begin && is_space(s[end - 1])) --end;
  return {begin, end};
}

PostValidation located(std::string_view output, std::size_t begin, std::size_t end,
                       Validation v) {
  return PostValidation{v, std::make_pair(begin, end), std::string(output.substr(begin, end - begin))};
}

}  // namespace

PostValidation post_validate(std::string_view candidate, std::string_view parser_output) {
  if (candidate.empty()) return {};

  if (auto pos = parser_output.find(candidate); pos != std::string_view::npos) {
    return located(parser_output, pos, pos + candidate.size(), Validation::kVerbatim);
  }

  const Collapsed cand = collapse_with_offsets(candidate);
  if (cand.text.empty()) return {};
  const Collapsed out = collapse_with_offsets(parser_output);
  if (auto pos = out.text.find(cand.text); pos != std::string::npos) {
    const std::size_t begin = out.origin[pos];
    const std::size_t end = out.origin[pos + cand.text.size() - 1] + 1;
    return located(parser_output, begin, end, Validation::kWhitespaceCorrected);
  }

  const std::vector<Line> cand_lines = nonempty_lines(candidate);
  const std::vector<Line> out_lines = nonempty_lines(parser_output);
  if (cand_lines.empty() || out_lines.empty()) return {};

  std::size_t anchor = 0;
  for (std::size_t i = 1; i < cand_lines.size(); ++i) {
    if (cand_lines[i].key.size() > cand_lines[anchor].key.size()) anchor = i;
  }
  const auto m = static_cast<long>(cand_lines.size());
  const auto n = static_cast<long>(out_lines.size());

  long best_hits = -1;
  long best_first = 0;
  for (long j = 0; j < n; ++j) {
    if (out_lines[j].key != cand_lines[anchor].key) continue;
    const long first = j - static_cast<long>(anchor);
    long hits = 0;
    for (long i = 0; i < m; ++i) {
      const long k = first + i;
      if (k >= 0 && k < n && out_lines[k].key == cand_lines[i].key) ++hits;
    }
    if (hits > best_hits) {
      best_hits = hits;
      best_first = first;
    }
  }
  if (best_hits < 0) return {};
  if (static_cast<double>(best_hits) < kFuzzyLineThreshold * static_cast<double>(m)) return {};

  const long lo = std::max(best_first, 0L);
  const long hi = std::min(best_first + m, n) - 1;
  auto [begin, end] = trim_span(parser_output, out_lines[lo].begin, out_lines[hi].end);
  return located(parser_output, begin, end, Validation::kFuzzyLocated);
}

}  // namespace tablebench
