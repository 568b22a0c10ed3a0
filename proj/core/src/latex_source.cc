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

#include "tablebench/latex_source.h"

#include <algorithm>

namespace tablebench::latex {

bool is_escaped(std::string_view s, std::size_t pos) {
  std::size_t backslashes = 0;
  while (pos > 0 && s[pos - 1] == '\\') {
    ++backslashes;
    --pos;
  }
  return backslashes % 2 == 1;
}

std::string strip_comments(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '%' && !is_escaped(s, i)) {
      std::size_t j = s.find('\n', i);
      if (j == std::string_view::npos) break;
      ++j;
      while (j < s.size() && (s[j] == ' ' || s[j] == '\t')) ++j;
      i = j - 1;
      continue;
    }
    out.push_back(s[i]);
  }
  return out;
}

namespace {

std::optional<std::size_t> match_pair(std::string_view s, std::size_t open, char lo, char hi) {
  if (open >= s.size() || s[open] != lo) return std::nullopt;
  int depth = 0;
  int brace_depth = 0;
  for (std::size_t i = open; i < s.size(); ++i) {
    const char c = s[i];
    if ((c == '{' || c == '}' || c == lo || c == hi) && is_escaped(s, i)) continue;
    if (lo != '{') {
      if (c == '{') {
        ++brace_depth;
        continue;
      }
      if (c == '}') {
        --brace_depth;
        continue;
      }
      if (brace_depth > 0) continue;
    }
    if (c == lo) {
      ++depth;
    } else if (c == hi) {
      if (--depth == 0) return i;
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::size_t> match_brace(std::string_view s, std::size_t open) {
  return match_pair(s, open, '{', '}');
}

std::optional<std::size_t> match_bracket(std::string_view s, std::size_t open) {
  return match_pair(s, open, '[', ']');
}

bool braces_balanced(std::string_view s) {
  long depth = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '{' && s[i] != '}') continue;
    if (is_escaped(s, i)) continue;
    depth += s[i] == '{' ? 1 : -1;
    if (depth < 0) return false;
  }
  return depth == 0;
}

std::size_t skip_spaces(std::string_view s, std::size_t pos) {
  while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t' || s[pos] == '\n' || s[pos] == '\r')) {
    ++pos;
  }
  return pos;
}

std::optional<std::string> read_group(std::string_view s, std::size_t& pos) {
  const std::size_t open = skip_spaces(s, pos);
  auto close = match_brace(s, open);
  if (!close) return std::nullopt;
  pos = *close + 1;
  return std::string(s.substr(open + 1, *close - open - 1));
}

std::optional<std::string> read_optional(std::string_view s, std::size_t& pos) {
  const std::size_t open = skip_spaces(s, pos);
  if (open >= s.size() || s[open] != '[') return std::nullopt;
  auto close = match_bracket(s, open);
  if (!close) return std::nullopt;
  pos = *close + 1;
  return std::string(s.substr(open + 1, *close - open - 1));
}

std::vector<EnvRange> find_top_level_envs(std::string_view s,
                                          const std::vector<std::string>& names) {
  const auto is_target = [&](std::string_view name) {
    return std::find(names.begin(), names.end(), name) != names.end();
  };
  std::vector<EnvRange> out;
  int depth = 0;
  EnvRange current;
  std::size_t i = 0;
  while (i < s.size()) {
    const bool at_begin = s.compare(i, 7, "\\begin{") == 0;
    const bool at_end = s.compare(i, 5, "\\end{") == 0;
    if ((!at_begin && !at_end) || is_escaped(s, i)) {
      ++i;
      continue;
    }
    const std::size_t open = i + (at_begin ? 6 : 4);
    auto close = match_brace(s, open);
    if (!close) {
      ++i;
      continue;
    }
    const std::string name(s.substr(open + 1, *close - open - 1));
    if (is_target(name)) {
      if (at_begin) {
        if (depth == 0) current = EnvRange{.name = name, .begin = i};
        ++depth;
      } else if (depth > 0) {
        if (--depth == 0) {
          current.end = *close + 1;
          out.push_back(current);
        }
      }
    }
    i = *close + 1;
  }
  return out;
}

}  // namespace tablebench::latex
