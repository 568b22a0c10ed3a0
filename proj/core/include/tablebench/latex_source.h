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

#ifndef TABLEBENCH_LATEX_SOURCE_H_
#define TABLEBENCH_LATEX_SOURCE_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Low-level scanning helpers over LaTeX source shared by the tabular parser
// and the benchmark generator.
namespace tablebench::latex {

// True when the character at pos is preceded by an odd number of backslashes.
bool is_escaped(std::string_view s, std::size_t pos);

// Removes unescaped '%' comments together with the line break and the
// leading blanks of the following line.
std::string strip_comments(std::string_view s);

// s[open] must be '{'. Returns the index of the matching '}'.
std::optional<std::size_t> match_brace(std::string_view s, std::size_t open);

// Like match_brace for '[' ... ']' (brace-aware).
std::optional<std::size_t> match_bracket(std::string_view s, std::size_t open);

bool braces_balanced(std::string_view s);

std::size_t skip_spaces(std::string_view s, std::size_t pos);

// Reads "{...}" at pos (after optional spaces). Returns the inner text and
// advances pos past the closing brace.
std::optional<std::string> read_group(std::string_view s, std::size_t& pos);
// Same for an optional "[...]" argument.
std::optional<std::string> read_optional(std::string_view s, std::size_t& pos);

struct EnvRange {
  std::string name;       // e.g. "tabular*"
  std::size_t begin = 0;  // index of "\begin"
  std::size_t end = 0;    // one past the closing "\end{name}"
};

// Environments named in `names` that are not nested inside another
// environment from the same set. Comments must already be stripped.
std::vector<EnvRange> find_top_level_envs(std::string_view s,
                                          const std::vector<std::string>& names);

}  // namespace tablebench::latex

#endif  // TABLEBENCH_LATEX_SOURCE_H_
