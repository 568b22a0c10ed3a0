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

#ifndef TABLEBENCH_POST_VALIDATE_H_
#define TABLEBENCH_POST_VALIDATE_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "tablebench/score_record.h"

namespace tablebench {

struct PostValidation {
  Validation validation = Validation::kUnverified;
  // Byte range [first, second) into the parser output.
  std::optional<std::pair<std::size_t, std::size_t>> char_span;
  // The located slice of the parser output; empty when unverified.
  std::string text;
};

// Share of candidate lines that must reappear in a window of the output for
// a fuzzy location to be accepted.
inline constexpr double kFuzzyLineThreshold = 0.9;

// Confirms a model-returned table snippet against the raw parser output:
// exact substring, then whitespace-insensitive substring, then a window
// anchored on the candidate's longest line.
PostValidation post_validate(std::string_view candidate, std::string_view parser_output);

}  // namespace tablebench

#endif  // TABLEBENCH_POST_VALIDATE_H_
