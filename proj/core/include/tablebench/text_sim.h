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

#ifndef TABLEBENCH_TEXT_SIM_H_
#define TABLEBENCH_TEXT_SIM_H_

#include <cstddef>
#include <string>
#include <string_view>

namespace tablebench {

// Character-level token sequence: one element per Unicode scalar value.
using TokenSeq = std::u32string;

// Decodes UTF-8. Invalid bytes become U+FFFD rather than failing.
TokenSeq tokenize(std::string_view utf8);
std::string to_utf8(std::u32string_view tokens);

std::size_t levenshtein(std::u32string_view a, std::u32string_view b);

// levenshtein(a, b) / max(|a|, |b|); 0 when both are empty.
double norm_lev(std::u32string_view a, std::u32string_view b);

std::size_t lcs_length(std::u32string_view a, std::u32string_view b);

// 2 * |LCS(a, b)| / (|a| + |b|); 1 when both are empty.
double lcs_sim(std::u32string_view a, std::u32string_view b);

// NFC, whitespace runs collapsed to a single space, trimmed. Case preserved.
std::string normalize_text(std::string_view s);

// Unicode-aware lowercase (root locale).
std::string lowercase(std::string_view s);

// Collapses ASCII whitespace runs to one space and trims. Byte-level, no
// Unicode normalization, so offsets into the original stay recoverable.
std::string collapse_whitespace(std::string_view s);

}  // namespace tablebench

#endif  // TABLEBENCH_TEXT_SIM_H_
