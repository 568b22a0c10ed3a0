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

#ifndef TABLEBENCH_LLM_TASKS_H_
#define TABLEBENCH_LLM_TASKS_H_

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "tablebench/llm_gateway.h"
#include "tablebench/post_validate.h"
#include "tablebench/prompts.h"
#include "tablebench/score_record.h"

namespace tablebench {

struct MatchRecord {
  std::string gt_table_id;
  std::string parser_id;
  std::string page_id;
  std::optional<std::string> extracted_text;  // absent: table not found
  Validation validation = Validation::kUnverified;
  std::optional<std::pair<std::size_t, std::size_t>> char_span;

  friend bool operator==(const MatchRecord&, const MatchRecord&) = default;
};

nlohmann::json to_json(const MatchRecord& m);
MatchRecord match_record_from_json(const nlohmann::json& j);

// Turns a model-returned snippet into a MatchRecord via post_validate.
// NOT_FOUND, empty and unverifiable snippets all become misses.
MatchRecord resolve_match(const std::string& gt_table_id, const std::string& parser_id,
                          const std::string& page_id, const std::optional<std::string>& snippet,
                          std::string_view parser_output);

// One call per page with all ground-truth tables. An unparseable response is
// retried once with a repair prompt; if that fails too, every table is
// returned as an unverified miss. EndpointError propagates.
std::vector<MatchRecord> match_tables(LlmGateway& gateway,
                                      const std::vector<prompts::GtTable>& gt_tables,
                                      std::string_view parser_output, const std::string& parser_id,
                                      const std::string& page_id);

struct JudgeVerdict {
  int score = 0;
  std::string rationale;
  std::string judge_model;
  std::string prompt_version;
  bool clamped = false;
};

// First integer on the last non-empty line, clamped to 0-10. Throws
// ProtocolError when that line carries no integer.
std::pair<int, bool> parse_judge_score(std::string_view reply);

// nullopt when the model's answer stays unparseable after one repair retry;
// callers flag such pairs for manual review. EndpointError propagates.
std::optional<JudgeVerdict> judge_pair(LlmGateway& gateway, const std::string& gt_latex,
                                       const std::string& extracted);

struct ComplexityResult {
  Complexity label = Complexity::kSimple;
  bool from_llm = false;
};

// Merging-based rule: no multirow/multicolumn -> simple, one kind -> moderate,
// both kinds or a nested tabular -> complex.
Complexity complexity_heuristic(std::string_view table_latex);

// Falls back to the heuristic without a gateway, on EndpointError, or when the
// answer names no class.
ComplexityResult classify_complexity(LlmGateway* gateway, const std::string& table_latex);

enum class HintCategory {
  kContentError,
  kStructuralReorganization,
  kSymbolEncoding,
  kValueEquivalence,
  kMarkupArtifact,
};

std::string_view hint_category_name(HintCategory c);
std::optional<HintCategory> hint_category_from_name(std::string_view name);

struct Hint {
  HintCategory category = HintCategory::kContentError;
  std::string text;

  friend bool operator==(const Hint&, const Hint&) = default;
};

nlohmann::json to_json(const Hint& h);

inline constexpr std::size_t kMaxHints = 10;

// Parses {"hints": [...]} (or a bare array). Entries with an unknown category
// or no text are dropped; at most kMaxHints are kept.
std::vector<Hint> parse_hints(std::string_view reply);

// Never throws for endpoint or protocol failures; returns no hints instead.
std::vector<Hint> generate_hints(LlmGateway& gateway, const std::string& gt_latex,
                                 const std::string& extracted);

// Parses the first JSON object or array in a model reply, tolerating code
// fences and surrounding prose. Throws ProtocolError.
nlohmann::json extract_json(std::string_view reply);

}  // namespace tablebench

#endif  // TABLEBENCH_LLM_TASKS_H_
