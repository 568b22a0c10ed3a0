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

#ifndef TABLEBENCH_PROMPTS_H_
#define TABLEBENCH_PROMPTS_H_

#include <string>
#include <utility>
#include <vector>

#include "tablebench/llm_gateway.h"

namespace tablebench::prompts {

// Bump the version whenever the wording of the matching template changes;
// it is recorded with every verdict and invalidates cached transcripts.
inline constexpr const char* kMatchVersion = "match-v1";
inline constexpr const char* kJudgeVersion = "judge-v1";
inline constexpr const char* kComplexityVersion = "complexity-v1";
inline constexpr const char* kHintsVersion = "hints-v1";

struct GtTable {
  std::string id;
  std::string latex;
};

std::vector<ChatMessage> match_messages(const std::vector<GtTable>& gt_tables,
                                        const std::string& parser_output);
std::vector<ChatMessage> judge_messages(const std::string& gt_latex, const std::string& extracted);
std::vector<ChatMessage> complexity_messages(const std::string& table_latex);
std::vector<ChatMessage> hints_messages(const std::string& gt_latex, const std::string& extracted);

// Appends the model's unusable reply and a request to answer again in the
// required format.
std::vector<ChatMessage> with_repair(std::vector<ChatMessage> messages, const std::string& reply,
                                     const std::string& instruction);

}  // namespace tablebench::prompts

#endif  // TABLEBENCH_PROMPTS_H_
