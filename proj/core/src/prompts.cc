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

#include "tablebench/prompts.h"

namespace tablebench::prompts {
namespace {

constexpr const char* kMatchSystem =
    "You align ground-truth tables with the output of a document parser. "
    "You never rewrite, reformat or repair text.";

constexpr const char* kMatchInstructions = R"(Below are ground-truth tables given as LaTeX, followed by the full output a document parser produced for the same page.
For every ground-truth table, find the parser's rendition of that table (it may be HTML, Markdown, LaTeX or plain text) and copy it exactly as it appears in the parser output, character for character. Copy the whole table and nothing else.
If the parser output does not contain the table, use the string NOT_FOUND.

Answer with a single JSON object and no other text:
{"matches": [{"id": "<ground-truth id>", "table": "<verbatim copy or NOT_FOUND>"}]}
)";

constexpr const char* kJudgeSystem =
    "You are a meticulous reviewer of table extraction quality.";

constexpr const char* kJudgeInstructions = R"(Compare the ground-truth table (LaTeX) with the table extracted by a document parser.
Rate the extraction on a 0-10 scale for content accuracy and structural preservation, i.e., whether every cell value can be unambiguously mapped to its row and column headers.
Differences that keep the meaning intact (markup style, symbol encoding such as LaTeX vs. Unicode, equivalent number formatting, reorganized but unambiguous structure) should not be penalized. Missing, altered or misattributed values should be.

10 = all values, headers and their associations are correctly, completely and unambiguously preserved.
0 = the table is missing or unusable.

You may reason briefly. End your answer with a final line containing only the integer score.
)";

constexpr const char* kComplexityInstructions = R"(Classify the structural complexity of this LaTeX table into exactly one class:
simple: a regular grid without merged cells.
moderate: limited cell merging (for example a spanning header row or a few merged cells).
complex: multi-dimensional merging (cells merged across both rows and columns) or nested structures.

Answer with one word: simple, moderate or complex.
)";

constexpr const char* kHintsInstructions = R"(A human will rate how well a document parser extracted a table. Before they do, list the potential differences between the ground-truth table (LaTeX) and the extracted table so that subtle issues are not overlooked. Do not score the pair.

Tag every difference with one category:
content error, structural reorganization, symbol encoding, value equivalence, markup artifact.

Report at most 10 short differences. Answer with a single JSON object and no other text:
{"hints": [{"category": "<category>", "text": "<one sentence>"}]}
Use {"hints": []} when the tables are equivalent.
)";

}  // namespace

std::vector<ChatMessage> match_messages(const std::vector<GtTable>& gt_tables,
                                        const std::string& parser_output) {
  std::string user = kMatchInstructions;
  user += "\n### Ground-truth tables\n";
  for (const auto& t : gt_tables) {
    user += "\n--- id: " + t.id + " ---\n" + t.latex + "\n";
  }
  user += "\n### Parser output\n<<<\n" + parser_output + "\n>>>\n";
  return {{"system", kMatchSystem}, {"user", std::move(user)}};
}

std::vector<ChatMessage> judge_messages(const std::string& gt_latex, const std::string& extracted) {
  std::string user = kJudgeInstructions;
  user += "\n### Ground truth (LaTeX)\n<<<\n" + gt_latex + "\n>>>\n";
  user += "\n### Extracted table\n<<<\n" + extracted + "\n>>>\n";
  return {{"system", kJudgeSystem}, {"user", std::move(user)}};
}

std::vector<ChatMessage> complexity_messages(const std::string& table_latex) {
  std::string user = kComplexityInstructions;
  user += "\n<<<\n" + table_latex + "\n>>>\n";
  return {{"user", std::move(user)}};
}

std::vector<ChatMessage> hints_messages(const std::string& gt_latex, const std::string& extracted) {
  std::string user = kHintsInstructions;
  user += "\n### Ground truth (LaTeX)\n<<<\n" + gt_latex + "\n>>>\n";
  user += "\n### Extracted table\n<<<\n" + extracted + "\n>>>\n";
  return {{"user", std::move(user)}};
}

std::vector<ChatMessage> with_repair(std::vector<ChatMessage> messages, const std::string& reply,
                                     const std::string& instruction) {
  messages.push_back({"assistant", reply});
  messages.push_back({"user", "Your answer could not be parsed. " + instruction});
  return messages;
}

}  // namespace tablebench::prompts
