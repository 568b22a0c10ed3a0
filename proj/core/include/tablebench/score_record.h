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

#ifndef TABLEBENCH_SCORE_RECORD_H_
#define TABLEBENCH_SCORE_RECORD_H_

#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

namespace tablebench {

enum class Complexity { kSimple, kModerate, kComplex };

std::string_view complexity_name(Complexity c);
std::optional<Complexity> complexity_from_name(std::string_view name);

// How a matched table snippet was confirmed against the raw parser output.
enum class Validation { kVerbatim, kWhitespaceCorrected, kFuzzyLocated, kUnverified };

std::string_view validation_name(Validation v);
std::optional<Validation> validation_from_name(std::string_view name);

// All metric outputs for one ground-truth table against one parser.
struct ScoreRecord {
  std::string parser_id;
  std::string page_id;
  std::string gt_table_id;
  Complexity complexity = Complexity::kSimple;

  // Absent when the extracted snippet carries no tabular markup.
  std::optional<double> teds;
  double grits_top = 0.0;
  double grits_con = 0.0;
  double grits_avg = 0.0;
  double score_index = 0.0;
  double score_content = 0.0;
  double score_avg = 0.0;
  // Absent when the judge is disabled or failed on this pair.
  std::optional<int> judge;

  Validation validation = Validation::kUnverified;
  bool miss = false;
  bool malformed = false;      // a side failed to parse; rule metrics are 0
  bool judge_flagged = false;  // judge output clamped or unusable
  std::string extracted_format;

  std::string pair_id() const { return parser_id + "/" + page_id + "/" + gt_table_id; }

  friend bool operator==(const ScoreRecord&, const ScoreRecord&) = default;
};

nlohmann::json to_json(const ScoreRecord& r);
ScoreRecord score_record_from_json(const nlohmann::json& j);

}  // namespace tablebench

#endif  // TABLEBENCH_SCORE_RECORD_H_
