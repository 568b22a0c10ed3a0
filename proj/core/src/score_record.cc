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

#include "tablebench/score_record.h"

namespace tablebench {

std::string_view complexity_name(Complexity c) {
  switch (c) {
    case Complexity::kSimple:
      return "simple";
    case Complexity::kModerate:
      return "moderate";
    case Complexity::kComplex:
      return "complex";
  }
  return "simple";
}

std::optional<Complexity> complexity_from_name(std::string_view name) {
  if (name == "simple") return Complexity::kSimple;
  if (name == "moderate") return Complexity::kModerate;
  if (name == "complex") return Complexity::kComplex;
  return std::nullopt;
}

std::string_view validation_name(Validation v) {
  switch (v) {
    case Validation::kVerbatim:
      return "verbatim";
    case Validation::kWhitespaceCorrected:
      return "whitespace-corrected";
    case Validation::kFuzzyLocated:
      return "fuzzy-located";
    case Validation::kUnverified:
      return "unverified";
  }
  return "unverified";
}

std::optional<Validation> validation_from_name(std::string_view name) {
  for (Validation v : {Validation::kVerbatim, Validation::kWhitespaceCorrected,
                       Validation::kFuzzyLocated, Validation::kUnverified}) {
    if (validation_name(v) == name) return v;
  }
  return std::nullopt;
}

nlohmann::json to_json(const ScoreRecord& r) {
  nlohmann::json j = {{"parser_id", r.parser_id},
                      {"page_id", r.page_id},
                      {"gt_table_id", r.gt_table_id},
                      {"complexity", complexity_name(r.complexity)},
                      {"teds", nullptr},
                      {"grits_top", r.grits_top},
                      {"grits_con", r.grits_con},
                      {"grits_avg", r.grits_avg},
                      {"score_index", r.score_index},
                      {"score_content", r.score_content},
                      {"score_avg", r.score_avg},
                      {"judge", nullptr},
                      {"validation", validation_name(r.validation)},
                      {"miss", r.miss},
                      {"malformed", r.malformed},
                      {"judge_flagged", r.judge_flagged},
                      {"extracted_format", r.extracted_format}};
  if (r.teds) j["teds"] = *r.teds;
  if (r.judge) j["judge"] = *r.judge;
  return j;
}

ScoreRecord score_record_from_json(const nlohmann::json& j) {
  ScoreRecord r;
  r.parser_id = j.at("parser_id").get<std::string>();
  r.page_id = j.at("page_id").get<std::string>();
  r.gt_table_id = j.at("gt_table_id").get<std::string>();
  r.complexity = complexity_from_name(j.value("complexity", "simple")).value_or(Complexity::kSimple);
  if (j.contains("teds") && !j["teds"].is_null()) r.teds = j["teds"].get<double>();
  r.grits_top = j.value("grits_top", 0.0);
  r.grits_con = j.value("grits_con", 0.0);
  r.grits_avg = j.value("grits_avg", 0.0);
  r.score_index = j.value("score_index", 0.0);
  r.score_content = j.value("score_content", 0.0);
  r.score_avg = j.value("score_avg", 0.0);
  if (j.contains("judge") && !j["judge"].is_null()) r.judge = j["judge"].get<int>();
  r.validation = validation_from_name(j.value("validation", "unverified")).value_or(Validation::kUnverified);
  r.miss = j.value("miss", false);
  r.malformed = j.value("malformed", false);
  r.judge_flagged = j.value("judge_flagged", false);
  r.extracted_format = j.value("extracted_format", "");
  return r;
}

}  // namespace tablebench
