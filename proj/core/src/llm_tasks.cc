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

#include "tablebench/llm_tasks.h"

#include <algorithm>
#include <cctype>
#include <map>
#include <regex>

#include "tablebench/errors.h"
#include "tablebench/text_sim.h"

namespace tablebench {

nlohmann::json to_json(const MatchRecord& m) {
  nlohmann::json j = {{"gt_table_id", m.gt_table_id},
                      {"parser_id", m.parser_id},
                      {"page_id", m.page_id},
                      {"validation", validation_name(m.validation)}};
  j["extracted_text"] = m.extracted_text ? nlohmann::json(*m.extracted_text) : nlohmann::json();
  j["char_span"] = m.char_span ? nlohmann::json::array({m.char_span->first, m.char_span->second})
                               : nlohmann::json();
  return j;
}

MatchRecord match_record_from_json(const nlohmann::json& j) {
  MatchRecord m;
  m.gt_table_id = j.at("gt_table_id").get<std::string>();
  m.parser_id = j.at("parser_id").get<std::string>();
  m.page_id = j.at("page_id").get<std::string>();
  const auto v = validation_from_name(j.at("validation").get<std::string>());
  if (!v) throw std::invalid_argument("unknown validation tag");
  m.validation = *v;
  if (j.contains("extracted_text") && !j["extracted_text"].is_null()) {
    m.extracted_text = j["extracted_text"].get<std::string>();
  }
  if (j.contains("char_span") && !j["char_span"].is_null()) {
    m.char_span = std::make_pair(j["char_span"].at(0).get<std::size_t>(),
                                 j["char_span"].at(1).get<std::size_t>());
  }
  return m;
}

MatchRecord resolve_match(const std::string& gt_table_id, const std::string& parser_id,
                          const std::string& page_id, const std::optional<std::string>& snippet,
                          std::string_view parser_output) {
  MatchRecord m{gt_table_id, parser_id, page_id, std::nullopt, Validation::kUnverified, std::nullopt};
  if (!snippet || snippet->empty() || collapse_whitespace(*snippet) == "NOT_FOUND") return m;
  PostValidation pv = post_validate(*snippet, parser_output);
  if (pv.validation == Validation::kUnverified) return m;
  m.validation = pv.validation;
  m.char_span = pv.char_span;
  m.extracted_text = std::move(pv.text);
  return m;
}

nlohmann::json extract_json(std::string_view reply) {
  const auto obj = reply.find('{');
  const auto arr = reply.find('[');
  const auto start = std::min(obj, arr);
  if (start == std::string_view::npos) throw ProtocolError("no JSON value in reply");
  const char close = reply[start] == '{' ? '}' : ']';
  const auto end = reply.rfind(close);
  if (end == std::string_view::npos || end < start) throw ProtocolError("unterminated JSON value");
  try {
    return nlohmann::json::parse(reply.substr(start, end - start + 1));
  } catch (const nlohmann::json::exception& e) {
    throw ProtocolError(std::string("bad JSON in reply: ") + e.what());
  }
}

namespace {

std::map<std::string, std::optional<std::string>> parse_matches(std::string_view reply) {
  const nlohmann::json j = extract_json(reply);
  const nlohmann::json* list = &j;
  if (j.is_object()) {
    if (!j.contains("matches")) throw ProtocolError("reply lacks \"matches\"");
    list = &j["matches"];
  }
  if (!list->is_array()) throw ProtocolError("\"matches\" is not a list");
  std::map<std::string, std::optional<std::string>> out;
  for (const auto& item : *list) {
    if (!item.is_object() || !item.contains("id")) throw ProtocolError("match entry without id");
    const auto& id_val = item["id"];
    const std::string id = id_val.is_string() ? id_val.get<std::string>() : id_val.dump();
    std::optional<std::string> table;
    if (item.contains("table") && item["table"].is_string()) table = item["table"].get<std::string>();
    out.emplace(id, std::move(table));
  }
  return out;
}

}  // namespace

std::vector<MatchRecord> match_tables(LlmGateway& gateway,
                                      const std::vector<prompts::GtTable>& gt_tables,
                                      std::string_view parser_output, const std::string& parser_id,
                                      const std::string& page_id) {
  if (gt_tables.empty()) throw std::invalid_argument("no ground-truth tables to match");
  if (parser_output.empty()) throw std::invalid_argument("empty parser output");

  const auto messages = prompts::match_messages(gt_tables, std::string(parser_output));
  std::map<std::string, std::optional<std::string>> found;
  bool parsed = false;
  const std::string reply = gateway.complete(messages);
  try {
    found = parse_matches(reply);
    parsed = true;
  } catch (const ProtocolError&) {
    const auto repair = prompts::with_repair(
        messages, reply, "Reply with the JSON object {\"matches\": [...]} only.");
    try {
      found = parse_matches(gateway.complete(repair));
      parsed = true;
    } catch (const ProtocolError&) {
    }
  }

  std::vector<MatchRecord> records;
  records.reserve(gt_tables.size());
  for (const auto& t : gt_tables) {
    std::optional<std::string> snippet;
    if (parsed) {
      if (auto it = found.find(t.id); it != found.end()) snippet = it->second;
    }
    records.push_back(resolve_match(t.id, parser_id, page_id, snippet, parser_output));
  }
  return records;
}

std::pair<int, bool> parse_judge_score(std::string_view reply) {
  std::string_view line;
  std::size_t end = reply.size();
  while (end > 0) {
    std::size_t start = reply.rfind('\n', end - 1);
    start = start == std::string_view::npos ? 0 : start + 1;
    std::string_view candidate = reply.substr(start, end - start);
    if (collapse_whitespace(candidate).size() > 0) {
      line = candidate;
      break;
    }
    end = start == 0 ? 0 : start - 1;
  }
  static const std::regex kInt(R"([-+]?\d+)");
  std::cmatch m;
  if (!std::regex_search(line.data(), line.data() + line.size(), m, kInt)) {
    throw ProtocolError("no integer on the final line of the judge reply");
  }
  long value = 0;
  try {
    value = std::stol(m.str());
  } catch (const std::out_of_range&) {
    value = m.str().front() == '-' ? -1 : 11;
  }
  const long clamped = std::clamp(value, 0L, 10L);
  return {static_cast<int>(clamped), clamped != value};
}

std::optional<JudgeVerdict> judge_pair(LlmGateway& gateway, const std::string& gt_latex,
                                       const std::string& extracted) {
  if (gt_latex.empty() || extracted.empty()) {
    throw std::invalid_argument("judge_pair needs two non-empty tables");
  }
  const auto messages = prompts::judge_messages(gt_latex, extracted);
  std::string reply = gateway.complete(messages);
  std::pair<int, bool> parsed;
  try {
    parsed = parse_judge_score(reply);
  } catch (const ProtocolError&) {
    reply = gateway.complete(prompts::with_repair(
        messages, reply, "End with a final line containing only an integer from 0 to 10."));
    try {
      parsed = parse_judge_score(reply);
    } catch (const ProtocolError&) {
      return std::nullopt;
    }
  }
  return JudgeVerdict{parsed.first, reply, gateway.config().model, prompts::kJudgeVersion,
                      parsed.second};
}

Complexity complexity_heuristic(std::string_view table_latex) {
  const bool multirow = table_latex.find("\\multirow") != std::string_view::npos;
  const bool multicolumn = table_latex.find("\\multicolumn") != std::string_view::npos;
  std::size_t tabulars = 0;
  for (std::size_t pos = table_latex.find("\\begin{tabular"); pos != std::string_view::npos;
       pos = table_latex.find("\\begin{tabular", pos + 1)) {
    ++tabulars;
  }
  if (tabulars > 1 || (multirow && multicolumn)) return Complexity::kComplex;
  if (multirow || multicolumn) return Complexity::kModerate;
  return Complexity::kSimple;
}

ComplexityResult classify_complexity(LlmGateway* gateway, const std::string& table_latex) {
  if (gateway != nullptr) {
    try {
      const std::string reply = lowercase(gateway->complete(prompts::complexity_messages(table_latex)));
      static const std::regex kWord(R"(\b(simple|moderate|complex)\b)");
      std::smatch m;
      if (std::regex_search(reply, m, kWord)) {
        return {*complexity_from_name(m.str(1)), true};
      }
    } catch (const EndpointError&) {
    } catch (const ProtocolError&) {
    }
  }
  return {complexity_heuristic(table_latex), false};
}

namespace {

constexpr std::pair<HintCategory, std::string_view> kHintNames[] = {
    {HintCategory::kContentError, "content error"},
    {HintCategory::kStructuralReorganization, "structural reorganization"},
    {HintCategory::kSymbolEncoding, "symbol encoding"},
    {HintCategory::kValueEquivalence, "value equivalence"},
    {HintCategory::kMarkupArtifact, "markup artifact"},
};

}  // namespace

std::string_view hint_category_name(HintCategory c) {
  for (const auto& [cat, name] : kHintNames) {
    if (cat == c) return name;
  }
  return "content error";
}

std::optional<HintCategory> hint_category_from_name(std::string_view name) {
  std::string key = lowercase(collapse_whitespace(name));
  std::replace(key.begin(), key.end(), '_', ' ');
  std::replace(key.begin(), key.end(), '-', ' ');
  for (const auto& [cat, n] : kHintNames) {
    if (key == n) return cat;
  }
  return std::nullopt;
}

nlohmann::json to_json(const Hint& h) {
  return {{"category", hint_category_name(h.category)}, {"text", h.text}};
}

std::vector<Hint> parse_hints(std::string_view reply) {
  const nlohmann::json j = extract_json(reply);
  const nlohmann::json* list = &j;
  if (j.is_object()) {
    if (!j.contains("hints")) throw ProtocolError("reply lacks \"hints\"");
    list = &j["hints"];
  }
  if (!list->is_array()) throw ProtocolError("\"hints\" is not a list");
  std::vector<Hint> hints;
  for (const auto& item : *list) {
    if (hints.size() == kMaxHints) break;
    if (!item.is_object()) continue;
    const auto cat = item.contains("category") && item["category"].is_string()
                         ? hint_category_from_name(item["category"].get<std::string>())
                         : std::nullopt;
    if (!cat || !item.contains("text") || !item["text"].is_string()) continue;
    std::string text = collapse_whitespace(item["text"].get<std::string>());
    if (text.empty()) continue;
    hints.push_back({*cat, std::move(text)});
  }
  return hints;
}

std::vector<Hint> generate_hints(LlmGateway& gateway, const std::string& gt_latex,
                                 const std::string& extracted) {
  try {
    return parse_hints(gateway.complete(prompts::hints_messages(gt_latex, extracted)));
  } catch (const EndpointError&) {
    return {};
  } catch (const ProtocolError&) {
    return {};
  }
}

}  // namespace tablebench
