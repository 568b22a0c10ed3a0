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

#ifndef TABLEBENCH_ANNOTATION_SERVICE_H_
#define TABLEBENCH_ANNOTATION_SERVICE_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "tablebench/benchgen.h"
#include "tablebench/harness.h"
#include "tablebench/llm_tasks.h"
#include "tablebench/meta_eval.h"
#include "tablebench/score_record.h"

namespace httplib {
class Server;
}

namespace tablebench {

struct AnnotationPair {
  std::string pair_id;
  std::string gt_latex;
  std::optional<std::string> extracted_text;  // absent: the parser missed the table
  Complexity complexity = Complexity::kSimple;
  std::vector<Hint> hints;

  friend bool operator==(const AnnotationPair&, const AnnotationPair&) = default;
};

nlohmann::json to_json(const AnnotationPair& p);
AnnotationPair annotation_pair_from_json(const nlohmann::json& j);

void save_pairs(const std::filesystem::path& path, std::span<const AnnotationPair> pairs);
std::vector<AnnotationPair> load_pairs(const std::filesystem::path& path);

// Picks up to n pairs, alternating over (parser, complexity) strata so every
// parser and complexity class is represented. Deterministic for a seed.
std::vector<AnnotationPair> sample_annotation_pairs(std::span<const PageGroundTruth> pages,
                                                    const std::map<MatchKey, MatchRecord>& matches,
                                                    std::size_t n, std::uint64_t seed);

// Fills in discrepancy hints for pairs with an extraction.
void attach_hints(std::vector<AnnotationPair>& pairs, LlmGateway& gateway, int workers = 1);

// The full payload of GET /api/pairs/{id}.
nlohmann::json pair_payload(const AnnotationPair& p);

struct ServiceReply {
  int status = 200;
  nlohmann::json body;
};

// Rating backend. Ratings are appended to a JSONL file in the format
// load_ratings_jsonl reads; a resubmission appends a new line (the last one
// wins) and copies the superseded rating to <ratings>.audit.jsonl.
class AnnotationService {
 public:
  AnnotationService(std::vector<AnnotationPair> pairs, std::filesystem::path ratings_path);
  ~AnnotationService();

  ServiceReply next_pair(const std::string& annotator) const;
  ServiceReply get_pair(const std::string& pair_id, const std::string& annotator) const;
  ServiceReply submit(const nlohmann::json& body);
  ServiceReply progress() const;

  // Static files (the rating UI) are served from this directory if set.
  void set_static_dir(std::filesystem::path dir) { static_dir_ = std::move(dir); }

  // Binds and serves until stop(). port 0 picks a free port; the bound port is
  // available from port() once listening.
  void listen(const std::string& host, int port);
  // Binds synchronously and serves on a background thread.
  int start(const std::string& host, int port = 0);
  void stop();
  int port() const { return port_; }

 private:
  void configure(httplib::Server& server);

  std::vector<AnnotationPair> pairs_;
  std::map<std::string, std::size_t> index_;
  std::filesystem::path ratings_path_;
  std::filesystem::path static_dir_;
  mutable std::mutex mu_;
  RatingSet ratings_;
  std::map<std::string, Rating> latest_;  // key: pair_id + '\n' + annotator
  std::unique_ptr<httplib::Server> server_;
  std::unique_ptr<std::thread> thread_;
  int port_ = 0;
};

}  // namespace tablebench

#endif  // TABLEBENCH_ANNOTATION_SERVICE_H_
