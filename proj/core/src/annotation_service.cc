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

#include "tablebench/annotation_service.h"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <set>

#include "httplib.h"
#include "tablebench/errors.h"
#include "tablebench/table_model.h"

namespace tablebench {

namespace fs = std::filesystem;

nlohmann::json to_json(const AnnotationPair& p) {
  nlohmann::json hints = nlohmann::json::array();
  for (const auto& h : p.hints) hints.push_back(to_json(h));
  return {{"pair_id", p.pair_id},
          {"gt_latex", p.gt_latex},
          {"extracted_text", p.extracted_text ? nlohmann::json(*p.extracted_text) : nlohmann::json()},
          {"complexity", complexity_name(p.complexity)},
          {"hints", std::move(hints)}};
}

AnnotationPair annotation_pair_from_json(const nlohmann::json& j) {
  AnnotationPair p;
  p.pair_id = j.at("pair_id").get<std::string>();
  p.gt_latex = j.at("gt_latex").get<std::string>();
  if (j.contains("extracted_text") && !j["extracted_text"].is_null()) {
    p.extracted_text = j["extracted_text"].get<std::string>();
  }
  p.complexity = complexity_from_name(j.value("complexity", "simple")).value_or(Complexity::kSimple);
  for (const auto& h : j.value("hints", nlohmann::json::array())) {
    const auto cat = hint_category_from_name(h.at("category").get<std::string>());
    if (cat) p.hints.push_back({*cat, h.at("text").get<std::string>()});
  }
  return p;
}

void save_pairs(const fs::path& path, std::span<const AnnotationPair> pairs) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& p : pairs) arr.push_back(to_json(p));
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << nlohmann::json{{"pairs", arr}}.dump(2) << '\n';
}

std::vector<AnnotationPair> load_pairs(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw IoError("bad pairs file " + path.string() + ": " + e.what());
  }
  const nlohmann::json& arr = j.is_object() ? j.at("pairs") : j;
  std::vector<AnnotationPair> pairs;
  for (const auto& item : arr) pairs.push_back(annotation_pair_from_json(item));
  return pairs;
}

std::vector<AnnotationPair> sample_annotation_pairs(std::span<const PageGroundTruth> pages,
                                                    const std::map<MatchKey, MatchRecord>& matches,
                                                    std::size_t n, std::uint64_t seed) {
  std::map<std::pair<std::string, std::string>, const ContentBlock*> tables;
  for (const auto& p : pages) {
    for (const auto& b : p.blocks) {
      if (b.kind == BlockKind::kTable) tables[{p.page_id, b.table_id}] = &b;
    }
  }
  std::map<std::pair<std::string, int>, std::vector<AnnotationPair>> strata;
  for (const auto& [key, m] : matches) {
    const auto& [parser, page, table] = key;
    auto it = tables.find({page, table});
    if (it == tables.end()) continue;
    AnnotationPair p{parser + "/" + page + "/" + table, it->second->latex, m.extracted_text,
                     it->second->complexity, {}};
    strata[{parser, static_cast<int>(p.complexity)}].push_back(std::move(p));
  }
  Sampler rng(seed);
  for (auto& [key, v] : strata) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(i) - 1))]);
    }
  }
  std::vector<AnnotationPair> out;
  for (std::size_t round = 0; out.size() < n; ++round) {
    bool any = false;
    for (auto& [key, v] : strata) {
      if (round >= v.size()) continue;
      any = true;
      if (out.size() < n) out.push_back(v[round]);
    }
    if (!any) break;
  }
  std::sort(out.begin(), out.end(),
            [](const AnnotationPair& a, const AnnotationPair& b) { return a.pair_id < b.pair_id; });
  return out;
}

void attach_hints(std::vector<AnnotationPair>& pairs, LlmGateway& gateway, int workers) {
  std::atomic<std::size_t> next{0};
  auto body = [&] {
    for (std::size_t i = next.fetch_add(1); i < pairs.size(); i = next.fetch_add(1)) {
      auto& p = pairs[i];
      if (p.extracted_text && !p.extracted_text->empty()) {
        p.hints = generate_hints(gateway, p.gt_latex, *p.extracted_text);
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < workers; ++t) pool.emplace_back(body);
  body();
  for (auto& t : pool) t.join();
}

namespace {

nlohmann::json grid_or_null(const std::string& text, std::optional<Format> format,
                            std::string& error) {
  try {
    return grid_to_json(parse_auto(text, format));
  } catch (const MalformedTable& e) {
    error = e.what();
    return nullptr;
  }
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string rating_key(const std::string& pair, const std::string& annotator) {
  return pair + '\n' + annotator;
}

void append_line(const fs::path& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw IoError("cannot append to " + path.string());
  out << j.dump() << '\n';
  out.flush();
  if (!out) throw IoError("append failed: " + path.string());
}

ServiceReply error_reply(int status, const std::string& message) {
  return {status, {{"error", message}}};
}

}  // namespace

nlohmann::json pair_payload(const AnnotationPair& p) {
  std::string gt_error;
  nlohmann::json gt = {{"latex", p.gt_latex}};
  gt["grid"] = grid_or_null(p.gt_latex, Format::kLatex, gt_error);
  if (!gt_error.empty()) gt["parse_error"] = gt_error;

  nlohmann::json ex;
  if (p.extracted_text) {
    const Format f = sniff_format(*p.extracted_text);
    std::string ex_error;
    ex = {{"missing", false}, {"text", *p.extracted_text}, {"format", format_name(f)}};
    ex["grid"] = grid_or_null(*p.extracted_text, f, ex_error);
    if (!ex_error.empty()) ex["parse_error"] = ex_error;
  } else {
    ex = {{"missing", true}, {"text", nullptr}, {"format", nullptr}, {"grid", nullptr}};
  }

  std::vector<Hint> hints = p.hints;
  std::stable_sort(hints.begin(), hints.end(),
                   [](const Hint& a, const Hint& b) { return a.category < b.category; });
  nlohmann::json hj = nlohmann::json::array();
  for (const auto& h : hints) hj.push_back(to_json(h));

  return {{"pair_id", p.pair_id},
          {"complexity", complexity_name(p.complexity)},
          {"gt", std::move(gt)},
          {"extracted", std::move(ex)},
          {"hints", std::move(hj)}};
}

AnnotationService::AnnotationService(std::vector<AnnotationPair> pairs, fs::path ratings_path)
    : pairs_(std::move(pairs)), ratings_path_(std::move(ratings_path)) {
  std::sort(pairs_.begin(), pairs_.end(),
            [](const AnnotationPair& a, const AnnotationPair& b) { return a.pair_id < b.pair_id; });
  for (std::size_t i = 0; i < pairs_.size(); ++i) {
    if (!index_.emplace(pairs_[i].pair_id, i).second) {
      throw std::invalid_argument("duplicate pair id " + pairs_[i].pair_id);
    }
  }
  std::error_code ec;
  if (fs::exists(ratings_path_, ec)) {
    std::ifstream in(ratings_path_);
    std::string line;
    while (std::getline(in, line)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      try {
        Rating r = rating_from_json(nlohmann::json::parse(line));
        ratings_.add(r.pair_id, r.annotator_id, r.score);
        latest_[rating_key(r.pair_id, r.annotator_id)] = std::move(r);
      } catch (const std::exception& e) {
        throw IoError("bad ratings line in " + ratings_path_.string() + ": " + e.what());
      }
    }
  } else if (ratings_path_.has_parent_path()) {
    fs::create_directories(ratings_path_.parent_path(), ec);
  }
}

AnnotationService::~AnnotationService() { stop(); }

ServiceReply AnnotationService::next_pair(const std::string& annotator) const {
  if (annotator.empty()) return error_reply(400, "annotator is required");
  if (pairs_.empty()) return error_reply(404, "no pairs loaded");
  std::lock_guard<std::mutex> lock(mu_);
  const AnnotationPair* best = nullptr;
  int best_count = 0;
  std::size_t remaining = 0;
  for (const auto& p : pairs_) {
    const int count = latest_.count(rating_key(p.pair_id, annotator)) > 0 ? 1 : 0;
    if (count == 0) ++remaining;
    if (best == nullptr || count < best_count) {  // pairs_ is sorted by id
      best = &p;
      best_count = count;
    }
  }
  return {200,
          {{"pair_id", best->pair_id}, {"rated_by_you", best_count}, {"remaining", remaining},
           {"done", remaining == 0}}};
}

ServiceReply AnnotationService::get_pair(const std::string& pair_id,
                                         const std::string& annotator) const {
  auto it = index_.find(pair_id);
  if (it == index_.end()) return error_reply(404, "unknown pair " + pair_id);
  nlohmann::json body = pair_payload(pairs_[it->second]);
  body["rating"] = nullptr;
  if (!annotator.empty()) {
    std::lock_guard<std::mutex> lock(mu_);
    auto r = latest_.find(rating_key(pair_id, annotator));
    if (r != latest_.end()) body["rating"] = r->second.score;
  }
  return {200, std::move(body)};
}

ServiceReply AnnotationService::submit(const nlohmann::json& body) {
  if (!body.is_object()) return error_reply(400, "expected a JSON object");
  if (!body.contains("pair_id") || !body["pair_id"].is_string()) {
    return error_reply(400, "pair_id must be a string");
  }
  if (!body.contains("annotator_id") || !body["annotator_id"].is_string() ||
      body["annotator_id"].get<std::string>().empty()) {
    return error_reply(400, "annotator_id must be a non-empty string");
  }
  if (!body.contains("score") || !body["score"].is_number()) {
    return error_reply(400, "score must be a number");
  }
  const double score = body["score"].get<double>();
  if (score != static_cast<double>(static_cast<long long>(score)) || score < 0.0 || score > 10.0) {
    return error_reply(400, "score must be an integer from 0 to 10");
  }
  const std::string pair_id = body["pair_id"].get<std::string>();
  if (index_.count(pair_id) == 0) return error_reply(404, "unknown pair " + pair_id);

  Rating r{pair_id, body["annotator_id"].get<std::string>(), score, utc_timestamp()};
  std::lock_guard<std::mutex> lock(mu_);
  const std::string key = rating_key(r.pair_id, r.annotator_id);
  auto prev = latest_.find(key);
  const bool overwrote = prev != latest_.end();
  if (overwrote) {
    nlohmann::json audit = to_json(prev->second);
    audit["superseded_at"] = r.timestamp;
    audit["superseded_by"] = r.score;
    append_line(fs::path(ratings_path_.string() + ".audit.jsonl"), audit);
  }
  append_line(ratings_path_, to_json(r));
  ratings_.add(r.pair_id, r.annotator_id, r.score);
  latest_[key] = r;
  return {200, {{"status", "ok"}, {"overwrote", overwrote}}};
}

ServiceReply AnnotationService::progress() const {
  std::lock_guard<std::mutex> lock(mu_);
  nlohmann::json per_annotator = nlohmann::json::object();
  for (const auto& [key, r] : latest_) {
    per_annotator[r.annotator_id] = per_annotator.value(r.annotator_id, 0) + 1;
  }
  std::size_t rated_pairs = 0;
  for (const auto& p : pairs_) {
    if (ratings_.by_pair().count(p.pair_id) > 0) ++rated_pairs;
  }
  return {200,
          {{"pairs", pairs_.size()},
           {"ratings", latest_.size()},
           {"rated_pairs", rated_pairs},
           {"annotators", std::move(per_annotator)}}};
}

void AnnotationService::configure(httplib::Server& server) {
  const auto send = [](httplib::Response& res, const ServiceReply& reply) {
    res.status = reply.status;
    res.set_content(reply.body.dump(), "application/json");
  };
  server.Get("/api/pairs/next", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, next_pair(req.get_param_value("annotator")));
  });
  server.Get(R"(/api/pairs/(.+))", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, get_pair(req.matches[1].str(), req.get_param_value("annotator")));
  });
  server.Post("/api/ratings", [this, send](const httplib::Request& req, httplib::Response& res) {
    nlohmann::json body;
    try {
      body = nlohmann::json::parse(req.body);
    } catch (const nlohmann::json::exception&) {
      send(res, error_reply(400, "body is not JSON"));
      return;
    }
    try {
      send(res, submit(body));
    } catch (const IoError& e) {
      send(res, error_reply(500, e.what()));
    }
  });
  server.Get("/api/progress", [this, send](const httplib::Request&, httplib::Response& res) {
    send(res, progress());
  });
  if (!static_dir_.empty() && !server.set_mount_point("/", static_dir_.string())) {
    throw IoError("static directory not found: " + static_dir_.string());
  }
}

void AnnotationService::listen(const std::string& host, int port) {
  server_ = std::make_unique<httplib::Server>();
  configure(*server_);
  port_ = port == 0 ? server_->bind_to_any_port(host) : (server_->bind_to_port(host, port) ? port : -1);
  if (port_ < 0) throw IoError("cannot bind " + host + ":" + std::to_string(port));
  server_->listen_after_bind();
}

int AnnotationService::start(const std::string& host, int port) {
  server_ = std::make_unique<httplib::Server>();
  configure(*server_);
  port_ = port == 0 ? server_->bind_to_any_port(host) : (server_->bind_to_port(host, port) ? port : -1);
  if (port_ < 0) throw IoError("cannot bind " + host + ":" + std::to_string(port));
  thread_ = std::make_unique<std::thread>([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return port_;
}

void AnnotationService::stop() {
  if (server_) server_->stop();
  if (thread_ && thread_->joinable()) thread_->join();
  thread_.reset();
}

}  // namespace tablebench
