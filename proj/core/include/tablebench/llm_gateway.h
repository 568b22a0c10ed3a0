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

#ifndef TABLEBENCH_LLM_GATEWAY_H_
#define TABLEBENCH_LLM_GATEWAY_H_

#include <atomic>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <semaphore>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"

namespace tablebench {

struct LlmEndpointConfig {
  // Chat-completions base; requests go to base_url + "/chat/completions".
  std::string base_url = "https://api.openai.com/v1";
  std::string model;
  // Name of the environment variable holding the bearer token.
  std::string auth_env = "TABLEBENCH_API_KEY";
  int max_concurrent = 4;
  int retry_budget = 3;
  double timeout_seconds = 120.0;
  std::filesystem::path cache_dir = "cache";
  // Base delay between retries; doubles per attempt.
  int retry_backoff_ms = 500;

  // Throws std::invalid_argument when an invariant is violated.
  void validate() const;
};

struct ChatMessage {
  std::string role;
  std::string content;
};

struct HttpResponse {
  int status = 0;
  std::string body;
};

// Sends one HTTP POST. Implementations throw EndpointError when no response
// arrives at all (connection refused, timeout).
class ChatTransport {
 public:
  virtual ~ChatTransport() = default;
  virtual HttpResponse post(const std::string& path, const std::string& body,
                            const std::multimap<std::string, std::string>& headers) = 0;
};

std::unique_ptr<ChatTransport> make_http_transport(const LlmEndpointConfig& cfg);

std::string sha256_hex(std::string_view data);

// Content-addressed transcript store: <dir>/<model>/<sha256(prompt)>.json.
class ResponseCache {
 public:
  explicit ResponseCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  std::filesystem::path path_for(const std::string& model, const std::string& key) const;
  std::optional<nlohmann::json> load(const std::string& model, const std::string& key) const;
  // Written to a temporary file and renamed into place.
  void store(const std::string& model, const std::string& key, const nlohmann::json& entry) const;

 private:
  std::filesystem::path dir_;
};

// Chat-completion client with a mandatory response cache, bounded
// concurrency and retries. Safe for concurrent use.
class LlmGateway {
 public:
  explicit LlmGateway(LlmEndpointConfig cfg, std::unique_ptr<ChatTransport> transport = nullptr);

  // Returns the assistant message text. Cached calls never touch the network.
  // Throws EndpointError after the retry budget is spent and ProtocolError
  // when the response body is not a chat completion.
  std::string complete(const std::vector<ChatMessage>& messages);

  // Canonical request body (model, messages, temperature 0).
  nlohmann::json request_body(const std::vector<ChatMessage>& messages) const;
  std::string cache_key(const std::vector<ChatMessage>& messages) const;

  const LlmEndpointConfig& config() const { return cfg_; }
  std::size_t http_requests() const { return http_requests_.load(); }
  std::size_t cache_hits() const { return cache_hits_.load(); }

 private:
  std::shared_ptr<std::mutex> key_mutex(const std::string& key);
  std::string send(const std::string& body);

  LlmEndpointConfig cfg_;
  std::unique_ptr<ChatTransport> transport_;
  ResponseCache cache_;
  std::counting_semaphore<1024> slots_;
  std::mutex key_mutexes_guard_;
  std::unordered_map<std::string, std::shared_ptr<std::mutex>> key_mutexes_;
  std::atomic<std::size_t> http_requests_{0};
  std::atomic<std::size_t> cache_hits_{0};
};

}  // namespace tablebench

#endif  // TABLEBENCH_LLM_GATEWAY_H_
