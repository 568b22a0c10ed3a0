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

#include "tablebench/llm_gateway.h"

#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "httplib.h"
#include "tablebench/errors.h"

namespace tablebench {

void LlmEndpointConfig::validate() const {
  if (max_concurrent < 1) throw std::invalid_argument("max_concurrent must be >= 1");
  if (max_concurrent > 1024) throw std::invalid_argument("max_concurrent must be <= 1024");
  if (!(timeout_seconds > 0.0)) throw std::invalid_argument("timeout must be > 0");
  if (retry_budget < 0) throw std::invalid_argument("retry budget must be >= 0");
  if (model.empty()) throw std::invalid_argument("model identifier is required");
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

namespace {

std::string sanitize_model(const std::string& model) {
  std::string out;
  for (char c : model) {
    const bool safe = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
    out.push_back(safe ? c : '_');
  }
  return out.empty() ? "_" : out;
}

class HttpTransport : public ChatTransport {
 public:
  explicit HttpTransport(const LlmEndpointConfig& cfg) {
    static const std::regex kUrl(R"(^(https?://[^/]+)(/.*)?$)");
    std::smatch m;
    if (!std::regex_match(cfg.base_url, m, kUrl)) {
      throw std::invalid_argument("bad base URL: " + cfg.base_url);
    }
    host_ = m[1].str();
    prefix_ = m[2].matched ? m[2].str() : "";
    while (!prefix_.empty() && prefix_.back() == '/') prefix_.pop_back();
    timeout_ = cfg.timeout_seconds;
  }

  HttpResponse post(const std::string& path, const std::string& body,
                    const std::multimap<std::string, std::string>& headers) override {
    httplib::Client client(host_);
    const auto secs = static_cast<time_t>(timeout_);
    const auto usecs = static_cast<time_t>((timeout_ - static_cast<double>(secs)) * 1e6);
    client.set_connection_timeout(secs, usecs);
    client.set_read_timeout(secs, usecs);
    client.set_write_timeout(secs, usecs);
    httplib::Headers h(headers.begin(), headers.end());
    auto res = client.Post(prefix_ + path, h, body, "application/json");
    if (!res) {
      throw EndpointError("request to " + host_ + prefix_ + path + " failed: " +
                          httplib::to_string(res.error()));
    }
    return HttpResponse{res->status, res->body};
  }

 private:
  std::string host_;
  std::string prefix_;
  double timeout_ = 120.0;
};

}  // namespace

std::unique_ptr<ChatTransport> make_http_transport(const LlmEndpointConfig& cfg) {
  return std::make_unique<HttpTransport>(cfg);
}

std::filesystem::path ResponseCache::path_for(const std::string& model, const std::string& key) const {
  return dir_ / sanitize_model(model) / (key + ".json");
}

std::optional<nlohmann::json> ResponseCache::load(const std::string& model,
                                                  const std::string& key) const {
  const auto path = path_for(model, key);
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception&) {
    return std::nullopt;  // torn or foreign file: treat as a miss
  }
}

void ResponseCache::store(const std::string& model, const std::string& key,
                          const nlohmann::json& entry) const {
  const auto path = path_for(model, key);
  std::error_code ec;
  std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create cache directory " + path.parent_path().string());
  std::ostringstream tid;
  tid << std::this_thread::get_id();
  const auto tmp = path.string() + ".tmp." + tid.str();
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write cache file " + tmp);
    out << entry.dump(2) << '\n';
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move cache file into place: " + path.string());
}

LlmGateway::LlmGateway(LlmEndpointConfig cfg, std::unique_ptr<ChatTransport> transport)
    : cfg_(std::move(cfg)),
      transport_(std::move(transport)),
      cache_(cfg_.cache_dir),
      slots_(cfg_.max_concurrent) {
  cfg_.validate();
  if (!transport_) transport_ = make_http_transport(cfg_);
}

nlohmann::json LlmGateway::request_body(const std::vector<ChatMessage>& messages) const {
  nlohmann::json msgs = nlohmann::json::array();
  for (const auto& m : messages) msgs.push_back({{"role", m.role}, {"content", m.content}});
  return {{"model", cfg_.model}, {"messages", std::move(msgs)}, {"temperature", 0}};
}

std::string LlmGateway::cache_key(const std::vector<ChatMessage>& messages) const {
  return sha256_hex(request_body(messages).dump());
}

std::shared_ptr<std::mutex> LlmGateway::key_mutex(const std::string& key) {
  std::lock_guard<std::mutex> lock(key_mutexes_guard_);
  auto& slot = key_mutexes_[key];
  if (!slot) slot = std::make_shared<std::mutex>();
  return slot;
}

std::string LlmGateway::send(const std::string& body) {
  std::multimap<std::string, std::string> headers;
  if (const char* token = std::getenv(cfg_.auth_env.c_str()); token != nullptr && *token != '\0') {
    headers.emplace("Authorization", std::string("Bearer ") + token);
  }
  std::string last_error;
  for (int attempt = 0; attempt <= cfg_.retry_budget; ++attempt) {
    if (attempt > 0) {
      const int delay = cfg_.retry_backoff_ms << std::min(attempt - 1, 6);
      std::this_thread::sleep_for(std::chrono::milliseconds(delay));
    }
    HttpResponse res;
    {
      slots_.acquire();
      ++http_requests_;
      try {
        res = transport_->post("/chat/completions", body, headers);
      } catch (const EndpointError& e) {
        slots_.release();
        last_error = e.what();
        continue;
      } catch (...) {
        slots_.release();
        throw;
      }
      slots_.release();
    }
    if (res.status == 200) return res.body;
    last_error = "HTTP " + std::to_string(res.status) + ": " + res.body.substr(0, 200);
    const bool retryable = res.status == 408 || res.status == 429 || res.status >= 500;
    if (!retryable) break;
  }
  throw EndpointError(last_error);
}

std::string LlmGateway::complete(const std::vector<ChatMessage>& messages) {
  const nlohmann::json request = request_body(messages);
  const std::string key = sha256_hex(request.dump());
  const auto guard = key_mutex(key);
  std::lock_guard<std::mutex> lock(*guard);

  if (auto cached = cache_.load(cfg_.model, key); cached && cached->contains("content")) {
    ++cache_hits_;
    return (*cached)["content"].get<std::string>();
  }

  const std::string body = send(request.dump());
  nlohmann::json response;
  std::string content;
  try {
    response = nlohmann::json::parse(body);
    content = response.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ProtocolError(std::string("not a chat completion: ") + e.what());
  }
  cache_.store(cfg_.model, key,
               {{"request", request}, {"response", response}, {"content", content}});
  return content;
}

}  // namespace tablebench
