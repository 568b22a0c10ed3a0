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

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <future>
#include <vector>

#include "mock_llm.h"
#include "tablebench/errors.h"
#include "tablebench/llm_gateway.h"
#include "tablebench/llm_tasks.h"
#include "test_util.h"

namespace tablebench {
namespace {

// The extracted side carries "REPLY:<text>" and the mock answers with <text>.
tbtest::MockReply echo_reply(const nlohmann::json& request) {
  const std::string user = tbtest::last_user_message(request);
  const auto at = user.find("REPLY:");
  if (at == std::string::npos) return {200, "Rationale.\n5"};
  const auto end = user.find('\n', at);
  return {200, "Rationale.\n" + user.substr(at + 6, end - at - 6)};
}

std::size_t count_files(const std::filesystem::path& dir) {
  std::size_t n = 0;
  if (!std::filesystem::exists(dir)) return 0;
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir)) n += e.is_regular_file();
  return n;
}

TEST(Sha256, KnownVector) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(EndpointConfig, Validation) {
  LlmEndpointConfig cfg;
  cfg.model = "m";
  EXPECT_NO_THROW(cfg.validate());
  cfg.max_concurrent = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.max_concurrent = 1;
  cfg.timeout_seconds = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.timeout_seconds = 1;
  cfg.model.clear();
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(Gateway, CacheIdempotence) {
  tbtest::MockLlmServer server(echo_reply);
  tbtest::TempDir cache;
  std::vector<int> first;
  {
    LlmGateway gw(server.config(cache.path()));
    for (int i = 0; i <= 10; ++i) {
      first.push_back(judge_pair(gw, "gt " + std::to_string(i), "REPLY:" + std::to_string(i))->score);
    }
    EXPECT_EQ(gw.http_requests(), 11u);
  }
  const int requests_after_first = server.requests();
  std::map<std::filesystem::path, std::string> snapshot;
  for (const auto& e : std::filesystem::recursive_directory_iterator(cache.path())) {
    if (e.is_regular_file()) snapshot[e.path()] = tbtest::read_file(e.path());
  }
  ASSERT_EQ(snapshot.size(), 11u);

  LlmGateway again(server.config(cache.path()));
  for (int i = 0; i <= 10; ++i) {
    const auto v = judge_pair(again, "gt " + std::to_string(i), "REPLY:" + std::to_string(i));
    ASSERT_TRUE(v);
    EXPECT_EQ(v->score, first[i]);
    EXPECT_EQ(v->score, i);
  }
  EXPECT_EQ(again.http_requests(), 0u);
  EXPECT_EQ(again.cache_hits(), 11u);
  EXPECT_EQ(server.requests(), requests_after_first);
  for (const auto& [path, bytes] : snapshot) EXPECT_EQ(tbtest::read_file(path), bytes);
}

TEST(Gateway, CacheLayout) {
  tbtest::MockLlmServer server(echo_reply);
  tbtest::TempDir cache;
  LlmGateway gw(server.config(cache.path(), "vendor/model:1"));
  const std::vector<ChatMessage> msgs = {{"user", "hello"}};
  EXPECT_EQ(gw.complete(msgs), "Rationale.\n5");
  const std::string key = gw.cache_key(msgs);
  EXPECT_EQ(key, sha256_hex(gw.request_body(msgs).dump()));
  const auto path = cache.path() / "vendor_model_1" / (key + ".json");
  ASSERT_TRUE(std::filesystem::exists(path));
  const auto entry = nlohmann::json::parse(tbtest::read_file(path));
  EXPECT_EQ(entry["request"]["temperature"], 0);
  EXPECT_EQ(entry["request"]["model"], "vendor/model:1");
  EXPECT_EQ(entry["content"], "Rationale.\n5");
  EXPECT_EQ(count_files(cache.path()), 1u);
}

TEST(Gateway, ScoreClamping) {
  tbtest::MockLlmServer server(echo_reply);
  tbtest::TempDir cache;
  LlmGateway gw(server.config(cache.path()));
  const auto clamped = judge_pair(gw, "gt", "REPLY:score: 11");
  ASSERT_TRUE(clamped);
  EXPECT_EQ(clamped->score, 10);
  EXPECT_TRUE(clamped->clamped);
  EXPECT_EQ(clamped->prompt_version, prompts::kJudgeVersion);
  EXPECT_EQ(clamped->judge_model, "mock-model");
  const auto plain = judge_pair(gw, "gt", "REPLY:7");
  ASSERT_TRUE(plain);
  EXPECT_EQ(plain->score, 7);
  EXPECT_FALSE(plain->clamped);
}

TEST(Gateway, UnparseableJudgeIsAbsentAfterRepair) {
  tbtest::MockLlmServer server([](const nlohmann::json&) { return tbtest::MockReply{200, "no number here"}; });
  tbtest::TempDir cache;
  LlmGateway gw(server.config(cache.path()));
  EXPECT_FALSE(judge_pair(gw, "gt", "x").has_value());
  EXPECT_EQ(server.requests(), 2);
}

TEST(Gateway, ConcurrencyCap) {
  tbtest::MockLlmServer server(echo_reply, std::chrono::milliseconds(25));
  tbtest::TempDir cache;
  auto cfg = server.config(cache.path());
  cfg.max_concurrent = 3;
  LlmGateway gw(cfg);
  std::vector<std::future<std::optional<JudgeVerdict>>> futures;
  for (int i = 0; i < 50; ++i) {
    futures.push_back(std::async(std::launch::async, [&gw, i] {
      return judge_pair(gw, "gt " + std::to_string(i), "REPLY:" + std::to_string(i % 11));
    }));
  }
  for (int i = 0; i < 50; ++i) {
    const auto v = futures[i].get();
    ASSERT_TRUE(v);
    EXPECT_EQ(v->score, i % 11);
  }
  EXPECT_EQ(server.requests(), 50);
  EXPECT_LE(server.peak_concurrency(), 3);
  EXPECT_GE(server.peak_concurrency(), 1);
}

TEST(Gateway, RetriesServerErrors) {
  std::atomic<int> calls{0};
  tbtest::MockLlmServer server([&calls](const nlohmann::json&) {
    return ++calls <= 2 ? tbtest::MockReply{503, ""} : tbtest::MockReply{200, "ok"};
  });
  tbtest::TempDir cache;
  LlmGateway gw(server.config(cache.path()));
  EXPECT_EQ(gw.complete({{"user", "x"}}), "ok");
  EXPECT_EQ(server.requests(), 3);
}

TEST(Gateway, RetryBudgetExhausted) {
  tbtest::MockLlmServer server([](const nlohmann::json&) { return tbtest::MockReply{429, ""}; });
  tbtest::TempDir cache;
  auto cfg = server.config(cache.path());
  cfg.retry_budget = 2;
  LlmGateway gw(cfg);
  EXPECT_THROW(gw.complete({{"user", "x"}}), EndpointError);
  EXPECT_EQ(server.requests(), 3);
  EXPECT_EQ(count_files(cache.path()), 0u);
}

TEST(Gateway, AuthFailureIsNotRetried) {
  tbtest::MockLlmServer server([](const nlohmann::json&) { return tbtest::MockReply{401, ""}; });
  tbtest::TempDir cache;
  LlmGateway gw(server.config(cache.path()));
  EXPECT_THROW(gw.complete({{"user", "x"}}), EndpointError);
  EXPECT_EQ(server.requests(), 1);
}

TEST(Gateway, BearerTokenFromEnvironment) {
  tbtest::MockLlmServer server(echo_reply);
  tbtest::TempDir cache;
  ::setenv("TABLEBENCH_TEST_TOKEN", "sekrit", 1);
  LlmGateway gw(server.config(cache.path()));
  gw.complete({{"user", "x"}});
  ::unsetenv("TABLEBENCH_TEST_TOKEN");
  ASSERT_EQ(server.auth_headers().size(), 1u);
  EXPECT_EQ(server.auth_headers()[0], "Bearer sekrit");
}

TEST(Gateway, MalformedBodyIsProtocolError) {
  tbtest::MockLlmServer server([](const nlohmann::json&) { return tbtest::MockReply{200, "", "{\"nope\":1}"}; });
  tbtest::TempDir cache;
  LlmGateway gw(server.config(cache.path()));
  EXPECT_THROW(gw.complete({{"user", "x"}}), ProtocolError);
  EXPECT_EQ(count_files(cache.path()), 0u);
}

TEST(Gateway, UnreachableEndpoint) {
  tbtest::TempDir cache;
  LlmEndpointConfig cfg;
  cfg.model = "m";
  cfg.base_url = "http://127.0.0.1:1/v1";
  cfg.cache_dir = cache.path();
  cfg.retry_budget = 1;
  cfg.retry_backoff_ms = 1;
  cfg.timeout_seconds = 2;
  LlmGateway gw(cfg);
  EXPECT_THROW(gw.complete({{"user", "x"}}), EndpointError);
  EXPECT_EQ(gw.http_requests(), 2u);
}

TEST(JudgeParse, Rules) {
  EXPECT_EQ(parse_judge_score("7"), std::make_pair(7, false));
  EXPECT_EQ(parse_judge_score("Looks good.\n\nScore: 9/10\n"), std::make_pair(9, false));
  EXPECT_EQ(parse_judge_score("score: 11"), std::make_pair(10, true));
  EXPECT_THROW(parse_judge_score("The answer is 8.\nno digits"), ProtocolError);
  EXPECT_THROW(parse_judge_score(""), ProtocolError);
}

}  // namespace
}  // namespace tablebench
