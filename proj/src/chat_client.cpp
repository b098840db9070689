// SPDX-License-Identifier: Apache-2.0
#include "eventqa/chat_client.hpp"

#include "eventqa/error.hpp"
#include "eventqa/text_util.hpp"

#include <httplib.h>

#include <chrono>
#include <cstdlib>
#include <thread>

namespace eventqa {

namespace {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

SplitUrl split_url(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos)
    throw Error(ErrorCode::ConfigInvalid, "endpoint.url needs a scheme: " + url);
  auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

bool retryable(int status) { return status == 429 || status >= 500; }

}  // namespace

ChatResult chat_complete(const EndpointConfig& cfg, std::string_view system,
                         std::string_view prompt) {
  if (cfg.url.empty()) throw Error(ErrorCode::ConfigInvalid, "endpoint.url is not set");
  if (cfg.model.empty()) throw Error(ErrorCode::ConfigInvalid, "endpoint.model is not set");
  auto [origin, path] = split_url(cfg.url);

  httplib::Headers headers;
  if (!cfg.auth_env.empty()) {
    const char* token = std::getenv(cfg.auth_env.c_str());
    if (!token || !*token)
      throw Error(ErrorCode::ConfigInvalid, "environment variable " + cfg.auth_env + " is empty");
    headers.emplace("Authorization", std::string("Bearer ") + token);
  }

  json messages = json::array();
  if (!system.empty()) messages.push_back({{"role", "system"}, {"content", std::string(system)}});
  messages.push_back({{"role", "user"}, {"content", std::string(prompt)}});
  json body{{"model", cfg.model}, {"messages", messages}, {"temperature", 0}};
  const std::string payload = body.dump();

  httplib::Client client(origin);
  client.set_connection_timeout(cfg.timeout_s, 0);
  client.set_read_timeout(cfg.timeout_s, 0);
  client.set_write_timeout(cfg.timeout_s, 0);

  const auto started = std::chrono::steady_clock::now();
  std::string last_failure;
  int last_status = 0;
  const int max_attempts = std::max(0, cfg.retry_max) + 1;
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    if (attempt > 1) {
      auto delay = std::chrono::milliseconds(cfg.retry_base_ms * (1LL << std::min(attempt - 2, 16)));
      std::this_thread::sleep_for(delay);
    }
    auto res = client.Post(path, headers, payload, "application/json");
    if (!res) {
      last_status = 0;
      last_failure = httplib::to_string(res.error());
      continue;
    }
    if (res->status < 200 || res->status >= 300) {
      last_status = res->status;
      last_failure = "HTTP " + std::to_string(res->status);
      if (retryable(res->status)) continue;
      throw Error(ErrorCode::NonSuccessStatus, last_failure + ": " + truncate_utf8(res->body, 200));
    }

    std::string text;
    try {
      auto parsed = json::parse(res->body);
      text = parsed.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception& e) {
      throw Error(ErrorCode::MalformedResponseBody, e.what());
    }
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
                    .count();
    return ChatResult{std::move(text), attempt, ms};
  }
  if (last_status != 0)
    throw Error(ErrorCode::NonSuccessStatus,
                last_failure + " after " + std::to_string(max_attempts) + " attempts");
  throw Error(ErrorCode::TransportError,
              last_failure + " after " + std::to_string(max_attempts) + " attempts");
}

HttpOracle::HttpOracle(EndpointConfig cfg) : cfg_(std::move(cfg)) {}

OracleReply HttpOracle::invoke(const OracleRequest& request) {
  auto result = chat_complete(cfg_, request.system, request.prompt);
  return OracleReply{std::move(result.text), result.latency_ms, result.attempts};
}

}  // namespace eventqa
