// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "eventqa/oracles.hpp"

#include <string>
#include <string_view>

namespace eventqa {

struct EndpointConfig {
  std::string url;       // e.g. http://127.0.0.1:8000/v1/chat/completions
  std::string model;
  std::string auth_env;  // name of the environment variable holding the token
  int timeout_s = 60;
  int retry_max = 3;     // retries after the first attempt
  int retry_base_ms = 500;
};

struct ChatResult {
  std::string text;
  int attempts = 0;
  double latency_ms = 0;
};

// POSTs an OpenAI-style chat completion and returns choices[0].message.content.
// Transport failures, 429 and 5xx are retried with exponential backoff.
ChatResult chat_complete(const EndpointConfig& cfg, std::string_view system,
                         std::string_view prompt);

class HttpOracle : public Oracle {
 public:
  explicit HttpOracle(EndpointConfig cfg);
  OracleReply invoke(const OracleRequest& request) override;

 private:
  EndpointConfig cfg_;
};

}  // namespace eventqa
