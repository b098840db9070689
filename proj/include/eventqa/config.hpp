// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "eventqa/chat_client.hpp"
#include "eventqa/run_context.hpp"

#include <string>
#include <string_view>

namespace eventqa {

struct PipelineConfig {
  Budgets budgets;
  std::string cache_dir;  // empty keeps the cache in memory only
  EndpointConfig endpoint;
  SeedPolicy seeds = SeedPolicy::Anchors;
  int retry_ceiling = 4;  // validator warning threshold for ensure retries
};

// `key = value` lines; `#` starts a comment; a `[section]` line prefixes the
// keys below it ("[budgets]" then "graph_retries = 2"). Unknown keys and bad
// values throw ConfigInvalid.
PipelineConfig parse_config(std::string_view text);
PipelineConfig load_config(const std::string& path);

}  // namespace eventqa
