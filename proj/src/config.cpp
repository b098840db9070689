// SPDX-License-Identifier: Apache-2.0
#include "eventqa/config.hpp"

#include "eventqa/error.hpp"
#include "eventqa/text_util.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace eventqa {

namespace {

int to_int(const std::string& key, const std::string& value, int line) {
  int out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw Error(ErrorCode::ConfigInvalid,
                "line " + std::to_string(line) + ": " + key + " needs an integer, got '" + value + "'");
  return out;
}

}  // namespace

PipelineConfig parse_config(std::string_view text) {
  PipelineConfig cfg;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::ConfigInvalid, "line " + std::to_string(line_no) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    if (!section.empty()) key = section + "." + key;

    auto as_int = [&] { return to_int(key, value, line_no); };
    if (key == "budgets.graph_retries") cfg.budgets.graph_retries = as_int();
    else if (key == "budgets.answer_retries") cfg.budgets.answer_retries = as_int();
    else if (key == "budgets.multimodal_hops") cfg.budgets.multimodal_hops = as_int();
    else if (key == "budgets.call_ceiling") cfg.budgets.call_ceiling = as_int();
    else if (key == "cache.dir") cfg.cache_dir = value;
    else if (key == "endpoint.url") cfg.endpoint.url = value;
    else if (key == "endpoint.model") cfg.endpoint.model = value;
    else if (key == "endpoint.auth_env") cfg.endpoint.auth_env = value;
    else if (key == "endpoint.timeout_s") cfg.endpoint.timeout_s = as_int();
    else if (key == "retry.max") cfg.endpoint.retry_max = as_int();
    else if (key == "retry.base_ms") cfg.endpoint.retry_base_ms = as_int();
    else if (key == "validate.retry_ceiling") cfg.retry_ceiling = as_int();
    else if (key == "multimodal.seeds") {
      if (value == "anchors") cfg.seeds = SeedPolicy::Anchors;
      else if (value == "parents") cfg.seeds = SeedPolicy::Parents;
      else throw Error(ErrorCode::ConfigInvalid, "multimodal.seeds must be anchors or parents");
    } else {
      throw Error(ErrorCode::ConfigInvalid, "line " + std::to_string(line_no) + ": unknown key " + key);
    }
  }
  cfg.budgets.validate();
  if (cfg.retry_ceiling < 1) throw Error(ErrorCode::ConfigInvalid, "validate.retry_ceiling must be >= 1");
  if (cfg.endpoint.retry_max < 0 || cfg.endpoint.retry_base_ms < 0 || cfg.endpoint.timeout_s < 1)
    throw Error(ErrorCode::ConfigInvalid, "retry and timeout settings must be non-negative");
  return cfg;
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace eventqa
