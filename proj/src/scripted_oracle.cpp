// SPDX-License-Identifier: Apache-2.0
#include "eventqa/scripted_oracle.hpp"

#include "eventqa/error.hpp"

#include <fstream>
#include <sstream>

namespace eventqa {

namespace {

std::string field_value(std::string_view field, std::string_view prompt, std::string_view system,
                        const json& args) {
  if (field == "prompt") return std::string(prompt);
  if (field == "system") return std::string(system);
  if (field.substr(0, 5) == "args.") {
    std::string key(field.substr(5));
    if (!args.is_object() || !args.contains(key)) return {};
    const auto& v = args.at(key);
    return v.is_string() ? v.get<std::string>() : v.dump();
  }
  throw Error(ErrorCode::InvalidArgument, "unknown match field " + std::string(field));
}

// Tail of a long prompt; the distinguishing text is usually at the end.
std::string prompt_tail(std::string_view prompt) {
  if (prompt.size() <= 200) return std::string(prompt);
  std::size_t start = prompt.size() - 200;
  while (start < prompt.size() && (static_cast<unsigned char>(prompt[start]) & 0xC0) == 0x80) ++start;
  return "..." + std::string(prompt.substr(start));
}

}  // namespace

ScenarioScript::ScenarioScript(const json& rules) {
  if (!rules.is_array()) throw Error(ErrorCode::InvalidArgument, "scenario must be a JSON array");
  for (const auto& r : rules) {
    Rule rule;
    auto where = "rule " + std::to_string(rules_.size());
    if (!r.is_object()) throw Error(ErrorCode::InvalidArgument, where + " is not an object");
    if (r.contains("oracle") && r["oracle"] != "*") {
      rule.oracle = parse_oracle_id(r["oracle"].get<std::string>());
      if (!rule.oracle)
        throw Error(ErrorCode::InvalidArgument, where + ": unknown oracle " + r["oracle"].dump());
    }
    if (r.contains("match")) {
      const auto& m = r["match"];
      if (m.contains("contains")) {
        const auto& c = m["contains"];
        if (c.is_string()) {
          rule.contains.push_back(c.get<std::string>());
        } else {
          for (const auto& s : c) rule.contains.push_back(s.get<std::string>());
        }
      }
      if (m.contains("equals")) rule.equals = m["equals"].get<std::string>();
      if (m.contains("regex")) rule.regex.emplace(m["regex"].get<std::string>());
      if (m.contains("field")) rule.field = m["field"].get<std::string>();
    }
    if (r.value("fail", false)) {
      rule.fail = true;
    } else if (r.contains("responses")) {
      for (const auto& s : r["responses"]) rule.responses.push_back(s.get<std::string>());
      if (rule.responses.empty())
        throw Error(ErrorCode::InvalidArgument, where + ": empty responses");
    } else if (r.contains("response")) {
      rule.responses.push_back(r["response"].get<std::string>());
    } else {
      throw Error(ErrorCode::InvalidArgument, where + ": needs response, responses or fail");
    }
    rules_.push_back(std::move(rule));
  }
}

std::shared_ptr<ScenarioScript> ScenarioScript::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  json rules;
  try {
    rules = json::parse(ss.str());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, path + ": " + e.what());
  }
  return std::make_shared<ScenarioScript>(rules);
}

std::string ScenarioScript::lookup(OracleId oracle, std::string_view prompt, const json& args,
                                   std::string_view system) {
  std::lock_guard lock(mu_);
  for (auto& rule : rules_) {
    if (rule.oracle && *rule.oracle != oracle) continue;
    std::string value = field_value(rule.field, prompt, system, args);
    bool ok = true;
    for (const auto& needle : rule.contains) ok = ok && value.find(needle) != std::string::npos;
    if (rule.equals) ok = ok && value == *rule.equals;
    if (rule.regex) ok = ok && std::regex_search(value, *rule.regex);
    if (!ok) continue;

    if (rule.fail) {
      log_.push_back({oracle, std::string(prompt), args, "<fail>"});
      throw Error(ErrorCode::OracleFailure, "scripted failure for " + std::string(to_string(oracle)));
    }
    std::string response = rule.responses[std::min(rule.next, rule.responses.size() - 1)];
    ++rule.next;
    log_.push_back({oracle, std::string(prompt), args, response});
    return response;
  }
  throw Error(ErrorCode::UnmatchedInvocation,
              std::string(to_string(oracle)) + " prompt '" + prompt_tail(prompt) + "'");
}

OracleReply ScenarioScript::invoke(const OracleRequest& request) {
  return OracleReply{lookup(request.oracle, request.prompt, request.args, request.system), 0, 1};
}

std::vector<CallRecord> ScenarioScript::call_log() const {
  std::lock_guard lock(mu_);
  return log_;
}

std::size_t ScenarioScript::count(OracleId oracle) const {
  std::lock_guard lock(mu_);
  std::size_t n = 0;
  for (const auto& c : log_) n += c.oracle == oracle;
  return n;
}

void ScenarioScript::reset() {
  std::lock_guard lock(mu_);
  log_.clear();
  for (auto& rule : rules_) rule.next = 0;
}

}  // namespace eventqa
