// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "eventqa/oracles.hpp"

#include <mutex>
#include <regex>
#include <vector>

namespace eventqa {

struct CallRecord {
  OracleId oracle;
  std::string prompt;
  json args;
  std::string response;
};

// Deterministic test double. A script is a JSON array of rules:
//   {"oracle": "reasoner",
//    "match": {"contains": "x" | ["x", "y"], "equals": "...", "regex": "...",
//              "field": "prompt" | "system" | "args.<key>"},
//    "response": "..." | "responses": ["first", "second", ...] | "fail": true}
// All matcher keys present must hold. The first matching rule wins; a
// "responses" list is consumed in order and then repeats its last entry.
class ScenarioScript : public Oracle {
 public:
  explicit ScenarioScript(const json& rules);
  static std::shared_ptr<ScenarioScript> from_file(const std::string& path);

  OracleReply invoke(const OracleRequest& request) override;

  // Throws UnmatchedInvocation when no rule applies.
  std::string lookup(OracleId oracle, std::string_view prompt, const json& args,
                     std::string_view system = {});

  std::vector<CallRecord> call_log() const;
  std::size_t count(OracleId oracle) const;
  // Clears the log and rewinds every response sequence.
  void reset();

 private:
  struct Rule {
    std::optional<OracleId> oracle;  // none matches any oracle
    std::vector<std::string> contains;
    std::optional<std::string> equals;
    std::optional<std::regex> regex;
    std::string field = "prompt";
    std::vector<std::string> responses;
    bool fail = false;
    std::size_t next = 0;
  };

  std::vector<Rule> rules_;
  std::vector<CallRecord> log_;
  mutable std::mutex mu_;
};

}  // namespace eventqa
