// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <json.hpp>

#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace eventqa {

using json = nlohmann::ordered_json;

enum class OracleId {
  Captioner,
  GraphGenerator,
  PlanGenerator,
  Reasoner,
  SimpleQuery,
  NewInfo,
  ClipRetriever,
  MultimodalAnswerer,
};

inline constexpr OracleId kAllOracles[] = {
    OracleId::Captioner, OracleId::GraphGenerator, OracleId::PlanGenerator,
    OracleId::Reasoner,  OracleId::SimpleQuery,    OracleId::NewInfo,
    OracleId::ClipRetriever, OracleId::MultimodalAnswerer};

// Snake-case names used in scenario scripts and traces ("graph_generator").
std::string_view to_string(OracleId id) noexcept;
std::optional<OracleId> parse_oracle_id(std::string_view name);

struct OracleRequest {
  OracleId oracle = OracleId::Reasoner;
  std::string system;  // may be empty
  std::string prompt;
  json args = json::object();  // structured inputs (video_ref, node, ...)
};

struct OracleReply {
  std::string text;
  double latency_ms = 0;
  int attempts = 1;
};

// Implementations must tolerate concurrent invoke() calls.
class Oracle {
 public:
  virtual ~Oracle() = default;
  virtual OracleReply invoke(const OracleRequest& request) = 0;
};

struct OracleSuite {
  std::shared_ptr<Oracle> captioner;
  std::shared_ptr<Oracle> graph_generator;
  std::shared_ptr<Oracle> plan_generator;
  std::shared_ptr<Oracle> reasoner;
  std::shared_ptr<Oracle> simple_query;
  std::shared_ptr<Oracle> new_info;
  std::shared_ptr<Oracle> clip_retriever;
  std::shared_ptr<Oracle> multimodal_answerer;

  // Every member set to the same implementation.
  static OracleSuite uniform(std::shared_ptr<Oracle> oracle);

  // Throws InvalidArgument when a member is unset.
  Oracle& get(OracleId id) const;
  void check() const;
};

// True iff the text contains "not sure", ignoring case.
bool detect_not_sure(std::string_view reasoner_text);

// Maps the first token of a reply to yes/no after stripping punctuation.
// Throws UninterpretableYesNo otherwise.
bool interpret_yes_no(std::string_view reply);

OracleRequest simple_query_request(std::string_view event_description, std::string_view query);

bool ask_simple_query(Oracle& oracle, std::string_view event_description, std::string_view query);

}  // namespace eventqa
