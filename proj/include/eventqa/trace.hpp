// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "eventqa/oracles.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace eventqa {

enum class ActivationStage { Base, DenserGraph, DenserCaption, Multimodal };

inline constexpr ActivationStage kAllStages[] = {ActivationStage::Base, ActivationStage::DenserGraph,
                                                 ActivationStage::DenserCaption,
                                                 ActivationStage::Multimodal};

std::string_view to_string(ActivationStage stage) noexcept;
std::optional<ActivationStage> parse_stage(std::string_view name);

struct OracleCallRecord {
  OracleId oracle;
  ActivationStage stage;
  std::string prompt_hash;
  std::string truncated_response;
  double latency_ms = 0;
};

struct StatementRecord {
  std::size_t index;   // position in the top-level statement list
  std::string kind;    // bind, foreach, ensure, evidence, answer
  std::uint64_t graph_version;
  bool replay = false;
};

struct TraceEvent {
  std::string type;  // activation, warning, error
  std::string message;
};

// Per-question log. Append-only; not thread-safe (one owner per question).
class Trace {
 public:
  static constexpr std::size_t kResponseBytes = 200;

  std::string question_id;
  std::vector<StatementRecord> statements;
  std::vector<OracleCallRecord> oracle_calls;
  std::vector<TraceEvent> events;
  std::set<ActivationStage> stages;
  std::optional<char> answer;
  bool unresolved = false;

  void record_call(OracleId oracle, ActivationStage stage, std::string_view prompt,
                   std::string_view response, double latency_ms);
  // Idempotent on the stage set; always appends an event.
  void activate(ActivationStage stage, std::string_view note = {});
  void warn(std::string message);
  void error(std::string message);

  std::size_t calls_to(OracleId oracle) const;

  // Latency fields become 0 when `mask_latency` is set.
  json to_json(bool mask_latency = false) const;
};

}  // namespace eventqa
