// SPDX-License-Identifier: Apache-2.0
#include "eventqa/trace.hpp"

#include "eventqa/text_util.hpp"

namespace eventqa {

std::string_view to_string(ActivationStage stage) noexcept {
  switch (stage) {
    case ActivationStage::Base: return "Base";
    case ActivationStage::DenserGraph: return "DenserGraph";
    case ActivationStage::DenserCaption: return "DenserCaption";
    case ActivationStage::Multimodal: return "Multimodal";
  }
  return "Unknown";
}

std::optional<ActivationStage> parse_stage(std::string_view name) {
  for (auto s : kAllStages)
    if (iequals(to_string(s), name)) return s;
  return std::nullopt;
}

void Trace::record_call(OracleId oracle, ActivationStage stage, std::string_view prompt,
                        std::string_view response, double latency_ms) {
  oracle_calls.push_back(
      {oracle, stage, short_hash(prompt), truncate_utf8(response, kResponseBytes), latency_ms});
}

void Trace::activate(ActivationStage stage, std::string_view note) {
  stages.insert(stage);
  std::string message(to_string(stage));
  if (!note.empty()) message += ": " + std::string(note);
  events.push_back({"activation", std::move(message)});
}

void Trace::warn(std::string message) { events.push_back({"warning", std::move(message)}); }

void Trace::error(std::string message) { events.push_back({"error", std::move(message)}); }

std::size_t Trace::calls_to(OracleId oracle) const {
  std::size_t n = 0;
  for (const auto& c : oracle_calls) n += c.oracle == oracle;
  return n;
}

json Trace::to_json(bool mask_latency) const {
  json out;
  out["questionId"] = question_id;
  json stmts = json::array();
  for (const auto& s : statements)
    stmts.push_back({{"index", s.index},
                     {"kind", s.kind},
                     {"graphVersion", s.graph_version},
                     {"replay", s.replay}});
  out["statements"] = std::move(stmts);
  json calls = json::array();
  for (const auto& c : oracle_calls)
    calls.push_back({{"oracle", to_string(c.oracle)},
                     {"stage", to_string(c.stage)},
                     {"promptHash", c.prompt_hash},
                     {"truncatedResponse", c.truncated_response},
                     {"latencyMs", mask_latency ? 0.0 : c.latency_ms}});
  out["oracleCalls"] = std::move(calls);
  json evs = json::array();
  for (const auto& e : events) evs.push_back({{"type", e.type}, {"message", e.message}});
  out["events"] = std::move(evs);
  json st = json::array();
  for (auto s : stages) st.push_back(to_string(s));
  out["stages"] = std::move(st);
  out["answer"] = answer ? json(std::string(1, *answer)) : json(nullptr);
  out["unresolved"] = unresolved;
  return out;
}

}  // namespace eventqa
