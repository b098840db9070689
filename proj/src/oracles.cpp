// SPDX-License-Identifier: Apache-2.0
#include "eventqa/oracles.hpp"

#include "eventqa/error.hpp"
#include "eventqa/prompts.hpp"
#include "eventqa/text_util.hpp"

#include <cctype>

namespace eventqa {

std::string_view to_string(OracleId id) noexcept {
  switch (id) {
    case OracleId::Captioner: return "captioner";
    case OracleId::GraphGenerator: return "graph_generator";
    case OracleId::PlanGenerator: return "plan_generator";
    case OracleId::Reasoner: return "reasoner";
    case OracleId::SimpleQuery: return "simple_query";
    case OracleId::NewInfo: return "new_info";
    case OracleId::ClipRetriever: return "clip_retriever";
    case OracleId::MultimodalAnswerer: return "multimodal_answerer";
  }
  return "unknown";
}

std::optional<OracleId> parse_oracle_id(std::string_view name) {
  for (auto id : kAllOracles)
    if (to_string(id) == name) return id;
  return std::nullopt;
}

OracleSuite OracleSuite::uniform(std::shared_ptr<Oracle> oracle) {
  return OracleSuite{oracle, oracle, oracle, oracle, oracle, oracle, oracle, oracle};
}

Oracle& OracleSuite::get(OracleId id) const {
  const std::shared_ptr<Oracle>* slot = nullptr;
  switch (id) {
    case OracleId::Captioner: slot = &captioner; break;
    case OracleId::GraphGenerator: slot = &graph_generator; break;
    case OracleId::PlanGenerator: slot = &plan_generator; break;
    case OracleId::Reasoner: slot = &reasoner; break;
    case OracleId::SimpleQuery: slot = &simple_query; break;
    case OracleId::NewInfo: slot = &new_info; break;
    case OracleId::ClipRetriever: slot = &clip_retriever; break;
    case OracleId::MultimodalAnswerer: slot = &multimodal_answerer; break;
  }
  if (!slot || !*slot)
    throw Error(ErrorCode::InvalidArgument, "oracle suite has no " + std::string(to_string(id)));
  return **slot;
}

void OracleSuite::check() const {
  for (auto id : kAllOracles) get(id);
}

bool detect_not_sure(std::string_view reasoner_text) {
  return icontains(reasoner_text, "not sure");
}

bool interpret_yes_no(std::string_view reply) {
  std::size_t i = 0;
  auto skip = [&] {
    while (i < reply.size() && !std::isalnum(static_cast<unsigned char>(reply[i]))) ++i;
  };
  skip();
  std::size_t start = i;
  while (i < reply.size() && std::isalnum(static_cast<unsigned char>(reply[i]))) ++i;
  std::string token = to_lower(reply.substr(start, i - start));
  if (token == "yes") return true;
  if (token == "no") return false;
  throw Error(ErrorCode::UninterpretableYesNo, "reply '" + truncate_utf8(reply, 80) + "'");
}

OracleRequest simple_query_request(std::string_view event_description, std::string_view query) {
  const auto& t = templates::simple_query();
  OracleRequest req;
  req.oracle = OracleId::SimpleQuery;
  req.system = t.system;
  req.prompt = render_prompt(
      t, {{"event_description", std::string(event_description)}, {"query", std::string(query)}});
  req.args = json{{"event", std::string(event_description)}, {"query", std::string(query)}};
  return req;
}

bool ask_simple_query(Oracle& oracle, std::string_view event_description, std::string_view query) {
  return interpret_yes_no(oracle.invoke(simple_query_request(event_description, query)).text);
}

}  // namespace eventqa
