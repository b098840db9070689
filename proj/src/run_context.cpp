// SPDX-License-Identifier: Apache-2.0
#include "eventqa/run_context.hpp"

#include "eventqa/error.hpp"
#include "eventqa/text_util.hpp"

namespace eventqa {

void Budgets::validate() const {
  if (graph_retries < 1) throw Error(ErrorCode::ConfigInvalid, "budgets.graph_retries must be >= 1");
  if (answer_retries < 1)
    throw Error(ErrorCode::ConfigInvalid, "budgets.answer_retries must be >= 1");
  if (multimodal_hops < 0)
    throw Error(ErrorCode::ConfigInvalid, "budgets.multimodal_hops must be >= 0");
  if (call_ceiling < 1) throw Error(ErrorCode::ConfigInvalid, "budgets.call_ceiling must be >= 1");
}

RunContext::RunContext(QuestionSpec spec, OracleSuite oracles, Budgets budgets, SeedPolicy seeds)
    : spec_(std::move(spec)), oracles_(std::move(oracles)), budgets_(budgets), seeds_(seeds) {
  budgets_.validate();
  oracles_.check();
  trace_.question_id = spec_.id;
}

void RunContext::set_graph(EventGraph g) {
  graph_ = std::move(g);
  ++graph_version_;
}

std::string RunContext::caption() const { return join(captions_, "\n\n"); }

void RunContext::append_caption(std::string text) { captions_.push_back(std::move(text)); }

void RunContext::charge(const OracleRequest& request) {
  if (calls_ >= budgets_.call_ceiling)
    throw Error(ErrorCode::BudgetExhausted,
                "call ceiling " + std::to_string(budgets_.call_ceiling) + " reached before " +
                    std::string(to_string(request.oracle)));
  ++calls_;
}

OracleReply RunContext::call(const OracleRequest& request, ActivationStage stage) {
  charge(request);
  OracleReply reply;
  try {
    reply = oracles_.get(request.oracle).invoke(request);
  } catch (const Error& e) {
    trace_.record_call(request.oracle, stage, request.system + request.prompt, "", 0);
    trace_.error(std::string(to_string(request.oracle)) + " failed: " + e.what());
    throw;
  } catch (const std::exception& e) {
    trace_.record_call(request.oracle, stage, request.system + request.prompt, "", 0);
    trace_.error(std::string(to_string(request.oracle)) + " failed: " + e.what());
    throw Error(ErrorCode::OracleFailure, e.what());
  }
  trace_.record_call(request.oracle, stage, request.system + request.prompt, reply.text,
                     reply.latency_ms);
  return reply;
}

void RunContext::record_cached(const OracleRequest& request, ActivationStage stage,
                               const std::string& text) {
  charge(request);
  trace_.record_call(request.oracle, stage, request.system + request.prompt, text, 0);
}

}  // namespace eventqa
