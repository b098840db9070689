// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "eventqa/evidence.hpp"
#include "eventqa/plan.hpp"
#include "eventqa/run_context.hpp"

#include <optional>
#include <set>
#include <string_view>

namespace eventqa {

struct Outcome {
  std::string question_id;
  char answer = 'A';
  EvidenceMap evidence;
  EventGraph final_graph;
  std::string final_caption;
  std::set<ActivationStage> stages;  // activated update stages; {Base} when none
  bool unresolved = false;
  Trace trace;

  ActivationStage max_stage() const;
};

// Executes a validated plan. BudgetExhausted ends the run with an unresolved
// best-guess outcome; other errors propagate with ctx.trace() intact.
Outcome interpret(const plan::PlanAST& ast, RunContext& ctx);

// Builds the outcome for a run that stopped early (errors, exhausted budget).
Outcome unresolved_outcome(RunContext& ctx, EvidenceMap evidence = {});

// First answer letter in a model reply. An uppercase standalone A-E, or any
// case written as "(d)", "d." or "d)", wins over a bare lowercase letter.
std::optional<char> extract_answer_letter(std::string_view text);

}  // namespace eventqa
