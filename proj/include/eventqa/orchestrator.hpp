// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "eventqa/evidence.hpp"
#include "eventqa/run_context.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace eventqa {

void record_activation(Trace& trace, ActivationStage stage);

// Highest stage activated so far, Base when none.
ActivationStage current_stage(const Trace& trace);

// Asks the graph generator for a denser graph and merges it into ctx. A reply
// that does not parse is re-asked once with the parse error appended (when
// max_attempts allows); a second failure throws DensifyFailed and leaves the
// graph unchanged.
const EventGraph& densify_graph(RunContext& ctx, const std::optional<EventId>& node,
                                const std::string& request, int max_attempts = 2);

// Asks the captioner for a denser caption and appends it to ctx's history.
std::string densify_caption(RunContext& ctx, const std::string& request);

// The bindings an ensure statement watches.
struct ReplayableBindings {
  std::function<bool()> nonempty;  // true when any watched binding has content
  std::function<void()> replay;    // re-evaluates the bindings on ctx's graph
  std::optional<EventId> anchor;   // passed to the graph generator when known
};

// Densify loop: one denser graph, then up to `retries` rounds of denser
// caption + denser graph while the bindings stay empty. At most retries+1
// graph-generator calls (repair re-asks included) and `retries` captioner calls.
bool ensure_relations(RunContext& ctx, const ReplayableBindings& bindings,
                      const std::string& graph_request, const std::string& caption_request,
                      int retries);

struct AnswerResult {
  char letter = 'A';
  bool unsure = true;
};

// Reasoner loop with uncertainty-triggered retrieval. New information is
// appended to `evidence` under "new info <i>".
AnswerResult answer_with_retry(RunContext& ctx, EvidenceMap& evidence, int retries);

struct MultimodalResult {
  char letter = 'A';
  bool resolved = false;
  std::map<std::string, std::string> clips;  // rendered event id -> clip ref
};

// Attaches retrieved clips to the subgraph around `seeds` and asks the
// multimodal answerer. Falls back to `fallback` when no letter comes back.
MultimodalResult multimodal_fallback(RunContext& ctx, const std::vector<EventId>& seeds,
                                     char fallback);

}  // namespace eventqa
