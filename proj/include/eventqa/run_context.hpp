// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "eventqa/event_graph.hpp"
#include "eventqa/oracles.hpp"
#include "eventqa/trace.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace eventqa {

struct Budgets {
  int graph_retries = 3;
  int answer_retries = 3;
  int multimodal_hops = 1;
  int call_ceiling = 50;

  // Throws ConfigInvalid unless all are >= 1 (multimodal_hops >= 0).
  void validate() const;
};

// Which nodes seed the multimodal subgraph: the nodes a plan looked up, or
// their hierarchical parents.
enum class SeedPolicy { Anchors, Parents };

struct QuestionSpec {
  std::string id;
  std::string video_ref;
  std::string question;
  std::array<std::string, 5> choices;
};

// Mutable state of one question run. Every oracle call goes through call(),
// which enforces the call ceiling and writes the trace.
class RunContext {
 public:
  RunContext(QuestionSpec spec, OracleSuite oracles, Budgets budgets = {},
             SeedPolicy seeds = SeedPolicy::Anchors);

  const QuestionSpec& spec() const { return spec_; }
  const std::string& question() const { return spec_.question; }
  const std::array<std::string, 5>& choices() const { return spec_.choices; }
  const Budgets& budgets() const { return budgets_; }
  SeedPolicy seed_policy() const { return seeds_; }
  const OracleSuite& oracles() const { return oracles_; }

  const EventGraph& graph() const { return graph_; }
  std::uint64_t graph_version() const { return graph_version_; }
  void set_graph(EventGraph g);

  // Caption history joined by blank lines.
  std::string caption() const;
  const std::vector<std::string>& caption_history() const { return captions_; }
  void append_caption(std::string text);

  Trace& trace() { return trace_; }
  const Trace& trace() const { return trace_; }

  // Throws BudgetExhausted once the ceiling is reached.
  OracleReply call(const OracleRequest& request, ActivationStage stage);
  // Records a reply served from a cache exactly like a live call.
  void record_cached(const OracleRequest& request, ActivationStage stage, const std::string& text);
  int calls_made() const { return calls_; }

  // Last letter any reasoner reply yielded; used for forced guesses.
  std::optional<char> best_guess;

 private:
  void charge(const OracleRequest& request);

  QuestionSpec spec_;
  OracleSuite oracles_;
  Budgets budgets_;
  SeedPolicy seeds_;
  EventGraph graph_;
  std::uint64_t graph_version_ = 0;
  std::vector<std::string> captions_;
  Trace trace_;
  int calls_ = 0;
};

}  // namespace eventqa
