// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "eventqa/event_graph.hpp"
#include "eventqa/plan.hpp"

#include <random>
#include <string>
#include <vector>

namespace eventqa::testing {

std::string read_file(const std::string& path);
std::string data_path(const std::string& relative);
std::string test_data_path(const std::string& relative);

// Verbatim graph-generator example responses under data/graphs: "protest", "traffic", "boxing".
std::string example_graph_text(const std::string& name);
EventGraph example_graph(const std::string& name);

struct RandomGraph {
  std::vector<Event> events;
  std::vector<Edge> edges;  // may contain duplicates
  EventGraph graph;
};

RandomGraph random_graph(std::mt19937& rng, std::size_t max_nodes);

// Linear scan of an edge list: neighbors of `node` over `kind`, deduplicated
// in first-seen order.
std::vector<EventId> scan_neighbors(const std::vector<Edge>& edges, const EventId& node,
                                    EdgeKind kind, bool outgoing);

std::vector<EventId> ids_of(const std::vector<Event>& events);


// Well-scoped random plan: every read refers to an earlier binding. With
// `inject_faults`, roughly one plan in four also reads an unbound name or
// rebinds a variable.
plan::PlanAST random_plan(std::mt19937& rng, bool inject_faults = false);

}  // namespace eventqa::testing
