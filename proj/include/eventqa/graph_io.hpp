// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "eventqa/event_graph.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace eventqa {

inline constexpr std::string_view kEventsHeader = "Events:";
inline constexpr std::string_view kRelationsHeader = "Events-Events Relationships:";

enum class ParseMode { Strict, Lenient };

struct GraphParse {
  EventGraph graph;
  std::vector<std::string> warnings;
};

// Reads the graph-generator response format: an "Events:" block and an
// "Events-Events Relationships:" block, one JSON object each.
//
// Strict mode accepts well-formed JSON only and rejects unknown relation kinds
// and edges to undeclared events. Lenient mode also unescapes \" quoting,
// drops trailing commas, turns stray '.' separators into ',', skips unknown
// relation kinds and materializes undeclared endpoints as bare events; every
// repair is reported in `warnings`.
//
// Relation endpoints resolve to an event by exact id first, then by a unique
// case-insensitive match ("fired" -> "Fired").
GraphParse parse_graph_response(std::string_view text, ParseMode mode);

std::string serialize_graph(const EventGraph& g);

// Node union with base-wins semantics: colliding events keep the base
// description and gain any unseen argument values. Edge union is deduplicated.
// Delta events are matched to base events by id, then by unique
// case-insensitive id.
EventGraph merge_graphs(const EventGraph& base, const EventGraph& delta);

}  // namespace eventqa
