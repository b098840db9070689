// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace eventqa {

// Event name plus an optional disambiguating index, rendered as "base" or "base_k".
struct EventId {
  std::string base;
  std::optional<unsigned> index;

  EventId() = default;
  explicit EventId(std::string base_name, std::optional<unsigned> idx = std::nullopt);

  // Inverse of str(). A trailing "_k" is an index only when k is a canonical
  // decimal (no leading zeros), so "Went_01" keeps its suffix in the base.
  static EventId parse(std::string_view rendered);

  std::string str() const;

  bool operator==(const EventId&) const = default;
};

// Role name -> argument values, in insertion order.
using ArgList = std::vector<std::pair<std::string, std::vector<std::string>>>;

// Role name -> requested value, used as hints for find_node.
using ArgHints = std::vector<std::pair<std::string, std::string>>;

struct Event {
  EventId id;
  ArgList args;
  std::string description;

  // Normalizes args (merges repeated roles, drops duplicate and empty values,
  // drops empty roles). A "description" role, when present, becomes the
  // description; otherwise `description` or the default rendering is used.
  static Event make(EventId id, ArgList args, std::optional<std::string> description = std::nullopt);

  // "Went_1 (agent: black car on the right; direction: right)"
  std::string default_description() const;

  const std::vector<std::string>* arg(std::string_view role) const;

  bool operator==(const Event&) const = default;
};

enum class EdgeKind { Temporal, Causal, Hierarchical };
inline constexpr std::array<EdgeKind, 3> kAllEdgeKinds = {EdgeKind::Temporal, EdgeKind::Causal,
                                                          EdgeKind::Hierarchical};

std::string_view to_string(EdgeKind kind) noexcept;
// Case-insensitive; nullopt for anything other than the three relation names.
std::optional<EdgeKind> parse_edge_kind(std::string_view name);

struct Edge {
  EventId source;
  EdgeKind kind;
  EventId target;

  bool operator==(const Edge&) const = default;
};

enum class TraversalKind { Children, Parent, TemporalAfter, TemporalBefore, CausedBy, ResultedIn };

EdgeKind edge_kind_of(TraversalKind kind) noexcept;
// True when the traversal follows edges out of the node.
bool is_outgoing(TraversalKind kind) noexcept;
std::string_view to_string(TraversalKind kind) noexcept;

class EventGraph;

EventGraph build_graph(std::vector<Event> events, const std::vector<Edge>& edges);

// Immutable after construction. Events keep insertion order; adjacency lists
// keep edge insertion order and hold no duplicates.
class EventGraph {
 public:
  EventGraph() = default;

  const std::vector<Event>& events() const noexcept { return events_; }
  std::size_t size() const noexcept { return events_.size(); }
  bool empty() const noexcept { return events_.empty(); }
  std::size_t edge_count() const noexcept { return edge_count_; }

  std::optional<std::size_t> position(const EventId& id) const;
  std::optional<std::size_t> position(std::string_view rendered) const;
  const Event* find(const EventId& id) const;

  // One-hop neighbor positions of the event at `pos`.
  const std::vector<std::size_t>& neighbors(std::size_t pos, EdgeKind kind, bool outgoing) const;

  // Every edge, grouped by source in event order, then kind, then adjacency order.
  std::vector<Edge> edges() const;

  // Structural equality: same events in the same order and the same adjacency lists.
  bool operator==(const EventGraph& other) const;

 private:
  friend EventGraph build_graph(std::vector<Event> events, const std::vector<Edge>& edges);

  struct Adjacency {
    std::array<std::vector<std::size_t>, 3> out;
    std::array<std::vector<std::size_t>, 3> in;
  };

  std::vector<Event> events_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<Adjacency> adjacency_;
  std::size_t edge_count_ = 0;
};

// Sequence of every event, once each, in insertion order.
const std::vector<Event>& iterate_nodes(const EventGraph& g) noexcept;

// Deterministic best match for `name`; throws Error(NodeNotFound) when no
// event carries that name.
const Event& find_node(const EventGraph& g, std::string_view name, const ArgHints& hints = {});

// Direct neighbors only, in adjacency order. Throws Error(UnknownNode).
std::vector<Event> traverse(const EventGraph& g, const EventId& node, TraversalKind kind);

// Induced subgraph over every event within `hops` undirected hops of a seed.
EventGraph extract_subgraph(const EventGraph& g, const std::vector<EventId>& seeds, std::size_t hops);

}  // namespace eventqa
