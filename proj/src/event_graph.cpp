// SPDX-License-Identifier: Apache-2.0
#include "eventqa/event_graph.hpp"

#include "eventqa/error.hpp"
#include "eventqa/text_util.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <limits>

namespace eventqa {

namespace {

std::size_t kind_slot(EdgeKind kind) { return static_cast<std::size_t>(kind); }

bool push_unique(std::vector<std::string>& values, std::string value) {
  if (std::find(values.begin(), values.end(), value) != values.end()) return false;
  values.push_back(std::move(value));
  return true;
}

// Splits "base_k" when k is a canonical decimal and base is non-empty and
// already trimmed; anything else is a plain name.
bool split_indexed(std::string_view text, std::string& base, unsigned& index) {
  auto underscore = text.rfind('_');
  if (underscore == std::string_view::npos || underscore == 0 || underscore + 1 >= text.size()) {
    return false;
  }
  auto digits = text.substr(underscore + 1);
  if (!std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    return false;
  }
  if (digits.size() > 1 && digits.front() == '0') return false;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), index);
  if (ec != std::errc() || ptr != digits.data() + digits.size()) return false;
  auto head = text.substr(0, underscore);
  if (trim(head).size() != head.size()) return false;
  base = std::string(head);
  return true;
}

}  // namespace

EventId::EventId(std::string base_name, std::optional<unsigned> idx)
    : base(trim(base_name)), index(idx) {
  if (base.empty()) throw Error(ErrorCode::InvalidEventId, "event name is empty");
  std::string head;
  unsigned k = 0;
  if (!index && split_indexed(base, head, k)) {
    throw Error(ErrorCode::InvalidEventId,
                "'" + base + "' reads as an indexed id; pass the index separately");
  }
}

EventId EventId::parse(std::string_view rendered) {
  std::string text = trim(rendered);
  std::string base_part;
  unsigned index = 0;
  if (split_indexed(text, base_part, index)) return EventId(std::move(base_part), index);
  return EventId(std::move(text));
}

std::string EventId::str() const {
  if (!index) return base;
  return base + "_" + std::to_string(*index);
}

Event Event::make(EventId id, ArgList args, std::optional<std::string> description) {
  Event event;
  event.id = std::move(id);
  std::optional<std::string> from_args;
  for (auto& [role_raw, values] : args) {
    std::string role = trim(role_raw);
    if (role.empty()) continue;
    if (iequals(role, "description")) {
      std::vector<std::string> parts;
      for (auto& v : values) {
        auto t = trim(v);
        if (!t.empty()) parts.push_back(std::move(t));
      }
      if (!parts.empty()) from_args = join(parts, " ");
      continue;
    }
    auto slot = std::find_if(event.args.begin(), event.args.end(),
                             [&](const auto& entry) { return entry.first == role; });
    std::vector<std::string>* target = nullptr;
    if (slot == event.args.end()) {
      event.args.emplace_back(role, std::vector<std::string>{});
      target = &event.args.back().second;
    } else {
      target = &slot->second;
    }
    for (auto& v : values) {
      auto t = trim(v);
      if (!t.empty()) push_unique(*target, std::move(t));
    }
  }
  std::erase_if(event.args, [](const auto& entry) { return entry.second.empty(); });

  if (from_args) {
    event.description = *from_args;
  } else if (description && !trim(*description).empty()) {
    event.description = trim(*description);
  } else {
    event.description = event.default_description();
  }
  return event;
}

std::string Event::default_description() const {
  std::string out = id.str();
  if (args.empty()) return out;
  out += " (";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += "; ";
    out += args[i].first + ": " + join(args[i].second, ", ");
  }
  out += ")";
  return out;
}

const std::vector<std::string>* Event::arg(std::string_view role) const {
  for (const auto& [name, values] : args) {
    if (name == role) return &values;
  }
  return nullptr;
}

std::string_view to_string(EdgeKind kind) noexcept {
  switch (kind) {
    case EdgeKind::Temporal: return "temporal";
    case EdgeKind::Causal: return "causal";
    case EdgeKind::Hierarchical: return "hierarchical";
  }
  return "temporal";
}

std::optional<EdgeKind> parse_edge_kind(std::string_view name) {
  std::string key = trim(name);
  for (auto kind : kAllEdgeKinds) {
    if (iequals(key, to_string(kind))) return kind;
  }
  return std::nullopt;
}

EdgeKind edge_kind_of(TraversalKind kind) noexcept {
  switch (kind) {
    case TraversalKind::Children:
    case TraversalKind::Parent: return EdgeKind::Hierarchical;
    case TraversalKind::TemporalAfter:
    case TraversalKind::TemporalBefore: return EdgeKind::Temporal;
    case TraversalKind::CausedBy:
    case TraversalKind::ResultedIn: return EdgeKind::Causal;
  }
  return EdgeKind::Temporal;
}

bool is_outgoing(TraversalKind kind) noexcept {
  return kind == TraversalKind::Children || kind == TraversalKind::TemporalAfter ||
         kind == TraversalKind::CausedBy;
}

std::string_view to_string(TraversalKind kind) noexcept {
  switch (kind) {
    case TraversalKind::Children: return "children";
    case TraversalKind::Parent: return "parent";
    case TraversalKind::TemporalAfter: return "after";
    case TraversalKind::TemporalBefore: return "before";
    case TraversalKind::CausedBy: return "caused_by";
    case TraversalKind::ResultedIn: return "resulted_in";
  }
  return "children";
}

EventGraph build_graph(std::vector<Event> events, const std::vector<Edge>& edges) {
  EventGraph g;
  g.events_ = std::move(events);
  g.adjacency_.resize(g.events_.size());
  for (std::size_t i = 0; i < g.events_.size(); ++i) {
    auto [it, inserted] = g.index_.emplace(g.events_[i].id.str(), i);
    if (!inserted) throw Error(ErrorCode::DuplicateEventId, g.events_[i].id.str());
  }
  for (const auto& edge : edges) {
    auto src = g.position(edge.source);
    if (!src) throw Error(ErrorCode::DanglingEdge, "source " + edge.source.str());
    auto dst = g.position(edge.target);
    if (!dst) throw Error(ErrorCode::DanglingEdge, "target " + edge.target.str());
    auto& out = g.adjacency_[*src].out[kind_slot(edge.kind)];
    if (std::find(out.begin(), out.end(), *dst) != out.end()) continue;
    out.push_back(*dst);
    g.adjacency_[*dst].in[kind_slot(edge.kind)].push_back(*src);
    ++g.edge_count_;
  }
  return g;
}

std::optional<std::size_t> EventGraph::position(const EventId& id) const {
  return position(id.str());
}

std::optional<std::size_t> EventGraph::position(std::string_view rendered) const {
  auto it = index_.find(std::string(rendered));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const Event* EventGraph::find(const EventId& id) const {
  auto pos = position(id);
  return pos ? &events_[*pos] : nullptr;
}

const std::vector<std::size_t>& EventGraph::neighbors(std::size_t pos, EdgeKind kind,
                                                      bool outgoing) const {
  const auto& adj = adjacency_.at(pos);
  return outgoing ? adj.out[kind_slot(kind)] : adj.in[kind_slot(kind)];
}

std::vector<Edge> EventGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (std::size_t i = 0; i < events_.size(); ++i) {
    for (auto kind : kAllEdgeKinds) {
      for (auto dst : adjacency_[i].out[kind_slot(kind)]) {
        out.push_back(Edge{events_[i].id, kind, events_[dst].id});
      }
    }
  }
  return out;
}

bool EventGraph::operator==(const EventGraph& other) const {
  if (events_ != other.events_ || edge_count_ != other.edge_count_) return false;
  for (std::size_t i = 0; i < adjacency_.size(); ++i) {
    if (adjacency_[i].out != other.adjacency_[i].out) return false;
  }
  return true;
}

const std::vector<Event>& iterate_nodes(const EventGraph& g) noexcept { return g.events(); }

const Event& find_node(const EventGraph& g, std::string_view name, const ArgHints& hints) {
  std::string wanted = trim(name);
  if (wanted.empty()) throw Error(ErrorCode::InvalidArgument, "find_node: empty name");

  const auto& events = g.events();
  std::vector<std::size_t> candidates;

  // An indexed name ("Went_1") pins the lookup to that rendered id.
  auto parsed = EventId::parse(wanted);
  if (parsed.index) {
    for (std::size_t i = 0; i < events.size(); ++i) {
      if (iequals(events[i].id.str(), wanted)) candidates.push_back(i);
    }
  }
  if (candidates.empty()) {
    for (std::size_t i = 0; i < events.size(); ++i) {
      if (iequals(events[i].id.base, wanted) || iequals(events[i].id.str(), wanted)) {
        candidates.push_back(i);
      }
    }
  }
  if (candidates.empty()) throw Error(ErrorCode::NodeNotFound, wanted);

  auto score = [&](const Event& e) {
    std::size_t hits = 0;
    for (const auto& [role, value] : hints) {
      std::string needle = trim(value);
      bool found = false;
      for (const auto& [r, values] : e.args) {
        for (const auto& v : values) {
          if (icontains(v, needle)) {
            found = true;
            break;
          }
        }
        if (found) break;
      }
      if (found) ++hits;
    }
    return hits;
  };

  constexpr auto kNoIndex = std::numeric_limits<unsigned long long>::max();
  std::size_t best = candidates.front();
  std::size_t best_score = score(events[best]);
  for (std::size_t k = 1; k < candidates.size(); ++k) {
    std::size_t c = candidates[k];
    std::size_t s = score(events[c]);
    auto idx_of = [&](std::size_t p) {
      return events[p].id.index ? static_cast<unsigned long long>(*events[p].id.index) : kNoIndex;
    };
    // Candidates are visited in insertion order, so strict comparisons keep
    // the earlier event on a full tie.
    if (s > best_score || (s == best_score && idx_of(c) < idx_of(best))) {
      best = c;
      best_score = s;
    }
  }
  return events[best];
}

std::vector<Event> traverse(const EventGraph& g, const EventId& node, TraversalKind kind) {
  auto pos = g.position(node);
  if (!pos) throw Error(ErrorCode::UnknownNode, node.str());
  std::vector<Event> out;
  for (auto n : g.neighbors(*pos, edge_kind_of(kind), is_outgoing(kind))) {
    out.push_back(g.events()[n]);
  }
  return out;
}

EventGraph extract_subgraph(const EventGraph& g, const std::vector<EventId>& seeds,
                            std::size_t hops) {
  std::vector<std::size_t> depth(g.size(), std::numeric_limits<std::size_t>::max());
  std::deque<std::size_t> queue;
  for (const auto& seed : seeds) {
    auto pos = g.position(seed);
    if (!pos) throw Error(ErrorCode::UnknownNode, seed.str());
    if (depth[*pos] != 0) {
      depth[*pos] = 0;
      queue.push_back(*pos);
    }
  }
  while (!queue.empty()) {
    auto cur = queue.front();
    queue.pop_front();
    if (depth[cur] >= hops) continue;
    for (auto kind : kAllEdgeKinds) {
      for (bool outgoing : {true, false}) {
        for (auto n : g.neighbors(cur, kind, outgoing)) {
          if (depth[n] == std::numeric_limits<std::size_t>::max()) {
            depth[n] = depth[cur] + 1;
            queue.push_back(n);
          }
        }
      }
    }
  }

  std::vector<Event> kept;
  std::vector<bool> keep(g.size(), false);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (depth[i] != std::numeric_limits<std::size_t>::max()) {
      keep[i] = true;
      kept.push_back(g.events()[i]);
    }
  }
  std::vector<Edge> edges;
  for (const auto& e : g.edges()) {
    if (keep[*g.position(e.source)] && keep[*g.position(e.target)]) edges.push_back(e);
  }
  return build_graph(std::move(kept), edges);
}

}  // namespace eventqa
