// SPDX-License-Identifier: Apache-2.0
#include "fixtures.hpp"

#include "eventqa/graph_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace eventqa::testing {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string data_path(const std::string& relative) {
  return std::string(EVENTQA_DATA_DIR) + "/" + relative;
}

std::string test_data_path(const std::string& relative) {
  return std::string(EVENTQA_TEST_DATA_DIR) + "/" + relative;
}

std::string example_graph_text(const std::string& name) {
  return read_file(data_path("graphs/" + name + ".txt"));
}

EventGraph example_graph(const std::string& name) {
  return parse_graph_response(example_graph_text(name), ParseMode::Lenient).graph;
}

RandomGraph random_graph(std::mt19937& rng, std::size_t max_nodes) {
  static const std::vector<std::string> kNames = {"Run",  "Eat",   "Walk",   "Knock down",
                                                  "Jump", "Speak", "Go",     "Cook",
                                                  "Fire", "Wait",  "Turned", "Count to ten"};
  static const std::vector<std::string> kRoles = {"agent", "item", "place", "target", "direction"};
  static const std::vector<std::string> kValues = {
      "man in blue", "red car", "woman", "white cat", "tear gas", "ring", "left", "big screen"};

  RandomGraph out;
  std::uniform_int_distribution<std::size_t> count(0, max_nodes);
  std::size_t n = count(rng);
  std::uniform_int_distribution<std::size_t> pick_name(0, kNames.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_role(0, kRoles.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_value(0, kValues.size() - 1);
  std::uniform_int_distribution<int> coin(0, 3);

  for (std::size_t i = 0; i < n; ++i) {
    // Every third event is unindexed with a unique name; the rest share base
    // names and differ by index.
    EventId id = (i % 3 == 2) ? EventId("Solo" + std::to_string(i))
                              : EventId(kNames[pick_name(rng)], static_cast<unsigned>(i));
    ArgList args;
    int roles = coin(rng);
    for (int r = 0; r < roles; ++r) {
      std::vector<std::string> values;
      int vs = 1 + coin(rng) % 2;
      for (int v = 0; v < vs; ++v) values.push_back(kValues[pick_value(rng)]);
      args.emplace_back(kRoles[pick_role(rng)], values);
    }
    std::optional<std::string> description;
    if (coin(rng) == 0) description = "Event number " + std::to_string(i) + " happens.";
    out.events.push_back(Event::make(id, args, description));
  }
  if (n > 0) {
    std::uniform_int_distribution<std::size_t> pick_node(0, n - 1);
    std::uniform_int_distribution<std::size_t> edge_count(0, n * 2);
    std::uniform_int_distribution<int> pick_kind(0, 2);
    std::size_t m = edge_count(rng);
    for (std::size_t e = 0; e < m; ++e) {
      out.edges.push_back(Edge{out.events[pick_node(rng)].id, kAllEdgeKinds[pick_kind(rng)],
                               out.events[pick_node(rng)].id});
      if (coin(rng) == 0) out.edges.push_back(out.edges.back());
    }
  }
  out.graph = build_graph(out.events, out.edges);
  return out;
}

std::vector<EventId> scan_neighbors(const std::vector<Edge>& edges, const EventId& node,
                                    EdgeKind kind, bool outgoing) {
  std::vector<EventId> out;
  for (const auto& e : edges) {
    if (e.kind != kind) continue;
    const EventId& anchor = outgoing ? e.source : e.target;
    const EventId& other = outgoing ? e.target : e.source;
    if (anchor == node && std::find(out.begin(), out.end(), other) == out.end()) {
      out.push_back(other);
    }
  }
  return out;
}

std::vector<EventId> ids_of(const std::vector<Event>& events) {
  std::vector<EventId> out;
  for (const auto& e : events) out.push_back(e.id);
  return out;
}

}  // namespace eventqa::testing

namespace eventqa::testing {

namespace {

std::string random_text(std::mt19937& rng) {
  static const std::string kAlphabet = "abc XYZ\"\\#{}\n\t:,=()";
  std::uniform_int_distribution<std::size_t> len(0, 12);
  std::uniform_int_distribution<std::size_t> pick(0, kAlphabet.size() - 1);
  std::string out;
  std::size_t n = len(rng);
  for (std::size_t i = 0; i < n; ++i) out.push_back(kAlphabet[pick(rng)]);
  return out;
}

}  // namespace

plan::PlanAST random_plan(std::mt19937& rng, bool inject_faults) {
  using namespace plan;
  static const std::vector<std::string> kEventNames = {"Run", "Eat", "Walk", "Knock down", "Go"};
  static const TraversalKind kKinds[] = {TraversalKind::Children,      TraversalKind::Parent,
                                         TraversalKind::TemporalAfter, TraversalKind::TemporalBefore,
                                         TraversalKind::CausedBy,      TraversalKind::ResultedIn};
  std::uniform_int_distribution<int> die(0, 99);
  auto pick = [&](const std::vector<std::string>& from) {
    return from[std::uniform_int_distribution<std::size_t>(0, from.size() - 1)(rng)];
  };

  PlanAST ast;
  std::vector<std::string> nodes, collections, numbers;
  int counter = 0;
  auto fresh = [&] { return "v" + std::to_string(counter++); };
  std::size_t labels = 0;

  int statements = 1 + die(rng) % 10;
  for (int s = 0; s < statements; ++s) {
    int roll = die(rng);
    if (roll < 25 || nodes.empty()) {
      FindNode f{pick(kEventNames), {}};
      if (die(rng) < 50) f.hints.emplace_back("agent", random_text(rng));
      if (die(rng) < 30) f.hints.emplace_back("item", random_text(rng));
      auto v = fresh();
      ast.statements.push_back(Stmt{Bind{v, f}, {}});
      nodes.push_back(v);
    } else if (roll < 45) {
      auto v = fresh();
      ast.statements.push_back(Stmt{Bind{v, Traverse{pick(nodes), kKinds[die(rng) % 6]}}, {}});
      collections.push_back(v);
    } else if (roll < 55) {
      auto v = fresh();
      std::vector<std::string> parts = {pick(nodes)};
      if (!collections.empty()) parts.push_back(pick(collections));
      ast.statements.push_back(Stmt{Bind{v, Union{parts}}, {}});
      collections.push_back(v);
    } else if (roll < 62 && !collections.empty()) {
      auto v = fresh();
      ast.statements.push_back(Stmt{Bind{v, Count{pick(collections)}}, {}});
      numbers.push_back(v);
    } else if (roll < 75) {
      auto into = fresh();
      ast.statements.push_back(Stmt{Bind{into, EmptySet{}}, {}});
      collections.push_back(into);
      ForEach outer;
      outer.var = fresh();
      bool over_args = die(rng) < 50;
      outer.source = over_args ? LoopSource::ArgsOf : LoopSource::Nodes;
      if (over_args) outer.of = pick(nodes);
      if (!over_args && die(rng) < 50) {
        ForEach inner;
        inner.var = fresh();
        inner.source = LoopSource::ArgsOf;
        inner.of = outer.var;
        inner.body.push_back(Stmt{CollectWhen{"Is {value} " + random_text(rng) + "?", inner.var, into}, {}});
        outer.body.push_back(Stmt{inner, {}});
      } else {
        outer.body.push_back(Stmt{CollectWhen{random_text(rng) + " {value}", outer.var, into}, {}});
      }
      ast.statements.push_back(Stmt{outer, {}});
    } else if (roll < 85 && !collections.empty()) {
      EnsureRelations e;
      e.vars = {pick(collections)};
      if (die(rng) < 50) e.vars.push_back(pick(collections));
      e.graph_request = random_text(rng);
      e.caption_request = random_text(rng);
      e.retries = 1 + die(rng) % 4;
      ast.statements.push_back(Stmt{e, {}});
    } else {
      std::vector<std::string> all = nodes;
      all.insert(all.end(), collections.begin(), collections.end());
      all.insert(all.end(), numbers.begin(), numbers.end());
      ast.statements.push_back(
          Stmt{Evidence{"label " + std::to_string(labels++) + random_text(rng), pick(all)}, {}});
    }
  }
  if (inject_faults && die(rng) < 25) {
    if (die(rng) < 50) {
      ast.statements.push_back(Stmt{Evidence{"dangling", "never_bound"}, {}});
    } else {
      ast.statements.push_back(Stmt{Bind{pick(nodes), EmptySet{}}, {}});
    }
  }
  ast.statements.push_back(Stmt{AnswerRetry{1 + die(rng) % 4}, {}});
  return ast;
}

}  // namespace eventqa::testing
