// SPDX-License-Identifier: Apache-2.0
#include "eventqa/error.hpp"
#include "eventqa/graph_io.hpp"

#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <tuple>

using namespace eventqa;
using eventqa::testing::example_graph;
using eventqa::testing::example_graph_text;
using eventqa::testing::random_graph;

namespace {

ErrorCode parse_error(std::string_view text, ParseMode mode) {
  try {
    parse_graph_response(text, mode);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected a parse error";
  return ErrorCode::InvalidArgument;
}

std::string unescaped(std::string text) {
  std::string out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '\\' && i + 1 < text.size() && text[i + 1] == '"') continue;
    out.push_back(text[i]);
  }
  return out;
}

using EdgeKey = std::tuple<std::string, int, std::string>;

std::multiset<EdgeKey> edge_multiset(const EventGraph& g) {
  std::multiset<EdgeKey> out;
  for (const auto& e : g.edges()) {
    out.emplace(e.source.str(), static_cast<int>(e.kind), e.target.str());
  }
  return out;
}

}  // namespace

TEST(ParseGraphTest, WorkedExamplesHaveExactCounts) {
  auto protest = parse_graph_response(example_graph_text("protest"), ParseMode::Lenient);
  EXPECT_EQ(protest.graph.size(), 4u);
  EXPECT_EQ(protest.graph.edge_count(), 6u);
  auto traffic = example_graph("traffic");
  EXPECT_EQ(traffic.size(), 6u);
  EXPECT_EQ(traffic.edge_count(), 11u);
  auto boxing = example_graph("boxing");
  EXPECT_EQ(boxing.size(), 9u);
  EXPECT_EQ(boxing.edge_count(), 16u);
}

TEST(ParseGraphTest, ProtestEdgesResolveLowercaseEndpoints) {
  auto parsed = parse_graph_response(example_graph_text("protest"), ParseMode::Lenient);
  const auto& g = parsed.graph;
  std::multiset<EdgeKey> want = {
      {"Protest", static_cast<int>(EdgeKind::Hierarchical), "Marching"},
      {"Protest", static_cast<int>(EdgeKind::Hierarchical), "Fired"},
      {"Protest", static_cast<int>(EdgeKind::Hierarchical), "Disperse"},
      {"Marching", static_cast<int>(EdgeKind::Temporal), "Fired"},
      {"Fired", static_cast<int>(EdgeKind::Causal), "Disperse"},
      {"Fired", static_cast<int>(EdgeKind::Temporal), "Disperse"},
  };
  EXPECT_EQ(edge_multiset(g), want);
  // Single-string argument values are lifted to lists.
  ASSERT_NE(g.find(EventId("Protest"))->arg("place"), nullptr);
  EXPECT_EQ(*g.find(EventId("Protest"))->arg("place"), std::vector<std::string>{"street"});
  EXPECT_EQ(g.find(EventId("Fired"))->description, "Police fired tear gas.");
  // The listing uses \" quoting and a '.' where a ',' belongs; both are repairs.
  EXPECT_GE(parsed.warnings.size(), 2u);
}

TEST(ParseGraphTest, StrictAcceptsCleanJsonAndMatchesLenient) {
  for (const char* name : {"traffic", "boxing"}) {
    auto clean = unescaped(example_graph_text(name));
    auto strict = parse_graph_response(clean, ParseMode::Strict);
    EXPECT_EQ(strict.graph, example_graph(name)) << name;
    EXPECT_TRUE(strict.warnings.empty());
    EXPECT_EQ(parse_error(example_graph_text(name), ParseMode::Strict),
              ErrorCode::MalformedObject);
  }
  // The protest listing has a '.' separator, which only Lenient repairs.
  EXPECT_EQ(parse_error(unescaped(example_graph_text("protest")), ParseMode::Strict),
            ErrorCode::MalformedObject);
}

TEST(ParseGraphTest, UnknownRelationKind) {
  const std::string text =
      "Events:\n{\"A\": {\"agent\": [\"x\"]}, \"B\": {}}\n"
      "Events-Events Relationships:\n{\"A\": {\"spatial\": [\"B\"], \"Temporal\": [\"B\"]}}\n";
  EXPECT_EQ(parse_error(text, ParseMode::Strict), ErrorCode::UnknownRelationKind);
  auto lenient = parse_graph_response(text, ParseMode::Lenient);
  EXPECT_EQ(lenient.graph.edge_count(), 1u);
  ASSERT_EQ(lenient.warnings.size(), 1u);
  EXPECT_NE(lenient.warnings[0].find("spatial"), std::string::npos);
}

TEST(ParseGraphTest, UndeclaredEndpoints) {
  const std::string text =
      "Events:\n{\"Fired\": {\"agent\": [\"police\"]}}\n"
      "Events-Events Relationships:\n{\"Fired\": {\"causal\": [\"Vanish\"]}, \"Cheer\": {}}\n";
  EXPECT_EQ(parse_error(text, ParseMode::Strict), ErrorCode::DanglingEdge);
  auto lenient = parse_graph_response(text, ParseMode::Lenient).graph;
  ASSERT_EQ(lenient.size(), 3u);
  EXPECT_EQ(lenient.events()[1].id.str(), "Vanish");
  EXPECT_TRUE(lenient.events()[1].args.empty());
  EXPECT_EQ(lenient.events()[2].id.str(), "Cheer");
}

TEST(ParseGraphTest, MissingAndMalformedBlocks) {
  EXPECT_EQ(parse_error("Events:\n{}\n", ParseMode::Lenient), ErrorCode::MissingBlock);
  EXPECT_EQ(parse_error("Events-Events Relationships:\n{}\n", ParseMode::Lenient),
            ErrorCode::MissingBlock);
  EXPECT_EQ(parse_error("Events:\n{\"A\": {}\nEvents-Events Relationships:\n{}", ParseMode::Lenient),
            ErrorCode::MalformedObject);
  EXPECT_EQ(parse_error("Events: none\nEvents-Events Relationships:\n{}", ParseMode::Lenient),
            ErrorCode::MalformedObject);
}

TEST(ParseGraphTest, HeadersAreCaseInsensitiveAndProseTolerant) {
  const std::string text =
      "Sure! Here is the graph.\nEVENTS:\n{\"Run\": {\"agent\": \"dog\",}}\nThat is all the events."
      "\nevents-events relationships: {\"Run\": {}}\nHope this helps.";
  auto parsed = parse_graph_response(text, ParseMode::Lenient);
  EXPECT_EQ(parsed.graph.size(), 1u);
  EXPECT_EQ(parse_error(text, ParseMode::Strict), ErrorCode::MalformedObject);
}

TEST(SerializeGraphTest, EmptyGraphForm) {
  auto text = serialize_graph(EventGraph{});
  EXPECT_EQ(text, "Events:\n{}\n\nEvents-Events Relationships:\n{}\n");
  EXPECT_EQ(parse_graph_response(text, ParseMode::Strict).graph, EventGraph{});
}

TEST(SerializeGraphTest, WorkedExampleRoundTrip) {
  for (const char* name : {"protest", "traffic", "boxing"}) {
    auto g = example_graph(name);
    auto back = parse_graph_response(serialize_graph(g), ParseMode::Strict).graph;
    EXPECT_EQ(back, g) << name;
    EXPECT_EQ(edge_multiset(back), edge_multiset(g));
  }
}

TEST(SerializeGraphTest, RandomRoundTripAndLenientMonotonicity) {
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    auto g = random_graph(rng, 50).graph;
    auto text = serialize_graph(g);
    auto strict = parse_graph_response(text, ParseMode::Strict);
    auto lenient = parse_graph_response(text, ParseMode::Lenient);
    EXPECT_EQ(strict.graph, g);
    EXPECT_EQ(lenient.graph, strict.graph);
    EXPECT_TRUE(lenient.warnings.empty());
  }
}

TEST(MergeGraphsTest, Idempotent) {
  for (const char* name : {"protest", "traffic", "boxing"}) {
    auto g = example_graph(name);
    EXPECT_EQ(merge_graphs(g, g), g);
  }
}

TEST(MergeGraphsTest, AddsChantToProtest) {
  auto base = example_graph("protest");
  auto delta = build_graph({Event::make(EventId("Protest"), {{"agent", {"people", "students"}}},
                                        std::string("Another description.")),
                            Event::make(EventId("Chant"), {{"agent", {"people"}}})},
                           {{EventId("Protest"), EdgeKind::Hierarchical, EventId("Chant")}});
  auto merged = merge_graphs(base, delta);
  EXPECT_EQ(merged.size(), 5u);
  EXPECT_EQ(merged.edge_count(), 7u);
  EXPECT_EQ(merged.events().back().id.str(), "Chant");
  const auto* protest = merged.find(EventId("Protest"));
  EXPECT_EQ(protest->description, "People are protesting on the street.");
  EXPECT_EQ(*protest->arg("agent"), (std::vector<std::string>{"people", "students"}));
}

TEST(MergeGraphsTest, CaseVariantIdsCollapseOntoBase) {
  auto base = example_graph("protest");
  auto delta = build_graph({Event::make(EventId("fired"), {}), Event::make(EventId("Flee"), {})},
                           {{EventId("fired"), EdgeKind::Causal, EventId("Flee")}});
  auto merged = merge_graphs(base, delta);
  EXPECT_EQ(merged.size(), 5u);
  EXPECT_EQ(merged.neighbors(*merged.position(EventId("Fired")), EdgeKind::Causal, true).size(), 2u);
}

TEST(MergeGraphsTest, PreservesBaseAndIsAssociativeOnSets) {
  std::mt19937 rng(17);
  auto node_set = [](const EventGraph& g) {
    std::set<std::string> out;
    for (const auto& e : g.events()) out.insert(e.id.str());
    return out;
  };
  auto edge_set = [](const EventGraph& g) {
    auto ms = edge_multiset(g);
    return std::set<EdgeKey>(ms.begin(), ms.end());
  };
  for (int trial = 0; trial < 50; ++trial) {
    auto a = random_graph(rng, 20).graph;
    auto b = random_graph(rng, 20).graph;
    auto c = random_graph(rng, 20).graph;
    auto ab = merge_graphs(a, b);
    auto base_edges = edge_set(a);
    auto merged_edges = edge_set(ab);
    EXPECT_TRUE(std::includes(merged_edges.begin(), merged_edges.end(), base_edges.begin(),
                              base_edges.end()));
    auto left = merge_graphs(ab, c);
    auto right = merge_graphs(a, merge_graphs(b, c));
    EXPECT_EQ(node_set(left), node_set(right));
    EXPECT_EQ(edge_set(left), edge_set(right));
    EXPECT_GE(ab.size(), a.size());
  }
}
