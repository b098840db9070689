// SPDX-License-Identifier: Apache-2.0
#include "eventqa/config.hpp"
#include "eventqa/error.hpp"
#include "eventqa/pipeline.hpp"
#include "eventqa/scripted_oracle.hpp"

#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>

using namespace eventqa;
using eventqa::testing::read_file;
using eventqa::testing::test_data_path;
namespace fs = std::filesystem;

namespace {

std::string record_line(const std::string& id, int n_choices = 5, int answer = 0) {
  json choices = json::array();
  for (int i = 0; i < n_choices; ++i) choices.push_back("c" + std::to_string(i));
  return json{{"id", id}, {"video_ref", "v_" + id}, {"question", "what happens"},
              {"choices", choices}, {"answer_index", answer}}
      .dump();
}

fs::path fresh_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("eventqa_pipeline_" + name);
  fs::remove_all(p);
  return p;
}

struct Batch10 {
  std::vector<QuestionRecord> records = load_dataset(test_data_path("batch10/dataset.jsonl"));
  json rules = json::parse(read_file(test_data_path("batch10/scenario.json")));
  PipelineConfig cfg;

  std::pair<std::vector<Outcome>, std::shared_ptr<ScenarioScript>> run(ArtifactCache* cache = nullptr,
                                                                      int workers = 1) const {
    auto script = std::make_shared<ScenarioScript>(rules);
    auto outcomes = run_batch(records, OracleSuite::uniform(script), cfg, cache, workers);
    return {std::move(outcomes), script};
  }
};

std::vector<std::string> documents(const std::vector<Outcome>& outcomes) {
  std::vector<std::string> out;
  for (const auto& o : outcomes) out.push_back(outcome_json(o, true).dump());
  return out;
}

std::size_t base_calls(const Outcome& o, OracleId id) {
  return std::count_if(o.trace.oracle_calls.begin(), o.trace.oracle_calls.end(), [&](const auto& c) {
    return c.oracle == id && c.stage == ActivationStage::Base;
  });
}

Outcome stub(const std::string& id, char answer, std::set<ActivationStage> stages) {
  Outcome o;
  o.question_id = id;
  o.answer = answer;
  o.stages = std::move(stages);
  return o;
}

QuestionRecord record(const std::string& id, int answer, std::optional<std::string> qtype = {}) {
  QuestionRecord r;
  r.id = id;
  r.answer_index = answer;
  r.qtype = std::move(qtype);
  return r;
}

}  // namespace

TEST(DatasetTest, ParsesRecords) {
  std::string text = record_line("a") + "\n\n" + record_line("b", 5, 3) + "\n" + record_line("c", 5, 4);
  auto records = parse_dataset(text);
  ASSERT_EQ(records.size(), 3u);
  EXPECT_EQ(records[1].id, "b");
  EXPECT_EQ(records[1].answer_letter(), 'D');
  EXPECT_EQ(records[2].choices[4], "c4");
  EXPECT_FALSE(records[0].qtype);
  EXPECT_EQ(parse_dataset(records[1].to_json().dump())[0].to_json(), records[1].to_json());
}

TEST(DatasetTest, RejectsMalformedRecordsWithLineNumbers) {
  auto expect_invalid = [](const std::string& text, const std::string& where) {
    try {
      parse_dataset(text);
      ADD_FAILURE() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::RecordInvalid);
      EXPECT_NE(std::string(e.what()).find(where), std::string::npos) << e.what();
    }
  };
  expect_invalid(record_line("a") + "\n" + record_line("b", 4), "line 2");
  expect_invalid(record_line("a") + "\n" + record_line("b") + "\n{not json", "line 3");
  expect_invalid(record_line("a", 5, 5), "line 1");
  expect_invalid(record_line("a", 5, -1), "line 1");
  expect_invalid(R"({"id": "x", "question": "q", "choices": ["a","b","c","d","e"], "answer_index": 0})", "line 1");
}

TEST(DatasetTest, EmptyDatasetWarns) {
  std::vector<std::string> warnings;
  EXPECT_TRUE(parse_dataset("\n  \n", &warnings).empty());
  EXPECT_EQ(warnings.size(), 1u);
}

TEST(ConfigTest, SectionsAndDefaults) {
  auto cfg = parse_config(R"(
# budgets first
[budgets]
graph_retries = 2
answer_retries = 1
multimodal_hops = 0
call_ceiling = 20

[endpoint]
url = "http://127.0.0.1:9/v1/chat/completions"
model = test-model
auth_env = TOKEN_VAR
timeout_s = 5

[retry]
max = 1
base_ms = 10

[cache]
dir = /tmp/eventqa-cache

[validate]
retry_ceiling = 6

[multimodal]
seeds = parents
)");
  EXPECT_EQ(cfg.budgets.graph_retries, 2);
  EXPECT_EQ(cfg.budgets.answer_retries, 1);
  EXPECT_EQ(cfg.budgets.multimodal_hops, 0u);
  EXPECT_EQ(cfg.budgets.call_ceiling, 20);
  EXPECT_EQ(cfg.endpoint.url, "http://127.0.0.1:9/v1/chat/completions");
  EXPECT_EQ(cfg.endpoint.model, "test-model");
  EXPECT_EQ(cfg.endpoint.auth_env, "TOKEN_VAR");
  EXPECT_EQ(cfg.endpoint.retry_max, 1);
  EXPECT_EQ(cfg.endpoint.retry_base_ms, 10);
  EXPECT_EQ(cfg.seeds, SeedPolicy::Parents);
  EXPECT_EQ(cfg.cache_dir, "/tmp/eventqa-cache");
  EXPECT_EQ(cfg.retry_ceiling, 6);

  auto defaults = parse_config("");
  EXPECT_EQ(defaults.budgets.graph_retries, 3);
  EXPECT_EQ(defaults.budgets.call_ceiling, 50);
  EXPECT_EQ(defaults.seeds, SeedPolicy::Anchors);
  EXPECT_EQ(defaults.retry_ceiling, 4);
}

TEST(ConfigTest, RejectsBadInput) {
  for (const char* text : {"budgets.graph_retries = many", "[budgets]\nbogus = 1", "nonsense line",
                           "multimodal.seeds = siblings", "budgets.call_ceiling = 0", "[unclosed"}) {
    try {
      parse_config(text);
      ADD_FAILURE() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::ConfigInvalid) << text;
    }
  }
}

TEST(CacheTest, KeysAreUnambiguous) {
  EXPECT_NE(cache_key({"ab", "c"}), cache_key({"a", "bc"}));
  EXPECT_EQ(cache_key({"ab", "c"}), cache_key({"ab", "c"}));
  EXPECT_EQ(cache_key({}).size(), 64u);
}

TEST(CacheTest, PersistsAcrossInstances) {
  auto dir = fresh_dir("cache");
  {
    ArtifactCache c(dir.string());
    c.put("k", "line one\nline two");
    EXPECT_EQ(c.get("k"), "line one\nline two");
  }
  ArtifactCache reopened(dir.string());
  EXPECT_EQ(reopened.get("k"), "line one\nline two");
  EXPECT_EQ(reopened.get("missing"), std::nullopt);
  ArtifactCache memory_only;
  EXPECT_EQ(memory_only.get("k"), std::nullopt);
}

TEST(Batch10Test, AnswersAndStages) {
  Batch10 b;
  auto [outcomes, script] = b.run();
  ASSERT_EQ(outcomes.size(), 10u);
  const std::string answers = "BCADEBBAAB";
  const std::vector<ActivationStage> stages = {
      ActivationStage::Base,        ActivationStage::Base,        ActivationStage::Base,
      ActivationStage::Base,        ActivationStage::Base,        ActivationStage::Base,
      ActivationStage::DenserGraph, ActivationStage::DenserGraph, ActivationStage::DenserCaption,
      ActivationStage::Multimodal};
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    SCOPED_TRACE(outcomes[i].question_id);
    EXPECT_EQ(outcomes[i].question_id, b.records[i].id);
    EXPECT_EQ(outcomes[i].answer, answers[i]);
    EXPECT_EQ(outcomes[i].max_stage(), stages[i]);
    EXPECT_FALSE(outcomes[i].unresolved);
    for (const auto& e : outcomes[i].trace.events) EXPECT_NE(e.type, "error") << e.message;
  }
  // Each question: one caption, one graph and one plan call at the base stage.
  for (const auto& o : outcomes) {
    EXPECT_EQ(base_calls(o, OracleId::Captioner), 1u);
    EXPECT_EQ(base_calls(o, OracleId::GraphGenerator), 1u);
    EXPECT_EQ(base_calls(o, OracleId::PlanGenerator), 1u);
  }
  EXPECT_EQ(outcomes[9].trace.calls_to(OracleId::GraphGenerator), 1u + 3u);
  EXPECT_EQ(outcomes[9].trace.calls_to(OracleId::Captioner), 1u + 2u);
  EXPECT_EQ(outcomes[8].trace.calls_to(OracleId::GraphGenerator), 1u + 2u);

  auto report = score(outcomes, b.records);
  EXPECT_EQ(report.total, 10);
  EXPECT_EQ(report.correct, 7);
  EXPECT_DOUBLE_EQ(*report.accuracy, 0.7);
  EXPECT_EQ(report.unresolved_count, 0);
  EXPECT_EQ(report.activation_json(), json::parse(R"([
    {"stage": "Base", "count": 6, "percent": 60.0, "subsetAccuracy": 83.333},
    {"stage": "DenserGraph", "count": 2, "percent": 20.0, "subsetAccuracy": 50.0},
    {"stage": "DenserCaption", "count": 1, "percent": 10.0, "subsetAccuracy": 100.0},
    {"stage": "Multimodal", "count": 1, "percent": 10.0, "subsetAccuracy": 0.0}])"));
  EXPECT_EQ(report.per_type.at("temporal").total, 5);
  EXPECT_EQ(report.per_type.at("temporal").correct, 3);
}

TEST(Batch10Test, RunsAreDeterministic) {
  Batch10 b;
  auto first = documents(b.run().first);
  EXPECT_EQ(documents(b.run().first), first);
  EXPECT_EQ(documents(b.run(nullptr, 4).first), first);
}

TEST(Batch10Test, WarmCacheSkipsBaseCaptionAndGraph) {
  Batch10 b;
  auto dir = fresh_dir("warm");
  std::vector<std::string> cold;
  {
    ArtifactCache cache(dir.string());
    auto [outcomes, script] = b.run(&cache);
    cold = documents(outcomes);
    EXPECT_EQ(cache.size(), 20u);
  }
  ArtifactCache cache(dir.string());
  auto [outcomes, script] = b.run(&cache, 3);
  EXPECT_EQ(documents(outcomes), cold);
  // Only the denser-caption requests reach the captioner on a warm run.
  EXPECT_EQ(script->count(OracleId::Captioner), 3u);
  std::size_t base_graph_calls = 0;
  for (const auto& c : script->call_log())
    if (c.oracle == OracleId::GraphGenerator && !c.args.contains("request")) ++base_graph_calls;
  EXPECT_EQ(base_graph_calls, 0u);
  EXPECT_EQ(script->count(OracleId::PlanGenerator), 10u);
}

TEST(Batch10Test, PermutedOrderGivesSameOutcomes) {
  Batch10 b;
  auto [outcomes, script] = b.run();
  std::map<std::string, std::string> by_id;
  for (const auto& o : outcomes) by_id[o.question_id] = outcome_json(o, true).dump();

  Batch10 reversed;
  std::reverse(reversed.records.begin(), reversed.records.end());
  for (const auto& o : reversed.run(nullptr, 2).first)
    EXPECT_EQ(outcome_json(o, true).dump(), by_id.at(o.question_id)) << o.question_id;
}

TEST(PipelineTest, RejectedPlanLeavesQuestionUnresolved) {
  Batch10 b;
  json rules = json::array();
  rules.push_back({{"oracle", "plan_generator"},
                   {"match", {{"contains", "[q3]"}}},
                   {"response", "x = find_node(\"run\")\nx = find_node(\"walk\")\nanswer retries 1\n"}});
  for (const auto& r : b.rules) rules.push_back(r);
  b.rules = rules;
  auto [outcomes, script] = b.run();
  EXPECT_TRUE(outcomes[2].unresolved);
  EXPECT_EQ(outcomes[2].answer, 'A');
  bool rejected = false;
  for (const auto& e : outcomes[2].trace.events)
    rejected = rejected || (e.type == "error" && e.message.find("plan rejected") != std::string::npos);
  EXPECT_TRUE(rejected) << outcomes[2].trace.to_json().dump(1);
  EXPECT_EQ(outcomes[3].answer, 'D');
  EXPECT_EQ(score(outcomes, b.records).correct, 7);  // q3 still lands on A by default
}

TEST(PipelineTest, FencedPlansAreAccepted) {
  Batch10 b;
  json rules = json::array();
  rules.push_back({{"oracle", "plan_generator"},
                   {"match", {{"contains", "[q6]"}}},
                   {"response", "```\ndrive = find_node(\"drive\")\nevidence \"event\" = drive\nanswer retries 3\n```"}});
  for (const auto& r : b.rules) rules.push_back(r);
  b.rules = rules;
  auto outcomes = b.run().first;
  EXPECT_EQ(outcomes[5].answer, 'B');
  EXPECT_FALSE(outcomes[5].unresolved);
}

TEST(PipelineTest, OracleFailureIsContained) {
  Batch10 b;
  json rules = json::array();
  rules.push_back({{"oracle", "graph_generator"}, {"match", {{"contains", "[q1]"}}}, {"fail", true}});
  for (const auto& r : b.rules) rules.push_back(r);
  b.rules = rules;
  auto outcomes = b.run().first;
  EXPECT_TRUE(outcomes[0].unresolved);
  EXPECT_EQ(outcomes[0].trace.events.back().type, "error");
  EXPECT_EQ(outcomes[1].answer, 'C');
}

TEST(ScoreTest, AccuracyAndTypes) {
  std::vector<QuestionRecord> records = {record("a", 0, "x"), record("b", 1, "x"), record("c", 2, "y"),
                                         record("d", 3)};
  std::vector<Outcome> outcomes = {stub("d", 'D', {ActivationStage::Base}), stub("c", 'C', {}),
                                   stub("b", 'A', {ActivationStage::Base}),
                                   stub("a", 'A', {ActivationStage::DenserGraph})};
  auto report = score(outcomes, records);
  EXPECT_EQ(report.correct, 3);
  EXPECT_DOUBLE_EQ(*report.accuracy, 0.75);
  EXPECT_EQ(report.per_type.at("x").correct, 1);
  EXPECT_DOUBLE_EQ(*report.per_type.at("y").accuracy, 1.0);
  EXPECT_EQ(report.per_type.count("d"), 0u);
  EXPECT_EQ(report.activation[0].count, 3);
  EXPECT_FALSE(report.activation[3].subset_accuracy);
}

TEST(ScoreTest, EmptyRunHasNoAccuracy) {
  auto report = score({}, {});
  EXPECT_FALSE(report.accuracy);
  EXPECT_TRUE(report.to_json()["accuracy"].is_null());
  EXPECT_EQ(report.activation.size(), 4u);
}

TEST(ScoreTest, IdMismatches) {
  std::vector<QuestionRecord> records = {record("a", 0), record("b", 0)};
  auto expect_mismatch = [&](std::vector<Outcome> outcomes) {
    try {
      score(outcomes, records);
      ADD_FAILURE();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::IdMismatch);
    }
  };
  expect_mismatch({stub("a", 'A', {})});
  expect_mismatch({stub("a", 'A', {}), stub("a", 'A', {})});
  expect_mismatch({stub("a", 'A', {}), stub("c", 'A', {})});
  expect_mismatch({stub("a", 'A', {}), stub("b", 'A', {}), stub("c", 'A', {})});
}

TEST(ExportTest, IndexRoundTripAndStableFiles) {
  Batch10 b;
  auto outcomes = b.run().first;
  outcomes[0].question_id = "odd/id 1";
  auto dir = fresh_dir("export");
  export_traces(outcomes, dir.string());
  EXPECT_TRUE(fs::exists(dir / "traces" / "odd_id_1.json"));
  EXPECT_TRUE(fs::exists(dir / "traces" / "q10.json"));
  auto first_index = read_file((dir / "index.json").string());
  auto first_trace = read_file((dir / "traces" / "q9.json").string());

  auto loaded = load_index(dir.string());
  ASSERT_EQ(loaded.size(), outcomes.size());
  for (std::size_t i = 0; i < loaded.size(); ++i) {
    EXPECT_EQ(loaded[i].question_id, outcomes[i].question_id);
    EXPECT_EQ(loaded[i].answer, outcomes[i].answer);
    EXPECT_EQ(loaded[i].stages, outcomes[i].stages);
    EXPECT_EQ(loaded[i].max_stage(), outcomes[i].max_stage());
  }
  auto trace = json::parse(first_trace);
  EXPECT_EQ(trace["questionId"], "q9");
  EXPECT_EQ(trace["answer"], "A");
  EXPECT_EQ(trace["stages"], json::parse(R"(["DenserGraph", "DenserCaption"])"));

  export_traces(b.run().first, dir.string());
  EXPECT_EQ(read_file((dir / "traces" / "q9.json").string()), first_trace);
  EXPECT_NE(read_file((dir / "index.json").string()), first_index);  // q1 is back under its own name
}

TEST(ExportTest, SanitizedNames) {
  EXPECT_EQ(sanitize_file_name("q-1_a.b"), "q-1_a.b");
  EXPECT_EQ(sanitize_file_name("../x"), ".._x");
  EXPECT_EQ(sanitize_file_name(".."), "_..");
  EXPECT_EQ(sanitize_file_name(""), "_");
}
