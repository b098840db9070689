// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "eventqa/config.hpp"
#include "eventqa/interpreter.hpp"

#include <array>
#include <initializer_list>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace eventqa {

struct QuestionRecord {
  std::string id;
  std::string video_ref;
  std::string question;
  std::array<std::string, 5> choices;
  int answer_index = 0;
  std::optional<std::string> qtype;

  QuestionSpec spec() const { return {id, video_ref, question, choices}; }
  char answer_letter() const { return static_cast<char>('A' + answer_index); }
  json to_json() const;
};

// JSON lines: {"id", "video_ref", "question", "choices": [5], "answer_index",
// "qtype"?}. Blank lines are skipped; an empty dataset adds a warning.
std::vector<QuestionRecord> parse_dataset(std::string_view text,
                                          std::vector<std::string>* warnings = nullptr);
std::vector<QuestionRecord> load_dataset(const std::string& path,
                                         std::vector<std::string>* warnings = nullptr);

// SHA-256 over length-prefixed parts.
std::string cache_key(std::initializer_list<std::string_view> parts);

// Thread-safe string cache, mirrored to `dir` when one is given.
class ArtifactCache {
 public:
  explicit ArtifactCache(std::string dir = {});

  std::optional<std::string> get(const std::string& key);
  void put(const std::string& key, const std::string& value);
  std::size_t size() const;

 private:
  std::string dir_;
  std::map<std::string, std::string> memory_;
  mutable std::mutex mu_;
};

// Caption -> graph -> plan -> interpret. Never throws for question-level
// failures: they become unresolved outcomes with an error in the trace.
Outcome run_question(const QuestionRecord& rec, const OracleSuite& suite, const PipelineConfig& cfg,
                     ArtifactCache* cache = nullptr);

// Runs records on up to `workers` threads; outcomes keep record order.
std::vector<Outcome> run_batch(const std::vector<QuestionRecord>& records, const OracleSuite& suite,
                               const PipelineConfig& cfg, ArtifactCache* cache = nullptr,
                               int workers = 1);

struct TypeStats {
  int total = 0;
  int correct = 0;
  std::optional<double> accuracy;
};

struct StageStats {
  ActivationStage stage;
  int count = 0;
  double percent = 0;
  std::optional<double> subset_accuracy;  // percent; none when count is 0
};

struct RunReport {
  int total = 0;
  int correct = 0;
  std::optional<double> accuracy;  // fraction; none when total is 0
  std::map<std::string, TypeStats> per_type;
  std::vector<StageStats> activation;  // enum order, labelled by maximal stage
  int unresolved_count = 0;

  json to_json() const;
  json activation_json() const;
  std::string activation_table() const;
};

// Throws IdMismatch unless outcomes and records cover the same ids.
RunReport score(const std::vector<Outcome>& outcomes, const std::vector<QuestionRecord>& records);

// Trace document for one outcome (trace fields plus evidence).
json outcome_json(const Outcome& outcome, bool mask_latency = false);

// Writes <dir>/traces/<id>.json per outcome and <dir>/index.json.
void export_traces(const std::vector<Outcome>& outcomes, const std::string& dir);

// Reads <dir>/index.json back into outcome stubs (id, answer, stages,
// unresolved) for re-scoring.
std::vector<Outcome> load_index(const std::string& dir);

std::string sanitize_file_name(std::string_view id);

}  // namespace eventqa
