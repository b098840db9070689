// SPDX-License-Identifier: Apache-2.0
#include "eventqa/pipeline.hpp"

#include "eventqa/error.hpp"
#include "eventqa/graph_io.hpp"
#include "eventqa/orchestrator.hpp"
#include "eventqa/prompts.hpp"
#include "eventqa/text_util.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <thread>

namespace eventqa {

namespace fs = std::filesystem;

namespace {

QuestionRecord parse_record(const json& j, int line) {
  auto bad = [line](const std::string& why) {
    return Error(ErrorCode::RecordInvalid, "line " + std::to_string(line) + ": " + why);
  };
  if (!j.is_object()) throw bad("not a JSON object");
  QuestionRecord r;
  auto str = [&](const char* key, bool required) -> std::string {
    if (!j.contains(key)) {
      if (required) throw bad(std::string("missing ") + key);
      return {};
    }
    if (!j[key].is_string()) throw bad(std::string(key) + " must be a string");
    return j[key].get<std::string>();
  };
  r.id = str("id", true);
  if (trim(r.id).empty()) throw bad("empty id");
  r.video_ref = str("video_ref", true);
  r.question = str("question", true);
  if (!j.contains("choices") || !j["choices"].is_array()) throw bad("choices must be an array");
  if (j["choices"].size() != 5)
    throw bad("expected 5 choices, got " + std::to_string(j["choices"].size()));
  for (std::size_t i = 0; i < 5; ++i) {
    if (!j["choices"][i].is_string()) throw bad("choices must be strings");
    r.choices[i] = j["choices"][i].get<std::string>();
  }
  if (!j.contains("answer_index") || !j["answer_index"].is_number_integer())
    throw bad("answer_index must be an integer");
  r.answer_index = j["answer_index"].get<int>();
  if (r.answer_index < 0 || r.answer_index > 4) throw bad("answer_index out of range");
  if (j.contains("qtype") && !j["qtype"].is_null()) r.qtype = str("qtype", false);
  return r;
}

std::string strip_code_fences(const std::string& text) {
  auto open = text.find("```");
  if (open == std::string::npos) return text;
  auto body = text.find('\n', open);
  if (body == std::string::npos) return text;
  auto close = text.find("```", body + 1);
  return text.substr(body + 1, close == std::string::npos ? std::string::npos : close - body - 1);
}

// Serves a Base-stage call from the cache when possible.
std::string cached_call(RunContext& ctx, ArtifactCache* cache, const std::string& key,
                        const OracleRequest& req) {
  if (cache) {
    if (auto hit = cache->get(key)) {
      ctx.record_cached(req, ActivationStage::Base, *hit);
      return *hit;
    }
  }
  auto reply = ctx.call(req, ActivationStage::Base);
  if (cache) cache->put(key, reply.text);
  return reply.text;
}

std::string with_events_header(const std::string& text) {
  if (icontains(text, kEventsHeader)) return text;
  return std::string(kEventsHeader) + "\n" + text;
}

Outcome run_stages(const QuestionRecord& rec, RunContext& ctx, const PipelineConfig& cfg,
                   ArtifactCache* cache) {
  Slots slots = question_slots(rec.question, rec.choices);

  const auto& cap_t = templates::captioner();
  OracleRequest cap;
  cap.oracle = OracleId::Captioner;
  cap.prompt = render_prompt(cap_t, slots);
  cap.args = json{{"video_ref", rec.video_ref}};
  ctx.append_caption(cached_call(
      ctx, cache, cache_key({rec.video_ref, rec.question, cap_t.id, sha256_hex(cap_t.body)}), cap));

  const auto& graph_t = templates::graph_generator();
  slots["caption"] = ctx.caption();
  OracleRequest gen;
  gen.oracle = OracleId::GraphGenerator;
  gen.prompt = render_prompt(graph_t, slots);
  gen.args = json{{"video_ref", rec.video_ref}};
  std::string graph_text = cached_call(
      ctx, cache,
      cache_key({rec.video_ref, rec.question, graph_t.id, sha256_hex(graph_t.body), ctx.caption()}),
      gen);
  auto parsed = parse_graph_response(with_events_header(graph_text), ParseMode::Lenient);
  for (auto& w : parsed.warnings) ctx.trace().warn("graph: " + w);
  ctx.set_graph(std::move(parsed.graph));

  slots["original_graph"] = serialize_graph(ctx.graph());
  OracleRequest plan_req;
  plan_req.oracle = OracleId::PlanGenerator;
  plan_req.prompt = render_prompt(templates::plan_generator(), slots);
  plan_req.args = json{{"video_ref", rec.video_ref}};
  auto plan_text = strip_code_fences(ctx.call(plan_req, ActivationStage::Base).text);

  auto ast = plan::parse_plan(plan_text);
  auto diagnostics = plan::validate_plan(ast, plan::ValidationOptions{cfg.retry_ceiling});
  for (const auto& d : diagnostics) {
    if (d.severity == plan::Diagnostic::Severity::Warning) ctx.trace().warn(plan::format_diagnostic(d));
  }
  if (plan::has_errors(diagnostics)) {
    std::string msg;
    for (const auto& d : diagnostics)
      if (d.severity == plan::Diagnostic::Severity::Error) msg += plan::format_diagnostic(d) + "; ";
    throw Error(ErrorCode::InvalidArgument, "plan rejected: " + msg);
  }
  return interpret(ast, ctx);
}

double round3(double v) { return std::round(v * 1000.0) / 1000.0; }

}  // namespace

json QuestionRecord::to_json() const {
  json j{{"id", id}, {"video_ref", video_ref}, {"question", question}, {"choices", choices},
         {"answer_index", answer_index}};
  if (qtype) j["qtype"] = *qtype;
  return j;
}

std::vector<QuestionRecord> parse_dataset(std::string_view text, std::vector<std::string>* warnings) {
  std::vector<QuestionRecord> records;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::RecordInvalid, "line " + std::to_string(line_no) + ": " + e.what());
    }
    records.push_back(parse_record(j, line_no));
  }
  if (records.empty() && warnings) warnings->push_back("dataset has no records");
  return records;
}

std::vector<QuestionRecord> load_dataset(const std::string& path, std::vector<std::string>* warnings) {
  return parse_dataset(read_text_file(path), warnings);
}

std::string cache_key(std::initializer_list<std::string_view> parts) {
  std::string buf;
  for (auto p : parts) {
    buf += std::to_string(p.size());
    buf += ':';
    buf.append(p);
  }
  return sha256_hex(buf);
}

ArtifactCache::ArtifactCache(std::string dir) : dir_(std::move(dir)) {
  if (!dir_.empty()) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw Error(ErrorCode::IoFailure, "cannot create cache dir " + dir_);
  }
}

std::optional<std::string> ArtifactCache::get(const std::string& key) {
  std::lock_guard lock(mu_);
  if (auto it = memory_.find(key); it != memory_.end()) return it->second;
  if (dir_.empty()) return std::nullopt;
  fs::path path = fs::path(dir_) / (key + ".txt");
  if (!fs::exists(path)) return std::nullopt;
  auto text = read_text_file(path.string());
  memory_[key] = text;
  return text;
}

void ArtifactCache::put(const std::string& key, const std::string& value) {
  std::lock_guard lock(mu_);
  memory_[key] = value;
  if (!dir_.empty()) write_text_file((fs::path(dir_) / (key + ".txt")).string(), value);
}

std::size_t ArtifactCache::size() const {
  std::lock_guard lock(mu_);
  return memory_.size();
}

Outcome run_question(const QuestionRecord& rec, const OracleSuite& suite, const PipelineConfig& cfg,
                     ArtifactCache* cache) {
  RunContext ctx(rec.spec(), suite, cfg.budgets, cfg.seeds);
  try {
    return run_stages(rec, ctx, cfg, cache);
  } catch (const std::exception& e) {
    ctx.trace().error(e.what());
    return unresolved_outcome(ctx);
  }
}

std::vector<Outcome> run_batch(const std::vector<QuestionRecord>& records, const OracleSuite& suite,
                               const PipelineConfig& cfg, ArtifactCache* cache, int workers) {
  std::vector<Outcome> outcomes(records.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < records.size(); i = next++)
      outcomes[i] = run_question(records[i], suite, cfg, cache);
  };
  int n = std::clamp(workers, 1, static_cast<int>(std::max<std::size_t>(records.size(), 1)));
  if (n == 1) {
    work();
    return outcomes;
  }
  std::vector<std::thread> pool;
  for (int i = 0; i < n; ++i) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  return outcomes;
}

RunReport score(const std::vector<Outcome>& outcomes, const std::vector<QuestionRecord>& records) {
  std::map<std::string, const Outcome*> by_id;
  for (const auto& o : outcomes)
    if (!by_id.emplace(o.question_id, &o).second)
      throw Error(ErrorCode::IdMismatch, "duplicate outcome " + o.question_id);
  if (by_id.size() != records.size())
    throw Error(ErrorCode::IdMismatch, std::to_string(outcomes.size()) + " outcomes for " +
                                           std::to_string(records.size()) + " records");

  RunReport report;
  std::map<ActivationStage, std::pair<int, int>> stage_counts;
  for (const auto& rec : records) {
    auto it = by_id.find(rec.id);
    if (it == by_id.end()) throw Error(ErrorCode::IdMismatch, "no outcome for " + rec.id);
    const Outcome& o = *it->second;
    bool correct = o.answer == rec.answer_letter();
    ++report.total;
    report.correct += correct;
    report.unresolved_count += o.unresolved;
    if (rec.qtype) {
      auto& t = report.per_type[*rec.qtype];
      ++t.total;
      t.correct += correct;
    }
    auto& s = stage_counts[o.max_stage()];
    ++s.first;
    s.second += correct;
  }
  if (report.total > 0) report.accuracy = static_cast<double>(report.correct) / report.total;
  for (auto& [name, t] : report.per_type)
    if (t.total > 0) t.accuracy = static_cast<double>(t.correct) / t.total;
  for (auto stage : kAllStages) {
    StageStats s;
    s.stage = stage;
    auto [count, correct] = stage_counts[stage];
    s.count = count;
    s.percent = report.total ? 100.0 * count / report.total : 0.0;
    if (count > 0) s.subset_accuracy = 100.0 * correct / count;
    report.activation.push_back(s);
  }
  return report;
}

json RunReport::activation_json() const {
  json out = json::array();
  for (const auto& s : activation)
    out.push_back({{"stage", to_string(s.stage)},
                   {"count", s.count},
                   {"percent", round3(s.percent)},
                   {"subsetAccuracy", s.subset_accuracy ? json(round3(*s.subset_accuracy)) : json(nullptr)}});
  return out;
}

json RunReport::to_json() const {
  json types = json::object();
  for (const auto& [name, t] : per_type)
    types[name] = {{"total", t.total},
                   {"correct", t.correct},
                   {"accuracy", t.accuracy ? json(*t.accuracy) : json(nullptr)}};
  return json{{"total", total},
              {"correct", correct},
              {"accuracy", accuracy ? json(*accuracy) : json(nullptr)},
              {"perType", std::move(types)},
              {"activation", activation_json()},
              {"unresolvedCount", unresolved_count}};
}

std::string RunReport::activation_table() const {
  std::string out = "stage            count  percent  subset_accuracy\n";
  char line[128];
  for (const auto& s : activation) {
    std::string acc = "-";
    if (s.subset_accuracy) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.1f", *s.subset_accuracy);
      acc = buf;
    }
    std::snprintf(line, sizeof line, "%-15s  %5d  %7.1f  %15s\n",
                  std::string(to_string(s.stage)).c_str(), s.count, s.percent, acc.c_str());
    out += line;
  }
  return out;
}

std::string sanitize_file_name(std::string_view id) {
  std::string out;
  for (char c : id) {
    bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
    out += ok ? c : '_';
  }
  if (out.empty() || out == "." || out == "..") out = "_" + out;
  return out;
}

json outcome_json(const Outcome& outcome, bool mask_latency) {
  json j = outcome.trace.to_json(mask_latency);
  j["evidence"] = outcome.evidence.to_json();
  return j;
}

void export_traces(const std::vector<Outcome>& outcomes, const std::string& dir) {
  fs::path root(dir);
  std::error_code ec;
  fs::create_directories(root / "traces", ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + (root / "traces").string());

  json runs = json::array();
  for (const auto& o : outcomes) {
    std::string file = "traces/" + sanitize_file_name(o.question_id) + ".json";
    write_text_file((root / file).string(), outcome_json(o).dump(2) + "\n");
    json stages = json::array();
    for (auto s : o.stages) stages.push_back(to_string(s));
    runs.push_back({{"id", o.question_id},
                    {"file", file},
                    {"answer", std::string(1, o.answer)},
                    {"stage", to_string(o.max_stage())},
                    {"stages", std::move(stages)},
                    {"unresolved", o.unresolved}});
  }
  write_text_file((root / "index.json").string(), json{{"runs", runs}}.dump(2) + "\n");
}

std::vector<Outcome> load_index(const std::string& dir) {
  json index;
  try {
    index = json::parse(read_text_file((fs::path(dir) / "index.json").string()));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::IoFailure, std::string("index.json: ") + e.what());
  }
  std::vector<Outcome> outcomes;
  for (const auto& run : index.at("runs")) {
    Outcome o;
    o.question_id = run.at("id").get<std::string>();
    o.answer = run.at("answer").get<std::string>().at(0);
    o.unresolved = run.at("unresolved").get<bool>();
    for (const auto& s : run.at("stages"))
      if (auto stage = parse_stage(s.get<std::string>())) o.stages.insert(*stage);
    outcomes.push_back(std::move(o));
  }
  return outcomes;
}

}  // namespace eventqa
