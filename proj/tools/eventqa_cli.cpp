// SPDX-License-Identifier: Apache-2.0
// eventqa: batch runner, scorer and plan/graph checkers.
#include "eventqa/chat_client.hpp"
#include "eventqa/config.hpp"
#include "eventqa/error.hpp"
#include "eventqa/graph_io.hpp"
#include "eventqa/pipeline.hpp"
#include "eventqa/plan.hpp"
#include "eventqa/scripted_oracle.hpp"
#include "eventqa/text_util.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

using namespace eventqa;
namespace fs = std::filesystem;

namespace {

constexpr int kExitFailed = 1;  // checks ran and found problems
constexpr int kExitError = 2;   // bad input or runtime error

OracleSuite make_suite(const std::string& choice, const PipelineConfig& cfg) {
  constexpr std::string_view kScripted = "scripted:";
  if (choice.rfind(kScripted, 0) == 0)
    return OracleSuite::uniform(ScenarioScript::from_file(choice.substr(kScripted.size())));
  if (choice == "http") return OracleSuite::uniform(std::make_shared<HttpOracle>(cfg.endpoint));
  throw Error(ErrorCode::ConfigInvalid, "--oracles must be 'http' or 'scripted:<file>'");
}

RunReport score_dir(const std::string& out, const std::string& dataset) {
  auto records = load_dataset(dataset.empty() ? (fs::path(out) / "dataset.jsonl").string() : dataset);
  return score(load_index(out), records);
}

void print_summary(const RunReport& report, std::ostream& os) {
  os << "questions: " << report.total << "  correct: " << report.correct << "  accuracy: ";
  if (report.accuracy) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f%%", 100.0 * *report.accuracy);
    os << buf;
  } else {
    os << "n/a";
  }
  os << "  unresolved: " << report.unresolved_count << "\n\n" << report.activation_table();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Event-graph video question answering"};
  app.require_subcommand(1);

  std::string dataset, config_path, oracles = "http", out, cache_dir;
  int workers = 1;
  std::size_t limit = 0;
  auto* run = app.add_subcommand("run", "Answer every question in a dataset and write traces");
  run->add_option("--dataset", dataset, "JSON-lines question file")->required()->check(CLI::ExistingFile);
  run->add_option("--config", config_path, "key = value configuration file")->check(CLI::ExistingFile);
  run->add_option("--oracles", oracles, "'http' or 'scripted:<scenario.json>'");
  run->add_option("--out", out, "output directory")->required();
  run->add_option("--workers", workers, "parallel questions")->check(CLI::Range(1, 256));
  run->add_option("--limit", limit, "only the first N questions");
  run->add_option("--cache", cache_dir, "artifact cache directory (overrides the config)");

  std::string score_out, score_dataset;
  auto* score_cmd = app.add_subcommand("score", "Re-score a run directory as JSON");
  score_cmd->add_option("--out", score_out, "run directory")->required()->check(CLI::ExistingDirectory);
  score_cmd->add_option("--dataset", score_dataset, "defaults to the copy stored in the run");

  std::string report_out, report_dataset;
  auto* report_cmd = app.add_subcommand("report", "Print the stage activation table of a run");
  report_cmd->add_option("--out", report_out, "run directory")->required()->check(CLI::ExistingDirectory);
  report_cmd->add_option("--dataset", report_dataset, "defaults to the copy stored in the run");

  std::string plan_file;
  int ceiling = 4;
  bool print_canonical = false;
  auto* validate = app.add_subcommand("validate-plan", "Parse and validate a plan file");
  validate->add_option("file", plan_file)->required()->check(CLI::ExistingFile);
  validate->add_option("--retry-ceiling", ceiling, "warn above this many ensure retries");
  validate->add_flag("--print", print_canonical, "print the canonical form");

  std::string graph_file;
  bool strict = false;
  auto* parse_graph = app.add_subcommand("parse-graph", "Parse a graph-generator response");
  parse_graph->add_option("file", graph_file)->required()->check(CLI::ExistingFile);
  parse_graph->add_flag("--strict", strict, "reject anything that needs repair");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      PipelineConfig cfg = config_path.empty() ? PipelineConfig{} : load_config(config_path);
      if (!cache_dir.empty()) cfg.cache_dir = cache_dir;
      std::vector<std::string> warnings;
      auto records = load_dataset(dataset, &warnings);
      for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
      if (limit > 0 && records.size() > limit) records.resize(limit);

      auto suite = make_suite(oracles, cfg);
      ArtifactCache cache(cfg.cache_dir);
      auto outcomes = run_batch(records, suite, cfg, &cache, workers);

      fs::create_directories(out);
      std::string copy;
      for (const auto& r : records) copy += r.to_json().dump() + "\n";
      write_text_file((fs::path(out) / "dataset.jsonl").string(), copy);
      export_traces(outcomes, out);
      auto report = score(outcomes, records);
      write_text_file((fs::path(out) / "report.json").string(), report.to_json().dump(2) + "\n");
      print_summary(report, std::cout);
      return 0;
    }
    if (*score_cmd) {
      std::cout << score_dir(score_out, score_dataset).to_json().dump(2) << "\n";
      return 0;
    }
    if (*report_cmd) {
      print_summary(score_dir(report_out, report_dataset), std::cout);
      return 0;
    }
    if (*validate) {
      auto ast = plan::parse_plan(read_text_file(plan_file));
      auto diagnostics = plan::validate_plan(ast, plan::ValidationOptions{ceiling});
      for (const auto& d : diagnostics) std::cerr << plan_file << ":" << plan::format_diagnostic(d) << "\n";
      if (print_canonical) std::cout << plan::print_plan(ast);
      return plan::has_errors(diagnostics) ? kExitFailed : 0;
    }
    if (*parse_graph) {
      auto parsed = parse_graph_response(read_text_file(graph_file),
                                         strict ? ParseMode::Strict : ParseMode::Lenient);
      for (const auto& w : parsed.warnings) std::cerr << "warning: " << w << "\n";
      std::cout << serialize_graph(parsed.graph) << "\n";
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    bool check_failed = *validate || *parse_graph;
    return check_failed && e.code() != ErrorCode::IoFailure ? kExitFailed : kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return 0;
}
