// SPDX-License-Identifier: Apache-2.0
#include "eventqa/orchestrator.hpp"

#include "eventqa/error.hpp"
#include "eventqa/graph_io.hpp"
#include "eventqa/interpreter.hpp"
#include "eventqa/prompts.hpp"
#include "eventqa/text_util.hpp"

namespace eventqa {

namespace {

Slots base_slots(const RunContext& ctx) { return question_slots(ctx.question(), ctx.choices()); }

// Graph-generator replies sometimes drop the leading header because the
// prompt already ends with it.
std::string with_events_header(const std::string& text) {
  if (icontains(text, kEventsHeader)) return text;
  return std::string(kEventsHeader) + "\n" + text;
}

}  // namespace

void record_activation(Trace& trace, ActivationStage stage) { trace.activate(stage); }

ActivationStage current_stage(const Trace& trace) {
  return trace.stages.empty() ? ActivationStage::Base : *trace.stages.rbegin();
}

const EventGraph& densify_graph(RunContext& ctx, const std::optional<EventId>& node,
                                const std::string& request, int max_attempts) {
  if (max_attempts < 1) throw Error(ErrorCode::InvalidArgument, "densify_graph needs an attempt");
  record_activation(ctx.trace(), ActivationStage::DenserGraph);

  Slots slots = base_slots(ctx);
  slots["caption"] = ctx.caption();
  slots["original_graph"] = serialize_graph(ctx.graph());
  slots["request"] = request;
  OracleRequest req;
  req.oracle = OracleId::GraphGenerator;
  req.prompt = render_prompt(templates::denser_graph(), slots);
  req.args = json{{"video_ref", ctx.spec().video_ref}, {"request", request}};
  if (node) req.args["node"] = node->str();

  std::string failure;
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    if (attempt > 1) {
      req.prompt += "\n The previous response could not be parsed (" + failure +
                    "). Answer again with an Events block and an Events-Events Relationships "
                    "block.\n Events: \n";
      req.args["repair"] = true;
    }
    auto reply = ctx.call(req, ActivationStage::DenserGraph);
    try {
      auto parsed = parse_graph_response(with_events_header(reply.text), ParseMode::Lenient);
      for (auto& w : parsed.warnings) ctx.trace().warn("denser graph: " + w);
      ctx.set_graph(merge_graphs(ctx.graph(), parsed.graph));
      return ctx.graph();
    } catch (const Error& e) {
      failure = e.what();
    }
  }
  ctx.trace().error("denser graph failed: " + failure);
  throw Error(ErrorCode::DensifyFailed, failure);
}

std::string densify_caption(RunContext& ctx, const std::string& request) {
  if (trim(request).empty())
    throw Error(ErrorCode::InvalidArgument, "denser caption needs a non-empty request");
  record_activation(ctx.trace(), ActivationStage::DenserCaption);
  OracleRequest req;
  req.oracle = OracleId::Captioner;
  req.prompt = render_prompt(templates::denser_caption(), {{"request", request}});
  req.args = json{{"video_ref", ctx.spec().video_ref},
                  {"caption", ctx.caption()},
                  {"request", request}};
  auto reply = ctx.call(req, ActivationStage::DenserCaption);
  ctx.append_caption(reply.text);
  return reply.text;
}

bool ensure_relations(RunContext& ctx, const ReplayableBindings& bindings,
                      const std::string& graph_request, const std::string& caption_request,
                      int retries) {
  if (retries < 1) throw Error(ErrorCode::InvalidArgument, "ensure retries must be >= 1");
  if (bindings.nonempty()) return true;

  int graph_calls_left = retries + 1;
  auto densify = [&] {
    const std::size_t before = ctx.trace().calls_to(OracleId::GraphGenerator);
    try {
      densify_graph(ctx, bindings.anchor, graph_request, std::min(2, graph_calls_left));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DensifyFailed) throw;
    }
    graph_calls_left -=
        static_cast<int>(ctx.trace().calls_to(OracleId::GraphGenerator) - before);
    bindings.replay();
  };

  densify();
  for (int i = 1; i <= retries; ++i) {
    if (bindings.nonempty() || graph_calls_left <= 0) break;
    densify_caption(ctx, caption_request);
    densify();
  }
  return bindings.nonempty();
}

AnswerResult answer_with_retry(RunContext& ctx, EvidenceMap& evidence, int retries) {
  if (retries < 1) throw Error(ErrorCode::InvalidArgument, "answer retries must be >= 1");
  std::optional<char> letter;
  bool unsure = true;
  for (int i = 0; i < retries; ++i) {
    Slots slots = base_slots(ctx);
    slots["evidence"] = evidence.render();
    const auto& t = templates::reasoner();
    OracleRequest req;
    req.oracle = OracleId::Reasoner;
    req.system = t.system;
    req.prompt = render_prompt(t, slots);
    req.args = json{{"attempt", i}};
    auto reply = ctx.call(req, current_stage(ctx.trace()));

    if (auto l = extract_answer_letter(reply.text)) {
      letter = l;
      ctx.best_guess = l;
    }
    unsure = detect_not_sure(reply.text);
    if (!unsure || i == retries - 1) break;

    Slots info_slots = base_slots(ctx);
    info_slots["concern"] = reply.text;
    OracleRequest info;
    info.oracle = OracleId::NewInfo;
    info.prompt = render_prompt(templates::new_info(), info_slots);
    info.args = json{{"video_ref", ctx.spec().video_ref}, {"concern", reply.text}};
    auto more = ctx.call(info, current_stage(ctx.trace()));
    evidence.add("new info " + std::to_string(i), more.text);
  }
  if (!letter) {
    ctx.trace().warn("reasoner gave no answer letter; guessing A");
    return AnswerResult{'A', true};
  }
  return AnswerResult{*letter, unsure};
}

MultimodalResult multimodal_fallback(RunContext& ctx, const std::vector<EventId>& seeds,
                                     char fallback) {
  record_activation(ctx.trace(), ActivationStage::Multimodal);
  MultimodalResult result;

  std::vector<EventId> present;
  for (const auto& s : seeds) {
    if (ctx.graph().position(s)) {
      present.push_back(s);
    } else {
      ctx.trace().warn("multimodal seed " + s.str() + " is not in the graph");
    }
  }
  auto sub = extract_subgraph(ctx.graph(), present,
                              static_cast<std::size_t>(ctx.budgets().multimodal_hops));

  for (const auto& e : sub.events()) {
    OracleRequest req;
    req.oracle = OracleId::ClipRetriever;
    req.prompt = e.description;
    req.args = json{{"video_ref", ctx.spec().video_ref},
                    {"node", e.id.str()},
                    {"description", e.description}};
    try {
      auto clip = trim(ctx.call(req, ActivationStage::Multimodal).text);
      if (clip.empty()) {
        ctx.trace().warn("no clip for " + e.id.str());
      } else {
        result.clips[e.id.str()] = clip;
      }
    } catch (const Error& err) {
      if (err.code() == ErrorCode::BudgetExhausted) throw;
      ctx.trace().warn("no clip for " + e.id.str() + ": " + err.what());
    }
  }

  std::string mm = serialize_graph(sub) + "\nClips:\n";
  json clips = json::object();
  if (result.clips.empty()) mm += "(none)\n";
  for (const auto& e : sub.events()) {
    auto it = result.clips.find(e.id.str());
    if (it == result.clips.end()) continue;
    mm += e.id.str() + ": " + it->second + "\n";
    clips[it->first] = it->second;
  }

  Slots slots = base_slots(ctx);
  slots["multimodal_graph"] = mm;
  OracleRequest req;
  req.oracle = OracleId::MultimodalAnswerer;
  req.prompt = render_prompt(templates::multimodal(), slots);
  req.args = json{{"video_ref", ctx.spec().video_ref}, {"clips", clips}};
  auto reply = ctx.call(req, ActivationStage::Multimodal);
  if (auto l = extract_answer_letter(reply.text)) {
    result.letter = *l;
    result.resolved = true;
  } else {
    ctx.trace().warn("multimodal answer had no letter; keeping " + std::string(1, fallback));
    result.letter = fallback;
  }
  return result;
}

}  // namespace eventqa
