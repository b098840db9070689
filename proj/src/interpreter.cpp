// SPDX-License-Identifier: Apache-2.0
#include "eventqa/interpreter.hpp"

#include "eventqa/error.hpp"
#include "eventqa/oracles.hpp"
#include "eventqa/orchestrator.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

namespace eventqa {

namespace {

using namespace plan;

struct Item {
  std::optional<EventId> node;
  std::string text;  // argument value; empty for nodes

  bool operator==(const Item&) const = default;
};

struct Value {
  enum class Kind { Missing, Node, Collection, Number };
  Kind kind = Kind::Missing;
  EventId node;
  std::vector<Item> items;
  long long number = 0;

  static Value missing() { return {}; }
  static Value of_node(EventId id) {
    Value v;
    v.kind = Kind::Node;
    v.node = std::move(id);
    return v;
  }
  static Value collection(std::vector<Item> items = {}) {
    Value v;
    v.kind = Kind::Collection;
    v.items = std::move(items);
    return v;
  }
  static Value arg(std::string text) { return collection({Item{std::nullopt, std::move(text)}}); }

  bool nonempty() const {
    switch (kind) {
      case Kind::Missing: return false;
      case Kind::Node: return true;
      case Kind::Collection: return !items.empty();
      case Kind::Number: return number > 0;
    }
    return false;
  }
};

std::string_view kind_name(const Stmt& s) {
  return std::visit(
      [](const auto& n) -> std::string_view {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Bind>) return "bind";
        if constexpr (std::is_same_v<T, ForEach>) return "foreach";
        if constexpr (std::is_same_v<T, CollectWhen>) return "collect";
        if constexpr (std::is_same_v<T, EnsureRelations>) return "ensure";
        if constexpr (std::is_same_v<T, Evidence>) return "evidence";
        return "answer";
      },
      s.node);
}

class Interpreter {
 public:
  Interpreter(const PlanAST& ast, RunContext& ctx) : ast_(ast), ctx_(ctx) { scopes_.emplace_back(); }

  Outcome run() {
    Outcome out;
    try {
      for (std::size_t i = 0; i < ast_.statements.size(); ++i) {
        if (auto* a = std::get_if<AnswerRetry>(&ast_.statements[i].node)) {
          record(i, false);
          answer(*a, out);
          break;
        }
        exec_top(i, false);
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::BudgetExhausted) throw;
      ctx_.trace().error(e.what());
      return unresolved_outcome(ctx_, std::move(evidence_));
    }
    out.evidence = std::move(evidence_);
    return finish(std::move(out));
  }

 private:
  Outcome finish(Outcome out) {
    out.question_id = ctx_.spec().id;
    out.final_graph = ctx_.graph();
    out.final_caption = ctx_.caption();
    out.stages = ctx_.trace().stages;
    if (out.stages.empty()) out.stages.insert(ActivationStage::Base);
    ctx_.trace().answer = out.answer;
    ctx_.trace().unresolved = out.unresolved;
    out.trace = ctx_.trace();
    return out;
  }

  void record(std::size_t index, bool replay) {
    ctx_.trace().statements.push_back({index, std::string(kind_name(ast_.statements[index])),
                                       ctx_.graph_version(), replay});
  }

  void exec_top(std::size_t index, bool replay) {
    record(index, replay);
    const Stmt& s = ast_.statements[index];
    if (auto* e = std::get_if<EnsureRelations>(&s.node)) {
      ensure(index, *e);
      return;
    }
    exec(s, replay);
  }

  void exec(const Stmt& s, bool replay) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Bind>) {
            // Replays overwrite the earlier binding on purpose.
            scopes_.back()[n.var] = eval(n.expr);
          } else if constexpr (std::is_same_v<T, ForEach>) {
            foreach_loop(n, replay);
          } else if constexpr (std::is_same_v<T, CollectWhen>) {
            collect(n);
          } else if constexpr (std::is_same_v<T, Evidence>) {
            add_evidence(n);
          } else {
            throw Error(ErrorCode::InvalidArgument,
                        "statement not allowed here: " + std::string(kind_name(s)));
          }
        },
        s.node);
  }

  Value& lookup(const std::string& name) {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto found = it->find(name);
      if (found != it->end()) return found->second;
    }
    throw Error(ErrorCode::UnboundVariable, name);
  }

  const Event* event_of(const Value& v) const {
    return v.kind == Value::Kind::Node ? ctx_.graph().find(v.node) : nullptr;
  }

  std::vector<Item> items_of(const Value& v) const {
    switch (v.kind) {
      case Value::Kind::Node: return {Item{v.node, ""}};
      case Value::Kind::Collection: return v.items;
      default: return {};
    }
  }

  Value eval(const Expr& expr) {
    return std::visit(
        [&](const auto& e) -> Value {
          using T = std::decay_t<decltype(e)>;
          if constexpr (std::is_same_v<T, FindNode>) {
            try {
              return Value::of_node(find_node(ctx_.graph(), e.name, e.hints).id);
            } catch (const Error& err) {
              if (err.code() != ErrorCode::NodeNotFound) throw;
              ctx_.trace().warn("find_node(\"" + e.name + "\"): missing information");
              return Value::missing();
            }
          } else if constexpr (std::is_same_v<T, Traverse>) {
            const Value& from = lookup(e.var);
            if (from.kind != Value::Kind::Node) return Value::collection();
            std::vector<Item> items;
            for (const auto& ev : traverse(ctx_.graph(), from.node, e.kind))
              items.push_back({ev.id, ""});
            return Value::collection(std::move(items));
          } else if constexpr (std::is_same_v<T, Union>) {
            std::vector<Item> items;
            for (const auto& name : e.vars)
              for (auto& item : items_of(lookup(name)))
                if (std::find(items.begin(), items.end(), item) == items.end())
                  items.push_back(std::move(item));
            return Value::collection(std::move(items));
          } else if constexpr (std::is_same_v<T, Count>) {
            Value v;
            v.kind = Value::Kind::Number;
            v.number = static_cast<long long>(items_of(lookup(e.var)).size());
            return v;
          } else {
            return Value::collection();
          }
        },
        expr);
  }

  void foreach_loop(const ForEach& loop, bool replay) {
    std::vector<Value> values;
    const Event* owner = nullptr;
    if (loop.source == LoopSource::Nodes) {
      for (const auto& ev : ctx_.graph().events()) values.push_back(Value::of_node(ev.id));
    } else {
      owner = event_of(lookup(loop.of));
      if (owner)
        for (const auto& [role, vals] : owner->args)
          for (const auto& v : vals) values.push_back(Value::arg(v));
    }
    for (auto& v : values) {
      scopes_.emplace_back();
      const Event* ev = v.kind == Value::Kind::Node ? ctx_.graph().find(v.node) : owner;
      if (ev) loop_events_.push_back(ev);
      scopes_.back()[loop.var] = std::move(v);
      for (const auto& s : loop.body) exec(s, replay);
      if (ev) loop_events_.pop_back();
      scopes_.pop_back();
    }
  }

  void collect(const CollectWhen& c) {
    const Value value = lookup(c.value);
    std::string text;
    const Event* subject = loop_events_.empty() ? nullptr : loop_events_.back();
    if (value.kind == Value::Kind::Node) {
      text = value.node.str();
      subject = ctx_.graph().find(value.node);
    } else if (value.kind == Value::Kind::Collection && !value.items.empty()) {
      const auto& item = value.items.front();
      text = item.node ? item.node->str() : item.text;
    }
    std::string query = c.ask;
    if (auto pos = query.find("{value}"); pos != std::string::npos) query.replace(pos, 7, text);

    auto req = simple_query_request(subject ? subject->description : text, query);
    auto reply = ctx_.call(req, current_stage(ctx_.trace()));
    bool yes = false;
    try {
      yes = interpret_yes_no(reply.text);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::UninterpretableYesNo) throw;
      ctx_.trace().warn(std::string(e.what()) + "; treated as no");
    }
    if (!yes) return;

    Value& into = lookup(c.into);
    if (into.kind != Value::Kind::Collection) into = Value::collection();
    for (auto& item : items_of(value))
      if (std::find(into.items.begin(), into.items.end(), item) == into.items.end())
        into.items.push_back(std::move(item));
  }

  std::string describe(const Item& item) const {
    if (!item.node) return item.text;
    const Event* ev = ctx_.graph().find(*item.node);
    return ev ? ev->description : item.node->str();
  }

  void add_evidence(const Evidence& e) {
    const Value& v = lookup(e.var);
    switch (v.kind) {
      case Value::Kind::Missing: evidence_.add(e.label, "none"); break;
      case Value::Kind::Node: evidence_.add(e.label, describe(Item{v.node, ""})); break;
      case Value::Kind::Number: evidence_.add(e.label, std::to_string(v.number)); break;
      case Value::Kind::Collection: {
        std::vector<std::string> items;
        for (const auto& item : v.items) items.push_back(describe(item));
        evidence_.add_list(e.label, std::move(items));
        break;
      }
    }
  }

  // Top-level statements before `index` that the watched variables depend on.
  std::vector<std::size_t> dependency_prefix(std::size_t index,
                                             const std::vector<std::string>& vars) const {
    std::set<std::string> needed(vars.begin(), vars.end());
    std::vector<std::size_t> deps;
    for (std::size_t i = index; i-- > 0;) {
      const auto& s = ast_.statements[i];
      auto writes = writes_of(s);
      bool hit = std::any_of(writes.begin(), writes.end(),
                             [&](const std::string& w) { return needed.count(w) > 0; });
      if (!hit) continue;
      deps.push_back(i);
      for (auto& r : reads_of(s)) needed.insert(std::move(r));
    }
    std::reverse(deps.begin(), deps.end());
    return deps;
  }

  void ensure(std::size_t index, const EnsureRelations& e) {
    auto deps = dependency_prefix(index, e.vars);
    ReplayableBindings bindings;
    bindings.nonempty = [&] {
      return std::any_of(e.vars.begin(), e.vars.end(),
                         [&](const std::string& v) { return lookup(v).nonempty(); });
    };
    bindings.replay = [&, deps] {
      for (auto i : deps) exec_top(i, true);
    };
    for (auto i : deps) {
      const auto* b = std::get_if<Bind>(&ast_.statements[i].node);
      if (b && std::holds_alternative<FindNode>(b->expr)) {
        const Value& v = lookup(b->var);
        if (v.kind == Value::Kind::Node) bindings.anchor = v.node;
        break;
      }
    }
    int retries = std::min(e.retries, ctx_.budgets().graph_retries);
    if (retries < e.retries)
      ctx_.trace().warn("ensure retries clamped to " + std::to_string(retries));
    if (!ensure_relations(ctx_, bindings, e.graph_request, e.caption_request, retries))
      ctx_.trace().warn("ensure at statement " + std::to_string(index) +
                        ": relations still missing");
  }

  std::vector<EventId> multimodal_seeds() {
    std::vector<EventId> anchors;
    for (const auto& s : ast_.statements) {
      const auto* b = std::get_if<Bind>(&s.node);
      if (!b || !std::holds_alternative<FindNode>(b->expr)) continue;
      const Value& v = lookup(b->var);
      if (v.kind == Value::Kind::Node &&
          std::find(anchors.begin(), anchors.end(), v.node) == anchors.end())
        anchors.push_back(v.node);
    }
    if (ctx_.seed_policy() == SeedPolicy::Anchors) return anchors;
    std::vector<EventId> parents;
    for (const auto& a : anchors)
      for (const auto& p : traverse(ctx_.graph(), a, TraversalKind::Parent))
        if (std::find(parents.begin(), parents.end(), p.id) == parents.end())
          parents.push_back(p.id);
    return parents.empty() ? anchors : parents;
  }

  void answer(const AnswerRetry& a, Outcome& out) {
    int retries = std::min(a.retries, ctx_.budgets().answer_retries);
    if (retries < a.retries) ctx_.trace().warn("answer retries clamped to " + std::to_string(retries));
    auto result = answer_with_retry(ctx_, evidence_, retries);
    out.answer = result.letter;
    out.unresolved = false;
    if (!result.unsure) return;

    const auto& stages = ctx_.trace().stages;
    if (stages.count(ActivationStage::DenserGraph) && stages.count(ActivationStage::DenserCaption)) {
      auto mm = multimodal_fallback(ctx_, multimodal_seeds(), result.letter);
      out.answer = mm.letter;
      out.unresolved = !mm.resolved;
    } else {
      ctx_.trace().warn("still unsure; multimodal stage needs prior denser graph and denser "
                        "caption attempts");
      out.unresolved = true;
    }
  }

  const PlanAST& ast_;
  RunContext& ctx_;
  EvidenceMap evidence_;
  std::vector<std::map<std::string, Value>> scopes_;
  std::vector<const Event*> loop_events_;
};

bool is_letter(char c) {
  char u = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return u >= 'A' && u <= 'E';
}

bool is_word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

}  // namespace

ActivationStage Outcome::max_stage() const {
  return stages.empty() ? ActivationStage::Base : *stages.rbegin();
}

Outcome interpret(const PlanAST& ast, RunContext& ctx) { return Interpreter(ast, ctx).run(); }

Outcome unresolved_outcome(RunContext& ctx, EvidenceMap evidence) {
  Outcome out;
  out.question_id = ctx.spec().id;
  out.answer = ctx.best_guess.value_or('A');
  out.unresolved = true;
  out.evidence = std::move(evidence);
  out.final_graph = ctx.graph();
  out.final_caption = ctx.caption();
  out.stages = ctx.trace().stages;
  if (out.stages.empty()) out.stages.insert(ActivationStage::Base);
  ctx.trace().answer = out.answer;
  ctx.trace().unresolved = true;
  out.trace = ctx.trace();
  return out;
}

std::optional<char> extract_answer_letter(std::string_view text) {
  auto standalone = [&](std::size_t i) {
    bool left = i == 0 || !is_word_char(text[i - 1]);
    bool right = i + 1 >= text.size() || !is_word_char(text[i + 1]);
    return is_letter(text[i]) && left && right;
  };
  // Dotted abbreviations such as "e.g." or "i.e."
  auto abbreviation = [&](std::size_t i) {
    bool dot_word = i + 2 < text.size() && text[i + 1] == '.' && is_word_char(text[i + 2]);
    bool word_dot = i >= 2 && text[i - 1] == '.' && is_word_char(text[i - 2]);
    return dot_word || word_dot;
  };
  auto marked = [&](std::size_t i) {
    if (i > 0 && text[i - 1] == '(') return true;
    if (i + 1 >= text.size()) return false;
    char next = text[i + 1];
    if (next == ')') return true;
    // "d." but not the "e." of "e.g."
    return next == '.' && (i + 2 >= text.size() || !is_word_char(text[i + 2]));
  };
  auto upper = [](char c) { return static_cast<char>(std::toupper(static_cast<unsigned char>(c))); };

  for (std::size_t i = 0; i < text.size(); ++i)
    if (standalone(i) && !abbreviation(i) && (std::isupper(static_cast<unsigned char>(text[i])) || marked(i)))
      return upper(text[i]);
  for (std::size_t i = 0; i < text.size(); ++i)
    if (standalone(i) && !abbreviation(i)) return upper(text[i]);
  return std::nullopt;
}

}  // namespace eventqa
