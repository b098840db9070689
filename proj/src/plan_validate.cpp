// SPDX-License-Identifier: Apache-2.0
#include "eventqa/plan.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace eventqa::plan {

namespace {

enum class VarType { Node, Collection, Number, ArgValue };

std::string type_name(VarType t) {
  switch (t) {
    case VarType::Node: return "event";
    case VarType::Collection: return "collection";
    case VarType::Number: return "number";
    case VarType::ArgValue: return "argument value";
  }
  return "value";
}

std::size_t count_value_placeholders(std::string_view text) {
  std::size_t n = 0;
  for (auto pos = text.find("{value}"); pos != std::string_view::npos;
       pos = text.find("{value}", pos + 1)) {
    ++n;
  }
  return n;
}

class Validator {
 public:
  explicit Validator(const ValidationOptions& options) : options_(options) {}

  std::vector<Diagnostic> run(const PlanAST& ast) {
    scopes_.emplace_back();
    std::size_t answers = 0;
    for (std::size_t i = 0; i < ast.statements.size(); ++i) {
      const auto& stmt = ast.statements[i];
      if (const auto* a = std::get_if<AnswerRetry>(&stmt.node)) {
        ++answers;
        if (answers == 2) error(stmt.loc, "answer-count", "plan has more than one answer statement");
        if (answers == 1 && i + 1 != ast.statements.size()) {
          bool later_answer = false;
          for (std::size_t j = i + 1; j < ast.statements.size(); ++j) {
            later_answer |= std::holds_alternative<AnswerRetry>(ast.statements[j].node);
          }
          if (!later_answer) {
            error(stmt.loc, "answer-position", "answer must be the final statement");
          }
        }
        check_retries(stmt.loc, a->retries, "answer");
        continue;
      }
      statement(stmt, 0);
    }
    if (answers == 0) error(SourceLoc{}, "answer-count", "plan has no answer statement");
    return std::move(out_);
  }

 private:
  void error(const SourceLoc& loc, std::string rule, std::string message) {
    out_.push_back(Diagnostic{Diagnostic::Severity::Error, loc, std::move(message), std::move(rule)});
  }
  void warning(const SourceLoc& loc, std::string rule, std::string message) {
    out_.push_back(
        Diagnostic{Diagnostic::Severity::Warning, loc, std::move(message), std::move(rule)});
  }

  std::optional<VarType> lookup(const std::string& var) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      if (auto f = it->find(var); f != it->end()) return f->second;
    }
    return std::nullopt;
  }

  std::optional<VarType> use(const SourceLoc& loc, const std::string& var) {
    auto t = lookup(var);
    if (!t) error(loc, "unbound-variable", "variable '" + var + "' is used before it is bound");
    return t;
  }

  void define(const SourceLoc& loc, const std::string& var, VarType type) {
    if (lookup(var)) {
      error(loc, "rebinding", "variable '" + var + "' is already bound");
      return;
    }
    scopes_.back()[var] = type;
  }

  void check_retries(const SourceLoc& loc, int retries, const char* what) {
    if (retries < 1) {
      error(loc, "retries-positive", std::string(what) + " retries must be at least 1");
    } else if (retries > options_.retry_ceiling) {
      warning(loc, "retries-ceiling",
              std::string(what) + " retries " + std::to_string(retries) + " exceed the ceiling of " +
                  std::to_string(options_.retry_ceiling));
    }
  }

  std::optional<VarType> expression(const SourceLoc& loc, const Expr& expr) {
    return std::visit(
        [&](const auto& e) -> std::optional<VarType> {
          using T = std::decay_t<decltype(e)>;
          if constexpr (std::is_same_v<T, FindNode>) {
            if (e.name.empty()) error(loc, "empty-name", "find_node needs an event name");
            return VarType::Node;
          } else if constexpr (std::is_same_v<T, Traverse>) {
            auto t = use(loc, e.var);
            if (t && *t != VarType::Node && *t != VarType::Collection) {
              error(loc, "type", std::string(to_string(e.kind)) + "() needs an event, '" + e.var +
                                     "' is a " + type_name(*t));
            }
            return VarType::Collection;
          } else if constexpr (std::is_same_v<T, Union>) {
            for (const auto& v : e.vars) {
              auto t = use(loc, v);
              if (t && *t == VarType::Number) {
                error(loc, "type", "union() cannot take the number '" + v + "'");
              }
            }
            return VarType::Collection;
          } else if constexpr (std::is_same_v<T, Count>) {
            auto t = use(loc, e.var);
            if (t && *t == VarType::Number) error(loc, "type", "count() of a number");
            return VarType::Number;
          } else {
            return VarType::Collection;
          }
        },
        expr);
  }

  void statement(const Stmt& stmt, int depth) {
    const auto& loc = stmt.loc;
    if (const auto* b = std::get_if<Bind>(&stmt.node)) {
      auto t = expression(loc, b->expr);
      define(loc, b->var, t.value_or(VarType::Collection));
    } else if (const auto* f = std::get_if<ForEach>(&stmt.node)) {
      if (f->source == LoopSource::ArgsOf) {
        auto t = use(loc, f->of);
        if (t && *t != VarType::Node) {
          error(loc, "type", "args() needs an event, '" + f->of + "' is a " + type_name(*t));
        }
      }
      if (lookup(f->var)) {
        error(loc, "rebinding", "loop variable '" + f->var + "' is already bound");
      }
      scopes_.emplace_back();
      scopes_.back()[f->var] = f->source == LoopSource::Nodes ? VarType::Node : VarType::ArgValue;
      for (const auto& inner : f->body) statement(inner, depth + 1);
      scopes_.pop_back();
    } else if (const auto* c = std::get_if<CollectWhen>(&stmt.node)) {
      if (depth == 0) error(loc, "collect-outside-loop", "'when ask' must be inside foreach");
      if (count_value_placeholders(c->ask) > 1) {
        error(loc, "ask-template", "ask template has more than one {value} placeholder");
      }
      use(loc, c->value);
      auto into = use(loc, c->into);
      if (into && *into != VarType::Collection) {
        error(loc, "type", "collect target '" + c->into + "' is a " + type_name(*into));
      }
    } else if (const auto* e = std::get_if<EnsureRelations>(&stmt.node)) {
      if (depth > 0) error(loc, "ensure-in-loop", "ensure is only allowed at the top level");
      if (e->vars.empty()) warning(loc, "ensure-vacuous", "ensure lists no variables");
      for (const auto& v : e->vars) use(loc, v);
      check_retries(loc, e->retries, "ensure");
    } else if (const auto* ev = std::get_if<Evidence>(&stmt.node)) {
      if (depth > 0) error(loc, "evidence-in-loop", "evidence is only allowed at the top level");
      if (!labels_.insert(ev->label).second) {
        error(loc, "evidence-label", "duplicate evidence label \"" + ev->label + "\"");
      }
      use(loc, ev->var);
    } else if (std::holds_alternative<AnswerRetry>(stmt.node)) {
      error(loc, "answer-position", "answer must be the final top-level statement");
    }
  }

  ValidationOptions options_;
  std::vector<std::map<std::string, VarType>> scopes_;
  std::set<std::string> labels_;
  std::vector<Diagnostic> out_;
};

}  // namespace

std::vector<Diagnostic> validate_plan(const PlanAST& ast, const ValidationOptions& options) {
  return Validator(options).run(ast);
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(), [](const Diagnostic& d) {
    return d.severity == Diagnostic::Severity::Error;
  });
}

std::string format_diagnostic(const Diagnostic& d) {
  return std::to_string(d.loc.line) + ":" + std::to_string(d.loc.column) + ": " +
         (d.severity == Diagnostic::Severity::Error ? "error" : "warning") + ": " + d.message +
         " [" + d.rule + "]";
}

std::vector<std::string> reads_of(const Stmt& stmt) {
  std::vector<std::string> out;
  auto add = [&](const std::string& v) {
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  };
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Bind>) {
          std::visit(
              [&](const auto& e) {
                using E = std::decay_t<decltype(e)>;
                if constexpr (std::is_same_v<E, Traverse> || std::is_same_v<E, Count>) {
                  add(e.var);
                } else if constexpr (std::is_same_v<E, Union>) {
                  for (const auto& v : e.vars) add(v);
                }
              },
              s.expr);
        } else if constexpr (std::is_same_v<T, ForEach>) {
          if (s.source == LoopSource::ArgsOf) add(s.of);
          std::set<std::string> local = {s.var};
          for (const auto& inner : s.body) {
            for (const auto& w : writes_of(inner)) {
              if (std::holds_alternative<Bind>(inner.node)) local.insert(w);
            }
            for (const auto& r : reads_of(inner)) {
              if (!local.count(r)) add(r);
            }
          }
        } else if constexpr (std::is_same_v<T, CollectWhen>) {
          add(s.value);
          add(s.into);
        } else if constexpr (std::is_same_v<T, EnsureRelations>) {
          for (const auto& v : s.vars) add(v);
        } else if constexpr (std::is_same_v<T, Evidence>) {
          add(s.var);
        }
      },
      stmt.node);
  return out;
}

std::vector<std::string> writes_of(const Stmt& stmt) {
  std::vector<std::string> out;
  if (const auto* b = std::get_if<Bind>(&stmt.node)) {
    out.push_back(b->var);
  } else if (const auto* c = std::get_if<CollectWhen>(&stmt.node)) {
    out.push_back(c->into);
  } else if (const auto* f = std::get_if<ForEach>(&stmt.node)) {
    std::set<std::string> local = {f->var};
    for (const auto& inner : f->body) {
      for (const auto& w : writes_of(inner)) {
        if (std::holds_alternative<Bind>(inner.node)) {
          local.insert(w);
        } else if (!local.count(w) &&
                   std::find(out.begin(), out.end(), w) == out.end()) {
          out.push_back(w);
        }
      }
    }
  }
  return out;
}

}  // namespace eventqa::plan
