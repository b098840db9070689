// SPDX-License-Identifier: Apache-2.0
#include "eventqa/plan.hpp"

namespace eventqa::plan {

namespace {

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out.push_back(c);
    }
  }
  out += '"';
  return out;
}

std::string list(const std::vector<std::string>& vars) {
  std::string out;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (i) out += ", ";
    out += vars[i];
  }
  return out;
}

std::string expr_text(const Expr& expr) {
  return std::visit(
      [](const auto& e) -> std::string {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, FindNode>) {
          std::string out = "find_node(" + quote(e.name);
          if (!e.hints.empty()) {
            out += ", {";
            for (std::size_t i = 0; i < e.hints.size(); ++i) {
              if (i) out += ", ";
              out += quote(e.hints[i].first) + ": " + quote(e.hints[i].second);
            }
            out += "}";
          }
          return out + ")";
        } else if constexpr (std::is_same_v<T, Traverse>) {
          return std::string(to_string(e.kind)) + "(" + e.var + ")";
        } else if constexpr (std::is_same_v<T, Union>) {
          return "union(" + list(e.vars) + ")";
        } else if constexpr (std::is_same_v<T, Count>) {
          return "count(" + e.var + ")";
        } else {
          return "{}";
        }
      },
      expr);
}

void print_into(std::string& out, const Stmt& stmt, int indent) {
  std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Bind>) {
          out += pad + s.var + " = " + expr_text(s.expr) + "\n";
        } else if constexpr (std::is_same_v<T, ForEach>) {
          out += pad + "foreach " + s.var + " in " +
                 (s.source == LoopSource::Nodes ? std::string("nodes") : "args(" + s.of + ")") +
                 " {\n";
          for (const auto& inner : s.body) print_into(out, inner, indent + 1);
          out += pad + "}\n";
        } else if constexpr (std::is_same_v<T, CollectWhen>) {
          out += pad + "when ask(" + quote(s.ask) + ") collect " + s.value + " into " + s.into + "\n";
        } else if constexpr (std::is_same_v<T, EnsureRelations>) {
          out += pad + "ensure nonempty(" + list(s.vars) + ")\n";
          out += pad + "  else graph " + quote(s.graph_request) + "\n";
          out += pad + "  caption " + quote(s.caption_request) + "\n";
          out += pad + "  retries " + std::to_string(s.retries) + "\n";
        } else if constexpr (std::is_same_v<T, Evidence>) {
          out += pad + "evidence " + quote(s.label) + " = " + s.var + "\n";
        } else {
          out += pad + "answer retries " + std::to_string(s.retries) + "\n";
        }
      },
      stmt.node);
}

}  // namespace

std::string print_stmt(const Stmt& stmt) {
  std::string out;
  print_into(out, stmt, 0);
  return out;
}

std::string print_plan(const PlanAST& ast) {
  std::string out;
  for (const auto& stmt : ast.statements) print_into(out, stmt, 0);
  return out;
}

}  // namespace eventqa::plan
