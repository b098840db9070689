// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "eventqa/event_graph.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

// Reasoning plans: a closed, straight-line language over the event graph.
//
//   program   = { stmt } , answer ;
//   stmt      = bind | foreach | ensure | evidence ;
//   bind      = IDENT "=" expr ;
//   expr      = "find_node" "(" STRING [ "," argmap ] ")"
//             | kind "(" IDENT ")" | "union" "(" IDENT { "," IDENT } ")"
//             | "count" "(" IDENT ")" | "{}" ;
//   kind      = "children" | "parent" | "after" | "before"
//             | "caused_by" | "resulted_in" ;
//   foreach   = "foreach" IDENT "in" ( "nodes" | "args" "(" IDENT ")" )
//               "{" { stmt | collect } "}" ;
//   collect   = "when" "ask" "(" STRING ")" "collect" IDENT "into" IDENT ;
//   ensure    = "ensure" "nonempty" "(" IDENT { "," IDENT } ")"
//               "else" "graph" STRING "caption" STRING "retries" INT ;
//   evidence  = "evidence" STRING "=" IDENT ;
//   answer    = "answer" "retries" INT ;
//   argmap    = "{" STRING ":" STRING { "," STRING ":" STRING } "}" ;
//
// Keywords are contextual, so `after = after(node)` is legal. `#` starts a
// comment that runs to the end of the line.
namespace eventqa::plan {

struct SourceLoc {
  int line = 0;
  int column = 0;
};

struct FindNode {
  std::string name;
  ArgHints hints;
  bool operator==(const FindNode&) const = default;
};

struct Traverse {
  std::string var;
  TraversalKind kind;
  bool operator==(const Traverse&) const = default;
};

struct Union {
  std::vector<std::string> vars;
  bool operator==(const Union&) const = default;
};

struct Count {
  std::string var;
  bool operator==(const Count&) const = default;
};

struct EmptySet {
  bool operator==(const EmptySet&) const = default;
};

using Expr = std::variant<FindNode, Traverse, Union, Count, EmptySet>;

struct Stmt;

struct Bind {
  std::string var;
  Expr expr;
  bool operator==(const Bind&) const = default;
};

enum class LoopSource { Nodes, ArgsOf };

struct ForEach {
  std::string var;
  LoopSource source = LoopSource::Nodes;
  std::string of;  // event variable for ArgsOf
  std::vector<Stmt> body;
  bool operator==(const ForEach&) const;
};

// `when ask(template) collect value into set`; `{value}` in the template is
// replaced by the collected variable's text.
struct CollectWhen {
  std::string ask;
  std::string value;
  std::string into;
  bool operator==(const CollectWhen&) const = default;
};

struct EnsureRelations {
  std::vector<std::string> vars;
  std::string graph_request;
  std::string caption_request;
  int retries = 1;
  bool operator==(const EnsureRelations&) const = default;
};

struct Evidence {
  std::string label;
  std::string var;
  bool operator==(const Evidence&) const = default;
};

struct AnswerRetry {
  int retries = 1;
  bool operator==(const AnswerRetry&) const = default;
};

struct Stmt {
  std::variant<Bind, ForEach, CollectWhen, EnsureRelations, Evidence, AnswerRetry> node;
  SourceLoc loc;

  // Locations do not take part in equality.
  bool operator==(const Stmt& other) const { return node == other.node; }
};

inline bool ForEach::operator==(const ForEach& o) const {
  return var == o.var && source == o.source && of == o.of && body == o.body;
}

struct PlanAST {
  std::vector<Stmt> statements;
  bool operator==(const PlanAST&) const = default;
};

struct Diagnostic {
  enum class Severity { Error, Warning };
  Severity severity = Severity::Error;
  SourceLoc loc;
  std::string message;
  std::string rule;  // stable identifier, e.g. "unbound-variable"
};

struct ValidationOptions {
  int retry_ceiling = 4;
};

// Throws Error(SyntaxError | UnknownTraversal | UnboundVariable); messages
// carry "line:column".
PlanAST parse_plan(std::string_view text);

std::vector<Diagnostic> validate_plan(const PlanAST& ast, const ValidationOptions& options = {});
bool has_errors(const std::vector<Diagnostic>& diagnostics);
std::string format_diagnostic(const Diagnostic& d);

// Canonical text form; parse_plan(print_plan(ast)) == ast.
std::string print_plan(const PlanAST& ast);
std::string print_stmt(const Stmt& stmt);

std::optional<TraversalKind> traversal_from_keyword(std::string_view word);

// Variables read by a statement (not counting loop-local names it introduces).
std::vector<std::string> reads_of(const Stmt& stmt);
// Variables a statement defines or accumulates into at its own scope level.
std::vector<std::string> writes_of(const Stmt& stmt);

}  // namespace eventqa::plan
