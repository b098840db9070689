// SPDX-License-Identifier: Apache-2.0
#include "eventqa/error.hpp"
#include "eventqa/plan.hpp"

#include <cctype>
#include <charconv>

namespace eventqa::plan {

namespace {

enum class Tok { Ident, String, Int, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourceLoc loc;
};

std::string at(const SourceLoc& loc) {
  return std::to_string(loc.line) + ":" + std::to_string(loc.column);
}

[[noreturn]] void fail(ErrorCode code, const SourceLoc& loc, const std::string& message) {
  throw Error(code, at(loc) + ": " + message);
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space_and_comments();
      SourceLoc loc{line_, col_};
      if (pos_ >= src_.size()) {
        out.push_back(Token{Tok::End, "", loc});
        return out;
      }
      char c = src_[pos_];
      if (c == '"') {
        out.push_back(Token{Tok::String, read_string(loc), loc});
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        std::string digits;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
          digits.push_back(advance());
        }
        out.push_back(Token{Tok::Int, digits, loc});
      } else if (std::islower(static_cast<unsigned char>(c)) || c == '_') {
        std::string word;
        while (pos_ < src_.size()) {
          char w = src_[pos_];
          if (std::islower(static_cast<unsigned char>(w)) || std::isdigit(static_cast<unsigned char>(w)) || w == '_') {
            word.push_back(advance());
          } else if (std::isupper(static_cast<unsigned char>(w))) {
            fail(ErrorCode::SyntaxError, SourceLoc{line_, col_},
                 "identifiers are lowercase ([a-z_][a-z0-9_]*)");
          } else {
            break;
          }
        }
        out.push_back(Token{Tok::Ident, word, loc});
      } else if (std::string_view("(){},=:").find(c) != std::string_view::npos) {
        out.push_back(Token{Tok::Punct, std::string(1, advance()), loc});
      } else {
        fail(ErrorCode::SyntaxError, loc, std::string("unexpected character '") + c + "'");
      }
    }
  }

 private:
  char advance() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_space_and_comments() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  std::string read_string(const SourceLoc& loc) {
    advance();  // opening quote
    std::string out;
    while (pos_ < src_.size()) {
      char c = advance();
      if (c == '"') return out;
      if (c == '\\') {
        if (pos_ >= src_.size()) break;
        char e = advance();
        switch (e) {
          case 'n': out.push_back('\n'); break;
          case 't': out.push_back('\t'); break;
          default: out.push_back(e); break;
        }
      } else {
        out.push_back(c);
      }
    }
    fail(ErrorCode::SyntaxError, loc, "unterminated string");
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  PlanAST program() {
    PlanAST ast;
    for (;;) {
      if (peek().kind == Tok::End) {
        fail(ErrorCode::SyntaxError, peek().loc, "plan must end with 'answer retries N'");
      }
      if (is_word("answer") && is_word("retries", 1)) {
        SourceLoc loc = peek().loc;
        next();
        next();
        ast.statements.push_back(Stmt{AnswerRetry{integer()}, loc});
        if (peek().kind != Tok::End) {
          fail(ErrorCode::SyntaxError, peek().loc, "'answer' must be the final statement");
        }
        return ast;
      }
      ast.statements.push_back(statement(false));
    }
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  bool is_word(std::string_view w, std::size_t ahead = 0) const {
    return peek(ahead).kind == Tok::Ident && peek(ahead).text == w;
  }
  bool is_punct(char c, std::size_t ahead = 0) const {
    return peek(ahead).kind == Tok::Punct && peek(ahead).text[0] == c;
  }

  static std::string describe(const Token& t) {
    switch (t.kind) {
      case Tok::End: return "end of plan";
      case Tok::String: return "string";
      case Tok::Int: return "integer " + t.text;
      default: return "'" + t.text + "'";
    }
  }

  void expect_punct(char c) {
    if (!is_punct(c)) {
      fail(ErrorCode::SyntaxError, peek().loc,
           std::string("expected '") + c + "', found " + describe(peek()));
    }
    next();
  }
  void expect_word(std::string_view w) {
    if (!is_word(w)) {
      fail(ErrorCode::SyntaxError, peek().loc,
           "expected '" + std::string(w) + "', found " + describe(peek()));
    }
    next();
  }
  std::string ident() {
    if (peek().kind != Tok::Ident) {
      fail(ErrorCode::SyntaxError, peek().loc, "expected identifier, found " + describe(peek()));
    }
    return next().text;
  }
  std::string string_lit() {
    if (peek().kind != Tok::String) {
      fail(ErrorCode::SyntaxError, peek().loc, "expected string, found " + describe(peek()));
    }
    return next().text;
  }
  int integer() {
    if (peek().kind != Tok::Int) {
      fail(ErrorCode::SyntaxError, peek().loc, "expected integer, found " + describe(peek()));
    }
    const Token& t = next();
    int value = 0;
    auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
    if (ec != std::errc()) fail(ErrorCode::SyntaxError, t.loc, "integer out of range");
    return value;
  }

  Stmt statement(bool in_loop) {
    SourceLoc loc = peek().loc;
    if (peek().kind == Tok::Ident && is_punct('=', 1)) {
      std::string var = next().text;
      next();
      return Stmt{Bind{var, expression()}, loc};
    }
    if (is_word("foreach")) return Stmt{foreach_stmt(), loc};
    if (is_word("ensure")) return Stmt{ensure_stmt(), loc};
    if (is_word("evidence")) {
      next();
      std::string label = string_lit();
      expect_punct('=');
      return Stmt{Evidence{label, ident()}, loc};
    }
    if (is_word("when")) {
      if (!in_loop) fail(ErrorCode::SyntaxError, loc, "'when ask' is only allowed inside foreach");
      next();
      expect_word("ask");
      expect_punct('(');
      CollectWhen c;
      c.ask = string_lit();
      expect_punct(')');
      expect_word("collect");
      c.value = ident();
      expect_word("into");
      c.into = ident();
      return Stmt{c, loc};
    }
    if (is_word("answer")) {
      fail(ErrorCode::SyntaxError, loc, "'answer' is only allowed as the final statement");
    }
    fail(ErrorCode::SyntaxError, loc, "expected a statement, found " + describe(peek()));
  }

  ForEach foreach_stmt() {
    expect_word("foreach");
    ForEach f;
    f.var = ident();
    expect_word("in");
    if (is_word("nodes")) {
      next();
      f.source = LoopSource::Nodes;
    } else if (is_word("args")) {
      next();
      expect_punct('(');
      f.source = LoopSource::ArgsOf;
      f.of = ident();
      expect_punct(')');
    } else {
      fail(ErrorCode::SyntaxError, peek().loc,
           "expected 'nodes' or 'args(...)', found " + describe(peek()));
    }
    expect_punct('{');
    while (!is_punct('}')) {
      if (peek().kind == Tok::End) fail(ErrorCode::SyntaxError, peek().loc, "unclosed foreach");
      f.body.push_back(statement(true));
    }
    next();
    return f;
  }

  EnsureRelations ensure_stmt() {
    expect_word("ensure");
    expect_word("nonempty");
    expect_punct('(');
    EnsureRelations e;
    e.vars.push_back(ident());
    while (is_punct(',')) {
      next();
      e.vars.push_back(ident());
    }
    expect_punct(')');
    expect_word("else");
    expect_word("graph");
    e.graph_request = string_lit();
    expect_word("caption");
    e.caption_request = string_lit();
    expect_word("retries");
    e.retries = integer();
    return e;
  }

  Expr expression() {
    if (is_punct('{')) {
      next();
      expect_punct('}');
      return EmptySet{};
    }
    if (peek().kind != Tok::Ident || !is_punct('(', 1)) {
      fail(ErrorCode::SyntaxError, peek().loc, "expected an expression, found " + describe(peek()));
    }
    const Token& fn = next();
    next();  // '('
    if (fn.text == "find_node") {
      FindNode f;
      f.name = string_lit();
      if (is_punct(',')) {
        next();
        expect_punct('{');
        do {
          if (is_punct(',')) next();
          std::string role = string_lit();
          expect_punct(':');
          f.hints.emplace_back(role, string_lit());
        } while (is_punct(','));
        expect_punct('}');
      }
      expect_punct(')');
      return f;
    }
    if (fn.text == "union") {
      Union u;
      u.vars.push_back(ident());
      while (is_punct(',')) {
        next();
        u.vars.push_back(ident());
      }
      expect_punct(')');
      return u;
    }
    if (fn.text == "count") {
      Count c{ident()};
      expect_punct(')');
      return c;
    }
    auto kind = traversal_from_keyword(fn.text);
    if (!kind) fail(ErrorCode::UnknownTraversal, fn.loc, "unknown traversal '" + fn.text + "'");
    Traverse t{ident(), *kind};
    expect_punct(')');
    return t;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

std::optional<TraversalKind> traversal_from_keyword(std::string_view word) {
  if (word == "children") return TraversalKind::Children;
  if (word == "parent") return TraversalKind::Parent;
  if (word == "after") return TraversalKind::TemporalAfter;
  if (word == "before") return TraversalKind::TemporalBefore;
  if (word == "caused_by") return TraversalKind::CausedBy;
  if (word == "resulted_in") return TraversalKind::ResultedIn;
  return std::nullopt;
}

PlanAST parse_plan(std::string_view text) {
  auto ast = Parser(Lexer(text).run()).program();
  for (const auto& d : validate_plan(ast)) {
    if (d.severity == Diagnostic::Severity::Error && d.rule == "unbound-variable") {
      throw Error(ErrorCode::UnboundVariable, at(d.loc) + ": " + d.message);
    }
  }
  return ast;
}

}  // namespace eventqa::plan
