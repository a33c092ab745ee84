#include <optional>
#include <set>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "lexer.hpp"
#include "tyfix/syntax.hpp"

namespace tyfix::syntax {
namespace {

using detail::Token;
using detail::TokenKind;

const std::unordered_set<std::string_view> kKeywords = {
    "False", "None", "True", "and", "as", "assert", "async", "await", "break",
    "class", "continue", "def", "del", "elif", "else", "except", "finally", "for",
    "from", "global", "if", "import", "in", "is", "lambda", "nonlocal", "not",
    "or", "pass", "raise", "return", "try", "while", "with", "yield"};

const std::unordered_map<std::string_view, std::string_view> kBinOps = {
    {"+", "Add"},    {"-", "Sub"},     {"*", "Mult"},   {"@", "MatMult"}, {"/", "Div"},
    {"%", "Mod"},    {"**", "Pow"},    {"<<", "LShift"}, {">>", "RShift"}, {"|", "BitOr"},
    {"^", "BitXor"}, {"&", "BitAnd"},  {"//", "FloorDiv"}};

const std::unordered_map<std::string_view, std::string_view> kAugOps = {
    {"+=", "Add"},    {"-=", "Sub"},     {"*=", "Mult"},    {"@=", "MatMult"},
    {"/=", "Div"},    {"%=", "Mod"},     {"**=", "Pow"},    {"<<=", "LShift"},
    {">>=", "RShift"}, {"|=", "BitOr"},  {"^=", "BitXor"},  {"&=", "BitAnd"},
    {"//=", "FloorDiv"}};

const std::unordered_map<std::string_view, std::string_view> kCompareOps = {
    {"==", "Eq"}, {"!=", "NotEq"}, {"<", "Lt"}, {"<=", "LtE"}, {">", "Gt"}, {">=", "GtE"}};

Node make(std::string kind, std::string value = {}) {
  Node n;
  n.kind = std::move(kind);
  n.value = std::move(value);
  return n;
}

void add(Node& parent, std::string relation, Node child) {
  parent.children.push_back(Child{std::move(relation), std::move(child)});
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  Node parse_module() {
    Node mod = make("Module");
    mod.span.start = {1, 0};
    while (!at(TokenKind::End)) {
      if (at(TokenKind::Newline)) {
        ++pos_;
        continue;
      }
      parse_statement_into(mod, "body");
    }
    mod.span.end = toks_.back().end;
    if (!mod.children.empty()) mod.span.end = mod.children.back().node.span.end;
    return mod;
  }

 private:
  // ---- token helpers -------------------------------------------------------
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return toks_[i < toks_.size() ? i : toks_.size() - 1];
  }
  bool at(TokenKind k) const { return peek().kind == k; }
  bool at_op(std::string_view op, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == TokenKind::Op && t.text == op;
  }
  bool at_kw(std::string_view kw, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == TokenKind::Name && t.text == kw;
  }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  Position last_end() const { return pos_ > 0 ? toks_[pos_ - 1].end : toks_[0].start; }

  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    std::string got = t.kind == TokenKind::Newline ? "newline"
                      : t.kind == TokenKind::End   ? "end of file"
                      : t.kind == TokenKind::Indent ? "indent"
                      : t.kind == TokenKind::Dedent ? "dedent"
                                                    : "'" + t.text + "'";
    throw SyntaxError(msg + " (got " + got + ")", t.start.line, t.start.col);
  }
  void expect_op(std::string_view op) {
    if (!at_op(op)) fail("expected '" + std::string(op) + "'");
    ++pos_;
  }
  void expect_kw(std::string_view kw) {
    if (!at_kw(kw)) fail("expected '" + std::string(kw) + "'");
    ++pos_;
  }
  std::string expect_name() {
    const Token& t = peek();
    if (t.kind != TokenKind::Name || kKeywords.count(t.text)) fail("expected identifier");
    ++pos_;
    return t.text;
  }
  bool accept_op(std::string_view op) {
    if (at_op(op)) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool accept_kw(std::string_view kw) {
    if (at_kw(kw)) {
      ++pos_;
      return true;
    }
    return false;
  }

  Node& finish(Node& n, Position start) {
    n.span.start = start;
    n.span.end = last_end();
    return n;
  }

  // ---- statements ----------------------------------------------------------
  void parse_statement_into(Node& parent, const std::string& relation) {
    if (is_compound_start()) {
      add(parent, relation, parse_compound());
      return;
    }
    // simple_stmts: small (';' small)* [';'] NEWLINE
    for (;;) {
      add(parent, relation, parse_small());
      if (accept_op(";")) {
        if (at(TokenKind::Newline)) break;
        continue;
      }
      break;
    }
    if (!at(TokenKind::Newline)) fail("expected newline");
    ++pos_;
  }

  bool is_compound_start() const {
    const Token& t = peek();
    if (t.kind == TokenKind::Op && t.text == "@") return true;
    if (t.kind != TokenKind::Name) return false;
    static const std::set<std::string_view> starts = {"if", "while", "for", "try", "with",
                                                      "def", "class"};
    if (starts.count(t.text)) return true;
    if (t.text == "async") {
      const Token& n = peek(1);
      return n.kind == TokenKind::Name && (n.text == "def" || n.text == "for" || n.text == "with");
    }
    return false;
  }

  void parse_block(Node& owner, const std::string& relation) {
    expect_op(":");
    if (at(TokenKind::Newline)) {
      ++pos_;
      if (!at(TokenKind::Indent)) fail("expected an indented block");
      ++pos_;
      while (!at(TokenKind::Dedent) && !at(TokenKind::End)) {
        if (at(TokenKind::Newline)) {
          ++pos_;
          continue;
        }
        parse_statement_into(owner, relation);
      }
      if (at(TokenKind::Dedent)) ++pos_;
    } else {
      parse_statement_into(owner, relation);
    }
  }

  Position block_end(const Node& n) const {
    return n.children.empty() ? n.span.end : n.children.back().node.span.end;
  }

  Node parse_compound() {
    Position start = peek().start;
    if (at_op("@")) {
      std::vector<Node> decorators;
      while (accept_op("@")) {
        decorators.push_back(parse_namedexpr_test());
        if (!at(TokenKind::Newline)) fail("expected newline after decorator");
        ++pos_;
      }
      if (!at_kw("def") && !at_kw("class") && !(at_kw("async") && at_kw("def", 1))) {
        fail("expected function or class definition after decorator");
      }
      Node n = parse_compound();
      std::vector<Child> kids;
      for (auto& d : decorators) kids.push_back(Child{"decorator_list", std::move(d)});
      for (auto& c : n.children) kids.push_back(std::move(c));
      n.children = std::move(kids);
      n.span.start = start;
      return n;
    }
    if (accept_kw("async")) {
      Node n = parse_compound();
      n.kind = "Async" + n.kind;
      n.span.start = start;
      return n;
    }
    if (accept_kw("if")) return parse_if_tail(start);
    if (accept_kw("while")) {
      Node n = make("While");
      add(n, "test", parse_namedexpr_test());
      parse_block(n, "body");
      if (at_kw("else")) {
        ++pos_;
        parse_block(n, "orelse");
      }
      n.span = {start, block_end(n)};
      return n;
    }
    if (accept_kw("for")) {
      Node n = make("For");
      add(n, "target", parse_target_list());
      expect_kw("in");
      add(n, "iter", parse_testlist_star());
      parse_block(n, "body");
      if (accept_kw("else")) parse_block(n, "orelse");
      n.span = {start, block_end(n)};
      return n;
    }
    if (accept_kw("try")) return parse_try(start);
    if (accept_kw("with")) {
      Node n = make("With");
      do {
        Position is = peek().start;
        Node item = make("withitem");
        add(item, "context_expr", parse_test());
        if (accept_kw("as")) add(item, "optional_vars", parse_target());
        finish(item, is);
        add(n, "items", std::move(item));
      } while (accept_op(","));
      parse_block(n, "body");
      n.span = {start, block_end(n)};
      return n;
    }
    if (accept_kw("def")) {
      Node n = make("FunctionDef", expect_name());
      expect_op("(");
      add(n, "args", parse_arguments(")", true));
      expect_op(")");
      if (accept_op("->")) add(n, "returns", parse_test());
      parse_block(n, "body");
      n.span = {start, block_end(n)};
      return n;
    }
    if (accept_kw("class")) {
      Node n = make("ClassDef", expect_name());
      if (accept_op("(")) {
        parse_call_arguments(n, "bases");
        expect_op(")");
      }
      parse_block(n, "body");
      n.span = {start, block_end(n)};
      return n;
    }
    fail("expected compound statement");
  }

  Node parse_if_tail(Position start) {
    Node n = make("If");
    add(n, "test", parse_namedexpr_test());
    parse_block(n, "body");
    if (at_kw("elif")) {
      Position es = peek().start;
      ++pos_;
      add(n, "orelse", parse_if_tail(es));
    } else if (accept_kw("else")) {
      parse_block(n, "orelse");
    }
    n.span = {start, block_end(n)};
    return n;
  }

  Node parse_try(Position start) {
    Node n = make("Try");
    parse_block(n, "body");
    bool any = false;
    while (at_kw("except")) {
      any = true;
      Position hs = peek().start;
      ++pos_;
      Node h = make("ExceptHandler");
      if (!at_op(":")) {
        add(h, "type", parse_test());
        if (accept_kw("as")) h.value = expect_name();
      }
      parse_block(h, "body");
      h.span = {hs, block_end(h)};
      add(n, "handlers", std::move(h));
    }
    if (any && accept_kw("else")) parse_block(n, "orelse");
    if (accept_kw("finally")) {
      any = true;
      parse_block(n, "finalbody");
    }
    if (!any) fail("expected 'except' or 'finally' block");
    n.span = {start, block_end(n)};
    return n;
  }

  Node parse_small() {
    Position start = peek().start;
    if (accept_kw("pass")) return finish_ret(make("Pass"), start);
    if (accept_kw("break")) return finish_ret(make("Break"), start);
    if (accept_kw("continue")) return finish_ret(make("Continue"), start);
    if (accept_kw("return")) {
      Node n = make("Return");
      if (!at_simple_end()) add(n, "value", parse_testlist_star());
      return finish_ret(std::move(n), start);
    }
    if (accept_kw("raise")) {
      Node n = make("Raise");
      if (!at_simple_end()) {
        add(n, "exc", parse_test());
        if (accept_kw("from")) add(n, "cause", parse_test());
      }
      return finish_ret(std::move(n), start);
    }
    if (accept_kw("del")) {
      Node n = make("Delete");
      do {
        if (at_simple_end()) break;
        add(n, "targets", parse_target());
      } while (accept_op(","));
      return finish_ret(std::move(n), start);
    }
    if (accept_kw("assert")) {
      Node n = make("Assert");
      add(n, "test", parse_test());
      if (accept_op(",")) add(n, "msg", parse_test());
      return finish_ret(std::move(n), start);
    }
    if (at_kw("global") || at_kw("nonlocal")) {
      Node n = make(next().text == "global" ? "Global" : "Nonlocal");
      do {
        Position ns = peek().start;
        Node name = make("Name", expect_name());
        add(n, "names", std::move(finish(name, ns)));
      } while (accept_op(","));
      return finish_ret(std::move(n), start);
    }
    if (accept_kw("import")) {
      Node n = make("Import");
      do {
        Position as = peek().start;
        std::string name = parse_dotted_name();
        if (accept_kw("as")) name += " as " + expect_name();
        Node alias = make("alias", name);
        add(n, "names", std::move(finish(alias, as)));
      } while (accept_op(","));
      return finish_ret(std::move(n), start);
    }
    if (accept_kw("from")) {
      std::string module;
      while (at_op(".") || at_op("...")) module += next().text;
      if (!at_kw("import")) module += parse_dotted_name();
      expect_kw("import");
      Node n = make("ImportFrom", module);
      bool paren = accept_op("(");
      do {
        if (paren && at_op(")")) break;
        Position as = peek().start;
        std::string name;
        if (accept_op("*")) {
          name = "*";
        } else {
          name = expect_name();
          if (accept_kw("as")) name += " as " + expect_name();
        }
        Node alias = make("alias", name);
        add(n, "names", std::move(finish(alias, as)));
      } while (accept_op(","));
      if (paren) expect_op(")");
      return finish_ret(std::move(n), start);
    }
    return parse_expr_statement(start);
  }

  Node finish_ret(Node n, Position start) {
    finish(n, start);
    return n;
  }

  bool at_simple_end() const { return at(TokenKind::Newline) || at_op(";") || at(TokenKind::End); }

  std::string parse_dotted_name() {
    std::string name = expect_name();
    while (at_op(".")) {
      ++pos_;
      name += "." + expect_name();
    }
    return name;
  }

  Node parse_expr_statement(Position start) {
    Node first = at_kw("yield") ? parse_yield() : parse_testlist_star();
    if (at_op(":")) {
      ++pos_;
      Node n = make("AnnAssign");
      add(n, "target", std::move(first));
      add(n, "annotation", parse_test());
      if (accept_op("=")) add(n, "value", at_kw("yield") ? parse_yield() : parse_testlist_star());
      return finish_ret(std::move(n), start);
    }
    if (peek().kind == TokenKind::Op) {
      auto it = kAugOps.find(peek().text);
      if (it != kAugOps.end()) {
        Position os = peek().start;
        ++pos_;
        Node n = make("AugAssign");
        add(n, "target", std::move(first));
        Node op = make(std::string(it->second));
        op.span = {os, last_end()};
        add(n, "op", std::move(op));
        add(n, "value", at_kw("yield") ? parse_yield() : parse_testlist_star());
        return finish_ret(std::move(n), start);
      }
    }
    if (at_op("=")) {
      Node n = make("Assign");
      std::vector<Node> parts;
      parts.push_back(std::move(first));
      while (accept_op("=")) parts.push_back(at_kw("yield") ? parse_yield() : parse_testlist_star());
      for (std::size_t i = 0; i + 1 < parts.size(); ++i) add(n, "targets", std::move(parts[i]));
      add(n, "value", std::move(parts.back()));
      return finish_ret(std::move(n), start);
    }
    Node n = make("Expr");
    add(n, "value", std::move(first));
    return finish_ret(std::move(n), start);
  }

  // ---- function arguments --------------------------------------------------
  Node parse_arguments(std::string_view closer, bool annotations) {
    Position start = peek().start;
    Node args = make("arguments");
    bool seen_star = false;
    while (!at_op(closer)) {
      Position as = peek().start;
      if (accept_op("/")) {
        for (auto& c : args.children) {
          if (c.relation == "args") c.relation = "posonlyargs";
        }
      } else if (accept_op("**")) {
        Node a = make("arg", expect_name());
        if (annotations && accept_op(":")) add(a, "annotation", parse_test());
        add(args, "kwarg", std::move(finish(a, as)));
      } else if (accept_op("*")) {
        seen_star = true;
        if (at_op(",") || at_op(closer)) {
          add(args, "kwonly_marker", finish_ret(make("KwOnlyMarker"), as));
        } else {
          Node a = make("arg", expect_name());
          if (annotations && accept_op(":")) add(a, "annotation", parse_test());
          add(args, "vararg", std::move(finish(a, as)));
        }
      } else {
        Node a = make("arg", expect_name());
        if (annotations && accept_op(":")) add(a, "annotation", parse_test());
        if (accept_op("=")) add(a, "default", parse_test());
        add(args, seen_star ? "kwonlyargs" : "args", std::move(finish(a, as)));
      }
      if (!accept_op(",")) break;
    }
    args.span = {start, last_end()};
    return args;
  }

  // ---- expressions -----------------------------------------------------------
  Node parse_yield() {
    Position start = peek().start;
    expect_kw("yield");
    if (accept_kw("from")) {
      Node n = make("YieldFrom");
      add(n, "value", parse_test());
      return finish_ret(std::move(n), start);
    }
    Node n = make("Yield");
    if (!at_simple_end() && !at_op(")") && !at_op("=")) add(n, "value", parse_testlist_star());
    return finish_ret(std::move(n), start);
  }

  bool at_expr_start() const {
    const Token& t = peek();
    switch (t.kind) {
      case TokenKind::Name:
        return !kKeywords.count(t.text) || t.text == "None" || t.text == "True" ||
               t.text == "False" || t.text == "not" || t.text == "lambda" || t.text == "await";
      case TokenKind::Number:
      case TokenKind::String:
        return true;
      case TokenKind::Op:
        return t.text == "(" || t.text == "[" || t.text == "{" || t.text == "-" || t.text == "+" ||
               t.text == "~" || t.text == "..." || t.text == "*";
      default:
        return false;
    }
  }

  // testlist_star_expr: tuple when a comma is present.
  Node parse_testlist_star() {
    Position start = peek().start;
    Node first = parse_test_or_star();
    if (!at_op(",")) return first;
    Node tup = make("Tuple");
    add(tup, "elts", std::move(first));
    while (accept_op(",")) {
      if (!at_expr_start()) break;
      add(tup, "elts", parse_test_or_star());
    }
    return finish_ret(std::move(tup), start);
  }

  Node parse_test_or_star() {
    if (at_op("*")) {
      Position start = peek().start;
      ++pos_;
      Node n = make("Starred");
      add(n, "value", parse_bitor());
      return finish_ret(std::move(n), start);
    }
    return parse_namedexpr_test();
  }

  Node parse_target() { return parse_test_or_star_target(); }

  Node parse_test_or_star_target() {
    if (at_op("*")) {
      Position start = peek().start;
      ++pos_;
      Node n = make("Starred");
      add(n, "value", parse_bitor());
      return finish_ret(std::move(n), start);
    }
    return parse_bitor();
  }

  // exprlist for `for` targets.
  Node parse_target_list() {
    Position start = peek().start;
    Node first = parse_test_or_star_target();
    if (!at_op(",")) return first;
    Node tup = make("Tuple");
    add(tup, "elts", std::move(first));
    while (accept_op(",")) {
      if (at_kw("in") || at_op("=")) break;
      add(tup, "elts", parse_test_or_star_target());
    }
    return finish_ret(std::move(tup), start);
  }

  Node parse_namedexpr_test() {
    Position start = peek().start;
    Node t = parse_test();
    if (at_op(":=")) {
      if (t.kind != "Name") fail("cannot use assignment expression here");
      ++pos_;
      Node n = make("NamedExpr");
      add(n, "target", std::move(t));
      add(n, "value", parse_test());
      return finish_ret(std::move(n), start);
    }
    return t;
  }

  Node parse_test() {
    if (at_kw("lambda")) return parse_lambda(true);
    Position start = peek().start;
    Node body = parse_or();
    if (at_kw("if")) {
      ++pos_;
      Node n = make("IfExp");
      add(n, "body", std::move(body));
      add(n, "test", parse_or());
      expect_kw("else");
      add(n, "orelse", parse_test());
      return finish_ret(std::move(n), start);
    }
    return body;
  }

  Node parse_test_nocond() {
    if (at_kw("lambda")) return parse_lambda(false);
    return parse_or();
  }

  Node parse_lambda(bool allow_cond) {
    Position start = peek().start;
    expect_kw("lambda");
    Node n = make("Lambda");
    add(n, "args", parse_arguments(":", false));
    expect_op(":");
    add(n, "body", allow_cond ? parse_test() : parse_test_nocond());
    return finish_ret(std::move(n), start);
  }

  Node parse_boolop(std::string_view kw, std::string_view op_kind, Node (Parser::*sub)()) {
    Position start = peek().start;
    Node first = (this->*sub)();
    if (!at_kw(kw)) return first;
    Node n = make("BoolOp");
    Node op = make(std::string(op_kind));
    op.span = {peek().start, peek().end};
    add(n, "op", std::move(op));
    add(n, "values", std::move(first));
    while (accept_kw(kw)) add(n, "values", (this->*sub)());
    return finish_ret(std::move(n), start);
  }

  Node parse_or() { return parse_boolop("or", "Or", &Parser::parse_and); }
  Node parse_and() { return parse_boolop("and", "And", &Parser::parse_not); }

  Node parse_not() {
    if (at_kw("not")) {
      Position start = peek().start;
      Node op = make("Not");
      op.span = {peek().start, peek().end};
      ++pos_;
      Node n = make("UnaryOp");
      add(n, "op", std::move(op));
      add(n, "operand", parse_not());
      return finish_ret(std::move(n), start);
    }
    return parse_comparison();
  }

  std::optional<std::string> comparison_op() {
    const Token& t = peek();
    if (t.kind == TokenKind::Op) {
      auto it = kCompareOps.find(t.text);
      if (it != kCompareOps.end()) {
        ++pos_;
        return std::string(it->second);
      }
      return std::nullopt;
    }
    if (t.kind != TokenKind::Name) return std::nullopt;
    if (t.text == "in") {
      ++pos_;
      return "In";
    }
    if (t.text == "not" && at_kw("in", 1)) {
      pos_ += 2;
      return "NotIn";
    }
    if (t.text == "is") {
      ++pos_;
      if (accept_kw("not")) return "IsNot";
      return "Is";
    }
    return std::nullopt;
  }

  Node parse_comparison() {
    Position start = peek().start;
    Node left = parse_bitor();
    Position os = peek().start;
    auto op = comparison_op();
    if (!op) return left;
    Node n = make("Compare");
    add(n, "left", std::move(left));
    while (op) {
      Node o = make(*op);
      o.span = {os, last_end()};
      add(n, "ops", std::move(o));
      add(n, "comparators", parse_bitor());
      os = peek().start;
      op = comparison_op();
    }
    return finish_ret(std::move(n), start);
  }

  Node parse_binary_level(std::initializer_list<std::string_view> ops, Node (Parser::*sub)()) {
    Position start = peek().start;
    Node left = (this->*sub)();
    for (;;) {
      const Token& t = peek();
      if (t.kind != TokenKind::Op) break;
      bool hit = false;
      for (auto o : ops) hit = hit || t.text == o;
      if (!hit) break;
      Node op = make(std::string(kBinOps.at(t.text)));
      op.span = {t.start, t.end};
      ++pos_;
      Node n = make("BinOp");
      add(n, "left", std::move(left));
      add(n, "op", std::move(op));
      add(n, "right", (this->*sub)());
      left = std::move(finish(n, start));
    }
    return left;
  }

  Node parse_bitor() { return parse_binary_level({"|"}, &Parser::parse_bitxor); }
  Node parse_bitxor() { return parse_binary_level({"^"}, &Parser::parse_bitand); }
  Node parse_bitand() { return parse_binary_level({"&"}, &Parser::parse_shift); }
  Node parse_shift() { return parse_binary_level({"<<", ">>"}, &Parser::parse_arith); }
  Node parse_arith() { return parse_binary_level({"+", "-"}, &Parser::parse_term); }
  Node parse_term() { return parse_binary_level({"*", "@", "/", "%", "//"}, &Parser::parse_factor); }

  Node parse_factor() {
    if (at_op("-") || at_op("+") || at_op("~")) {
      Position start = peek().start;
      const Token& t = next();
      Node op = make(t.text == "-" ? "USub" : t.text == "+" ? "UAdd" : "Invert");
      op.span = {t.start, t.end};
      Node n = make("UnaryOp");
      add(n, "op", std::move(op));
      add(n, "operand", parse_factor());
      return finish_ret(std::move(n), start);
    }
    return parse_power();
  }

  Node parse_power() {
    Position start = peek().start;
    Node base = parse_await_primary();
    if (at_op("**")) {
      Node op = make("Pow");
      op.span = {peek().start, peek().end};
      ++pos_;
      Node n = make("BinOp");
      add(n, "left", std::move(base));
      add(n, "op", std::move(op));
      add(n, "right", parse_factor());
      return finish_ret(std::move(n), start);
    }
    return base;
  }

  Node parse_await_primary() {
    if (at_kw("await")) {
      Position start = peek().start;
      ++pos_;
      Node n = make("Await");
      add(n, "value", parse_primary());
      return finish_ret(std::move(n), start);
    }
    return parse_primary();
  }

  Node parse_primary() {
    Position start = peek().start;
    Node n = parse_atom();
    for (;;) {
      if (accept_op(".")) {
        Node a = make("Attribute", expect_name());
        add(a, "value", std::move(n));
        n = std::move(finish(a, start));
      } else if (accept_op("(")) {
        Node c = make("Call");
        add(c, "func", std::move(n));
        parse_call_arguments(c, "args");
        expect_op(")");
        n = std::move(finish(c, start));
      } else if (accept_op("[")) {
        Node s = make("Subscript");
        add(s, "value", std::move(n));
        add(s, "slice", parse_subscript_list());
        expect_op("]");
        n = std::move(finish(s, start));
      } else {
        break;
      }
    }
    return n;
  }

  void parse_call_arguments(Node& call, const std::string& positional_relation) {
    while (!at_op(")")) {
      Position as = peek().start;
      if (accept_op("**")) {
        Node kw = make("keyword");
        add(kw, "value", parse_test());
        add(call, "keywords", std::move(finish(kw, as)));
      } else if (accept_op("*")) {
        Node st = make("Starred");
        add(st, "value", parse_test());
        add(call, positional_relation, std::move(finish(st, as)));
      } else if (peek().kind == TokenKind::Name && at_op("=", 1) && !kKeywords.count(peek().text)) {
        Node kw = make("keyword", next().text);
        ++pos_;
        add(kw, "value", parse_test());
        add(call, "keywords", std::move(finish(kw, as)));
      } else {
        Node arg = parse_namedexpr_test();
        if (at_kw("for") || (at_kw("async") && at_kw("for", 1))) {
          Node gen = make("GeneratorExp");
          add(gen, "elt", std::move(arg));
          parse_comprehensions(gen);
          arg = std::move(finish(gen, as));
        }
        add(call, positional_relation, std::move(arg));
      }
      if (!accept_op(",")) break;
    }
  }

  Node parse_subscript_list() {
    Position start = peek().start;
    Node first = parse_subscript();
    if (!at_op(",")) return first;
    Node tup = make("Tuple");
    add(tup, "elts", std::move(first));
    while (accept_op(",")) {
      if (at_op("]")) break;
      add(tup, "elts", parse_subscript());
    }
    return finish_ret(std::move(tup), start);
  }

  Node parse_subscript() {
    Position start = peek().start;
    std::optional<Node> lower;
    if (!at_op(":")) {
      Node t = parse_test_or_star();
      if (!at_op(":")) return t;
      lower = std::move(t);
    }
    expect_op(":");
    Node s = make("Slice");
    if (lower) add(s, "lower", std::move(*lower));
    if (!at_op(":") && !at_op("]") && !at_op(",")) add(s, "upper", parse_test());
    if (accept_op(":")) {
      if (!at_op("]") && !at_op(",")) add(s, "step", parse_test());
    }
    return finish_ret(std::move(s), start);
  }

  void parse_comprehensions(Node& owner) {
    while (at_kw("for") || (at_kw("async") && at_kw("for", 1))) {
      Position cs = peek().start;
      Node comp = make("comprehension");
      if (accept_kw("async")) comp.value = "async";
      expect_kw("for");
      add(comp, "target", parse_target_list());
      expect_kw("in");
      add(comp, "iter", parse_or());
      while (at_kw("if")) {
        ++pos_;
        add(comp, "ifs", parse_test_nocond());
      }
      add(owner, "generators", std::move(finish(comp, cs)));
    }
  }

  bool at_comp_for() const { return at_kw("for") || (at_kw("async") && at_kw("for", 1)); }

  Node parse_atom() {
    Position start = peek().start;
    const Token& t = peek();
    if (t.kind == TokenKind::Number) {
      ++pos_;
      return finish_ret(make("Constant", t.text), start);
    }
    if (t.kind == TokenKind::String) {
      std::string text;
      bool fstring = false;
      while (at(TokenKind::String)) {
        const Token& s = next();
        if (!text.empty()) text += " ";
        text += s.text;
        for (char ch : s.text) {
          if (ch == '\'' || ch == '"') break;
          if (ch == 'f' || ch == 'F') fstring = true;
        }
      }
      return finish_ret(make(fstring ? "JoinedStr" : "Constant", text), start);
    }
    if (t.kind == TokenKind::Name) {
      if (t.text == "None" || t.text == "True" || t.text == "False") {
        ++pos_;
        return finish_ret(make("Constant", t.text), start);
      }
      if (kKeywords.count(t.text)) fail("invalid syntax");
      ++pos_;
      return finish_ret(make("Name", t.text), start);
    }
    if (accept_op("...")) return finish_ret(make("Constant", "..."), start);
    if (accept_op("(")) {
      if (accept_op(")")) return finish_ret(make("Tuple"), start);
      if (at_kw("yield")) {
        Node y = parse_yield();
        expect_op(")");
        return y;
      }
      Node first = parse_test_or_star();
      if (at_comp_for()) {
        Node gen = make("GeneratorExp");
        add(gen, "elt", std::move(first));
        parse_comprehensions(gen);
        expect_op(")");
        return finish_ret(std::move(gen), start);
      }
      if (accept_op(")")) {
        // Parenthesized expression: the span includes the parentheses.
        first.span.start = start;
        first.span.end = last_end();
        return first;
      }
      Node tup = make("Tuple");
      add(tup, "elts", std::move(first));
      while (accept_op(",")) {
        if (at_op(")")) break;
        add(tup, "elts", parse_test_or_star());
      }
      expect_op(")");
      return finish_ret(std::move(tup), start);
    }
    if (accept_op("[")) {
      Node list = make("List");
      if (accept_op("]")) return finish_ret(std::move(list), start);
      Node first = parse_test_or_star();
      if (at_comp_for()) {
        Node comp = make("ListComp");
        add(comp, "elt", std::move(first));
        parse_comprehensions(comp);
        expect_op("]");
        return finish_ret(std::move(comp), start);
      }
      add(list, "elts", std::move(first));
      while (accept_op(",")) {
        if (at_op("]")) break;
        add(list, "elts", parse_test_or_star());
      }
      expect_op("]");
      return finish_ret(std::move(list), start);
    }
    if (accept_op("{")) return parse_dict_or_set(start);
    fail("invalid syntax");
  }

  Node parse_dict_or_set(Position start) {
    if (accept_op("}")) return finish_ret(make("Dict"), start);
    auto dict_item = [&](Node& dict) {
      if (accept_op("**")) {
        add(dict, "unpack", parse_bitor());
        return;
      }
      add(dict, "keys", parse_test());
      expect_op(":");
      add(dict, "values", parse_test());
    };
    if (at_op("**")) {
      Node dict = make("Dict");
      dict_item(dict);
      while (accept_op(",")) {
        if (at_op("}")) break;
        dict_item(dict);
      }
      expect_op("}");
      return finish_ret(std::move(dict), start);
    }
    Node first = parse_test_or_star();
    if (accept_op(":")) {
      Node value = parse_test();
      if (at_comp_for()) {
        Node comp = make("DictComp");
        add(comp, "key", std::move(first));
        add(comp, "value", std::move(value));
        parse_comprehensions(comp);
        expect_op("}");
        return finish_ret(std::move(comp), start);
      }
      Node dict = make("Dict");
      add(dict, "keys", std::move(first));
      add(dict, "values", std::move(value));
      while (accept_op(",")) {
        if (at_op("}")) break;
        dict_item(dict);
      }
      expect_op("}");
      return finish_ret(std::move(dict), start);
    }
    if (at_comp_for()) {
      Node comp = make("SetComp");
      add(comp, "elt", std::move(first));
      parse_comprehensions(comp);
      expect_op("}");
      return finish_ret(std::move(comp), start);
    }
    Node set = make("Set");
    add(set, "elts", std::move(first));
    while (accept_op(",")) {
      if (at_op("}")) break;
      add(set, "elts", parse_test_or_star());
    }
    expect_op("}");
    return finish_ret(std::move(set), start);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

Node parse_source(std::string_view text) {
  auto tokens = detail::tokenize(text);
  return Parser(std::move(tokens)).parse_module();
}

}  // namespace tyfix::syntax
