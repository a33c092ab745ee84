#include <algorithm>
#include <map>
#include <set>

#include "tyfix/hash.hpp"
#include "tyfix/syntax.hpp"

namespace tyfix::syntax {

bool Span::contains(const Span& other) const {
  auto before = [](Position a, Position b) {
    return a.line < b.line || (a.line == b.line && a.col <= b.col);
  };
  return before(start, other.start) && before(other.end, end);
}

SourceSpan::SourceSpan(int start, int end) : start_line(start), end_line(end) {
  if (start < 1 || end < start) {
    throw std::invalid_argument("invalid line span " + std::to_string(start) + ":" +
                                std::to_string(end));
  }
}

SyntaxError::SyntaxError(const std::string& message, int line, int col)
    : std::runtime_error("line " + std::to_string(line) + ":" + std::to_string(col) + ": " +
                         message),
      line_(line),
      col_(col) {}

const Node* Node::child(std::string_view relation, std::size_t index) const {
  for (const auto& c : children) {
    if (c.relation == relation) {
      if (index == 0) return &c.node;
      --index;
    }
  }
  return nullptr;
}

Node* Node::child(std::string_view relation, std::size_t index) {
  return const_cast<Node*>(std::as_const(*this).child(relation, index));
}

std::vector<const Node*> Node::children_of(std::string_view relation) const {
  std::vector<const Node*> out;
  for (const auto& c : children) {
    if (c.relation == relation) out.push_back(&c.node);
  }
  return out;
}

std::size_t Node::count(std::string_view relation) const {
  return static_cast<std::size_t>(std::count_if(
      children.begin(), children.end(), [&](const Child& c) { return c.relation == relation; }));
}

bool structurally_equal(const Node& a, const Node& b) {
  if (a.kind != b.kind || a.value != b.value || a.hole != b.hole || a.hole_base != b.hole_base ||
      a.children.size() != b.children.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (a.children[i].relation != b.children[i].relation ||
        !structurally_equal(a.children[i].node, b.children[i].node)) {
      return false;
    }
  }
  return true;
}

namespace {

void hash_into(Fnv1a& h, const Node& n) {
  h.add(n.kind);
  h.add(n.value);
  h.add(static_cast<std::uint64_t>(n.hole));
  h.add(n.hole_base);
  h.add(static_cast<std::uint64_t>(n.children.size()));
  for (const auto& c : n.children) {
    h.add(c.relation);
    hash_into(h, c.node);
  }
}

const std::set<std::string, std::less<>> kStatementKinds = {
    "FunctionDef", "AsyncFunctionDef", "ClassDef", "Return", "Delete", "Assign", "AugAssign",
    "AnnAssign", "For", "AsyncFor", "While", "If", "With", "AsyncWith", "Raise", "Try",
    "Assert", "Import", "ImportFrom", "Global", "Nonlocal", "Expr", "Pass", "Break",
    "Continue"};

const std::set<std::string, std::less<>> kExpressionKinds = {
    "BoolOp", "NamedExpr", "BinOp", "UnaryOp", "Lambda", "IfExp", "Dict", "Set", "ListComp",
    "SetComp", "DictComp", "GeneratorExp", "Await", "Yield", "YieldFrom", "Compare", "Call",
    "JoinedStr", "Constant", "Attribute", "Subscript", "Starred", "Name", "List", "Tuple",
    "Slice"};

const std::set<std::string, std::less<>> kOperatorKinds = {
    "And", "Or", "Add", "Sub", "Mult", "MatMult", "Div", "Mod", "Pow", "LShift", "RShift",
    "BitOr", "BitXor", "BitAnd", "FloorDiv", "Invert", "Not", "UAdd", "USub", "Eq", "NotEq",
    "Lt", "LtE", "Gt", "GtE", "Is", "IsNot", "In", "NotIn"};

const std::set<std::string, std::less<>> kOtherKinds = {
    "Module", "ExceptHandler", "arguments", "arg", "keyword", "alias", "withitem",
    "comprehension", "KwOnlyMarker"};

}  // namespace

std::uint64_t structural_hash(const Node& node) {
  Fnv1a h;
  hash_into(h, node);
  return h.value();
}

bool is_statement_kind(std::string_view kind) { return kStatementKinds.count(kind) > 0; }
bool is_expression_kind(std::string_view kind) { return kExpressionKinds.count(kind) > 0; }
bool is_operator_kind(std::string_view kind) { return kOperatorKinds.count(kind) > 0; }

bool is_statement_list_relation(std::string_view relation) {
  return relation == "body" || relation == "orelse" || relation == "finalbody";
}

const std::vector<std::string>& all_node_kinds() {
  static const std::vector<std::string> kinds = [] {
    std::vector<std::string> out;
    for (const auto* set : {&kStatementKinds, &kExpressionKinds, &kOperatorKinds, &kOtherKinds}) {
      out.insert(out.end(), set->begin(), set->end());
    }
    return out;
  }();
  return kinds;
}

const Node& node_at(const Node& root, const NodePath& path) {
  const Node* cur = &root;
  for (std::size_t i : path) cur = &cur->children.at(i).node;
  return *cur;
}

Node& node_at(Node& root, const NodePath& path) {
  Node* cur = &root;
  for (std::size_t i : path) cur = &cur->children.at(i).node;
  return *cur;
}

namespace {

// Deepest statement containing `line`, or nullopt.
std::optional<NodePath> deepest_for_line(const Node& root, int line) {
  std::optional<NodePath> best;
  NodePath path;
  const Node* cur = &root;
  for (;;) {
    bool descended = false;
    for (std::size_t i = 0; i < cur->children.size(); ++i) {
      const Node& c = cur->children[i].node;
      if (c.span.start.line <= line && line <= c.span.end.line) {
        path.push_back(i);
        if (is_statement_kind(c.kind)) best = path;
        cur = &c;
        descended = true;
        break;
      }
    }
    if (!descended) break;
  }
  return best;
}

bool is_prefix(const NodePath& a, const NodePath& b) {
  return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
}

}  // namespace

std::vector<NodePath> deepest_statement_paths(const Node& root, const SourceSpan& lines) {
  std::vector<int> all;
  for (int line = lines.start_line; line <= lines.end_line; ++line) all.push_back(line);
  return deepest_statement_paths(root, all);
}

std::vector<NodePath> deepest_statement_paths(const Node& root, const std::vector<int>& lines) {
  std::vector<NodePath> found;
  for (int line : lines) {
    auto p = deepest_for_line(root, line);
    if (p && std::find(found.begin(), found.end(), *p) == found.end()) found.push_back(*p);
  }
  if (found.empty()) {
    throw EmptyResult("no statement covers the requested lines");
  }
  std::vector<NodePath> out;
  for (const auto& p : found) {
    bool absorbed = std::any_of(found.begin(), found.end(), [&](const NodePath& q) {
      return q != p && is_prefix(q, p);
    });
    if (!absorbed) out.push_back(p);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<const Node*> deepest_statements(const Node& root, const SourceSpan& lines) {
  std::vector<const Node*> out;
  for (const auto& p : deepest_statement_paths(root, lines)) out.push_back(&node_at(root, p));
  return out;
}

const std::vector<RequiredChild>& required_children(std::string_view kind) {
  static const std::map<std::string, std::vector<RequiredChild>, std::less<>> table = {
      {"Call", {{"func", 1}}},
      {"Attribute", {{"value", 1}}},
      {"Subscript", {{"value", 1}, {"slice", 1}}},
      {"BinOp", {{"left", 1}, {"op", 1}, {"right", 1}}},
      {"UnaryOp", {{"op", 1}, {"operand", 1}}},
      {"BoolOp", {{"op", 1}, {"values", 2}}},
      {"Compare", {{"left", 1}, {"ops", 1}, {"comparators", 1}}},
      {"IfExp", {{"body", 1}, {"test", 1}, {"orelse", 1}}},
      {"NamedExpr", {{"target", 1}, {"value", 1}}},
      {"Lambda", {{"args", 1}, {"body", 1}}},
      {"ListComp", {{"elt", 1}, {"generators", 1}}},
      {"SetComp", {{"elt", 1}, {"generators", 1}}},
      {"GeneratorExp", {{"elt", 1}, {"generators", 1}}},
      {"DictComp", {{"key", 1}, {"value", 1}, {"generators", 1}}},
      {"comprehension", {{"target", 1}, {"iter", 1}}},
      {"Await", {{"value", 1}}},
      {"YieldFrom", {{"value", 1}}},
      {"Starred", {{"value", 1}}},
      {"keyword", {{"value", 1}}},
      {"withitem", {{"context_expr", 1}}},
      {"Expr", {{"value", 1}}},
      {"Assign", {{"targets", 1}, {"value", 1}}},
      {"AugAssign", {{"target", 1}, {"op", 1}, {"value", 1}}},
      {"AnnAssign", {{"target", 1}, {"annotation", 1}}},
      {"Delete", {{"targets", 1}}},
      {"Assert", {{"test", 1}}},
      {"If", {{"test", 1}, {"body", 1}}},
      {"While", {{"test", 1}, {"body", 1}}},
      {"For", {{"target", 1}, {"iter", 1}, {"body", 1}}},
      {"AsyncFor", {{"target", 1}, {"iter", 1}, {"body", 1}}},
      {"With", {{"items", 1}, {"body", 1}}},
      {"AsyncWith", {{"items", 1}, {"body", 1}}},
      {"Try", {{"body", 1}}},
      {"ExceptHandler", {{"body", 1}}},
      {"FunctionDef", {{"args", 1}, {"body", 1}}},
      {"AsyncFunctionDef", {{"args", 1}, {"body", 1}}},
      {"ClassDef", {{"body", 1}}},
      {"Global", {{"names", 1}}},
      {"Nonlocal", {{"names", 1}}},
      {"Import", {{"names", 1}}},
      {"ImportFrom", {{"names", 1}}},
  };
  static const std::vector<RequiredChild> none;
  auto it = table.find(kind);
  return it == table.end() ? none : it->second;
}

}  // namespace tyfix::syntax
