#pragma once

// Python syntax trees: parsing, normalized unparsing and statement lookup.
//
// The tree is a uniform node structure (kind, value, labelled children) so
// that template trees can be converted to and from it node by node. Kinds
// follow CPython's `ast` module names; operator nodes (Add, Eq, And, ...) are
// leaf children under the "op"/"ops" relations.

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tyfix::syntax {

struct Position {
  int line = 0;  // 1-based
  int col = 0;   // 0-based byte column
};

struct Span {
  Position start;
  Position end;

  bool contains(const Span& other) const;
};

/// Inclusive range of source lines.
struct SourceSpan {
  int start_line = 1;
  int end_line = 1;

  SourceSpan() = default;
  SourceSpan(int start, int end);

  bool contains(int line) const { return line >= start_line && line <= end_line; }
  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

enum class HoleKind {
  None,
  Value,    // the node's value is unknown; kind and children are kept
  Subtree,  // the whole node is unknown (a type hole or a dummy child)
};

struct Child;

struct Node {
  std::string kind;
  std::string value;
  std::vector<Child> children;
  Span span;
  HoleKind hole = HoleKind::None;
  // Base type name of a subtree hole ("Expr", "Stmt", "Op", ...).
  std::string hole_base;

  const Node* child(std::string_view relation, std::size_t index = 0) const;
  Node* child(std::string_view relation, std::size_t index = 0);
  std::vector<const Node*> children_of(std::string_view relation) const;
  std::size_t count(std::string_view relation) const;
  bool is_hole() const { return hole != HoleKind::None; }
};

struct Child {
  std::string relation;
  Node node;
};

/// Structural equality: kind, value, hole markers and labelled children.
/// Spans are ignored.
bool structurally_equal(const Node& a, const Node& b);

/// Stable 64-bit hash consistent with structurally_equal.
std::uint64_t structural_hash(const Node& node);

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(const std::string& message, int line, int col);
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int line_;
  int col_;
};

class UnparseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyResult : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses Python 3.8 source (no `match` statements, no PEP 604/695 syntax
/// beyond what 3.8 accepts). Comments and blank lines are discarded.
Node parse_source(std::string_view text);

struct HoleSlot {
  HoleKind hole = HoleKind::None;
  std::string kind;       // node kind for value holes, empty for subtree holes
  std::string base_type;  // base type for subtree holes
  std::string relation;   // relation of the hole under its parent
};

struct UnparseOptions {
  // Called for each hole in output order; returns the text to emit.
  // Defaults to the literal placeholder "<HOLE>".
  std::function<std::string(const HoleSlot&, std::size_t index)> render_hole;
  // When set, the output lines occupied by this node are reported.
  const Node* focus = nullptr;
};

struct UnparseResult {
  std::string text;
  std::vector<HoleSlot> holes;
  std::optional<SourceSpan> focus_lines;
};

UnparseResult unparse_with(const Node& tree, const UnparseOptions& options);
std::string unparse(const Node& tree);

/// unparse(parse_source(text)).
std::string normalize(std::string_view text);

bool is_statement_kind(std::string_view kind);
bool is_expression_kind(std::string_view kind);
bool is_operator_kind(std::string_view kind);
/// Relations whose children are statements (body, orelse, finalbody, ...).
bool is_statement_list_relation(std::string_view relation);
/// Every node kind the parser can produce.
const std::vector<std::string>& all_node_kinds();

/// Path from the root: one child index (into Node::children) per level.
using NodePath = std::vector<std::size_t>;

const Node& node_at(const Node& root, const NodePath& path);
Node& node_at(Node& root, const NodePath& path);

/// Deepest statements covering the lines, ordered by position; ancestors
/// absorb their descendants.
std::vector<NodePath> deepest_statement_paths(const Node& root, const SourceSpan& lines);
std::vector<const Node*> deepest_statements(const Node& root, const SourceSpan& lines);
std::vector<NodePath> deepest_statement_paths(const Node& root, const std::vector<int>& lines);

/// Children a node of `kind` must have to be rendered: (relation, minimum
/// count). Template application fills missing ones with dummy holes.
struct RequiredChild {
  std::string relation;
  std::size_t min_count;
};
const std::vector<RequiredChild>& required_children(std::string_view kind);

}  // namespace tyfix::syntax
