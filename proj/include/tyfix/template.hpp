#pragma once

// Template trees and fix templates.
//
// A TemplateTree is stored as a flat preorder arena: node ids are the
// preorder indices, so ids strictly increase along every child list and the
// root is node 0. Any of a node's base type, type and value may be a hole
// (std::nullopt). Trees are value types; operations that change shape build
// a new tree.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tyfix/syntax.hpp"

namespace tyfix {

enum class BaseType { Variable, Op, Literal, Builtin, Type, Attribute, Expr, Stmt };

inline constexpr BaseType kAllBaseTypes[] = {BaseType::Variable, BaseType::Op,    BaseType::Literal,
                                             BaseType::Builtin,  BaseType::Type,  BaseType::Attribute,
                                             BaseType::Expr,     BaseType::Stmt};

std::string_view to_string(BaseType bt);
std::optional<BaseType> parse_base_type(std::string_view name);

/// Synthetic node kinds. A Group stands for an ordered run of siblings that
/// are edited together; a Context roots the statements of an external context.
inline constexpr std::string_view kGroupKind = "Group";
inline constexpr std::string_view kContextKind = "Context";

/// Mapping from syntax nodes to base types. Ships with built-in defaults and
/// can be replaced from a JSON document (see docs/base_types.json).
class BaseTypeTable {
 public:
  static const BaseTypeTable& defaults();
  static BaseTypeTable from_json(std::string_view text);
  std::string to_json() const;

  /// `relation` is the edge label under the parent ("" for roots).
  BaseType classify(std::string_view kind, std::string_view relation, std::string_view value) const;

 private:
  std::map<std::string, BaseType, std::less<>> kinds_;
  std::set<std::string, std::less<>> builtins_;
  std::set<std::string, std::less<>> type_names_;
  std::set<std::string, std::less<>> annotation_relations_;
  BaseType name_default_ = BaseType::Variable;
  BaseType fallback_ = BaseType::Expr;
};

/// Total classification with the default table.
BaseType classify_base_type(std::string_view kind, std::string_view relation,
                            std::string_view value = {});

struct Label {
  std::optional<BaseType> bt;
  std::optional<std::string> t;
  std::optional<std::string> v;

  bool type_hole() const { return !t.has_value(); }
  bool value_hole() const { return !v.has_value(); }
  friend bool operator==(const Label&, const Label&) = default;
};

struct TNode {
  Label label;
  int parent = -1;
  std::string rel;  // relation under the parent, "" for the root
  std::vector<int> children;

  friend bool operator==(const TNode&, const TNode&) = default;
};

class TemplateTree {
 public:
  TemplateTree() = default;

  /// A tree with `label` at the root and the given subtrees as children, in
  /// order. Empty subtrees are skipped.
  static TemplateTree make(Label label, std::vector<std::pair<std::string, TemplateTree>> kids = {});
  static TemplateTree leaf(Label label) { return make(std::move(label)); }

  /// Converts a syntax subtree node by node. Base types come from `table`;
  /// `relation` is the root's relation under its (absent) parent.
  static TemplateTree from_syntax(const syntax::Node& node, std::string_view relation = {},
                                  const BaseTypeTable& table = BaseTypeTable::defaults());

  bool empty() const { return nodes_.empty(); }
  std::size_t size() const { return nodes_.size(); }
  const TNode& node(int id) const { return nodes_.at(static_cast<std::size_t>(id)); }
  const std::vector<TNode>& nodes() const { return nodes_; }
  int root() const { return nodes_.empty() ? -1 : 0; }
  bool is_leaf(int id) const { return node(id).children.empty(); }

  /// Copy of the subtree rooted at `id`, renumbered.
  TemplateTree subtree(int id) const;
  /// Copy with the subtree at `id` replaced (empty `with` removes it).
  TemplateTree replace_subtree(int id, const TemplateTree& with) const;
  /// Copy with `child` appended as the last child of `id` under `relation`.
  TemplateTree append_child(int id, const std::string& relation, const TemplateTree& child) const;
  /// Copy with the root relation set.
  TemplateTree with_root_relation(std::string relation) const;
  /// Copy with the label of node `id` replaced.
  TemplateTree with_label(int id, Label label) const;

  std::vector<int> leaves() const;
  /// Ids from `id` up to the root.
  std::vector<int> ancestors_or_self(int id) const;
  /// Path of child indices from the root to `id`.
  std::vector<std::size_t> path_to(int id) const;
  /// Node at a child-index path, or -1.
  int at_path(const std::vector<std::size_t>& path) const;
  /// Last id in the subtree of `id` (preorder).
  int subtree_end(int id) const;

  /// Number of nodes whose type or value is a hole.
  std::size_t hole_count() const;
  bool concrete() const { return hole_count() == 0; }
  /// Concrete attributes summed over nodes (bt, t, v each count one).
  std::size_t concreteness() const;

  /// Stable hash over labels, relations and shape.
  std::uint64_t hash() const;
  friend bool operator==(const TemplateTree& a, const TemplateTree& b) { return a.nodes_ == b.nodes_; }

  /// Renders the tree as a nested s-expression; for diagnostics and tests.
  std::string debug_string() const;

  /// Converts back to a syntax tree. Holes become syntax holes: a type hole
  /// (t = ABS) a subtree hole, a value hole a value hole on the same kind.
  syntax::Node to_syntax() const;
  syntax::Node to_syntax(int id) const;

 private:
  std::vector<TNode> nodes_;
};

/// Values of Variable-typed leaves (identifier text), for data-dependency tests.
std::set<std::string> variable_values(const TemplateTree& t);

/// Node match: the value of `a` matches a hole or an equal value of `b`, and
/// the base types agree with b's type equal to a's type (or naming a's base
/// type, or a type hole). `b` is the pattern side.
bool node_match(const Label& a, const Label& b);

/// Template-tree match: some node of `a` matches b's root and an
/// order-preserving subsequence of its children (same relations) matches b's
/// root's children, recursively. An empty `b` matches anything. Synthetic
/// Group roots in `b` match any node label.
bool tree_match(const TemplateTree& a, const TemplateTree& b);
/// Same, rooted: b's root must match node `at` of `a`.
bool tree_match_at(const TemplateTree& a, int at, const TemplateTree& b);

/// Like tree_match, also returning the node of `a` each node of `b` matched
/// (first match in preorder of a's nodes, children leftmost).
std::optional<std::vector<int>> match_mapping(const TemplateTree& a, const TemplateTree& b);

/// One mapping per node of `a` where b's root matches, in preorder.
std::vector<std::vector<int>> match_mappings(const TemplateTree& a, const TemplateTree& b);

/// Exact embedding used by category_of: tree_match(big, small) with `small`
/// hole-free.
bool embeds(const TemplateTree& small, const TemplateTree& big);

enum class Category { Add, Remove, Insert, Replace };
std::string_view to_string(Category c);
std::optional<Category> parse_category(std::string_view name);
inline constexpr Category kAllCategories[] = {Category::Add, Category::Remove, Category::Insert,
                                              Category::Replace};

class InvalidPattern : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Where a pattern applies, beyond what B_Tree itself says.
struct Anchor {
  enum class Position { None, Before, After };
  // Statement-level Add: A is inserted before/after the site statement.
  Position position = Position::None;
  // Expression-level Add: index of the new child within the attach relation.
  std::optional<int> index;
  // Insert: child-index path in A_Tree where the matched B image is re-embedded.
  std::optional<std::vector<std::size_t>> embed;

  friend bool operator==(const Anchor&, const Anchor&) = default;
};

struct FixPattern {
  TemplateTree before;  // B_Tree
  TemplateTree after;   // A_Tree
  Anchor anchor;

  bool empty() const { return before.empty() && after.empty(); }
  friend bool operator==(const FixPattern&, const FixPattern&) = default;
};

/// Throws InvalidPattern when both trees are empty.
Category category_of(const FixPattern& p);

struct InternalContext {
  TemplateTree tree;
  // node id -> (relation of B under it, relation of A under it)
  std::map<int, std::pair<std::string, std::string>> rn;

  bool empty() const { return tree.empty(); }
  friend bool operator==(const InternalContext&, const InternalContext&) = default;
};

struct ExternalContext {
  TemplateTree before;  // BC_Tree
  TemplateTree after;   // AC_Tree

  bool empty() const { return before.empty() && after.empty(); }
  friend bool operator==(const ExternalContext&, const ExternalContext&) = default;
};

struct FixTemplate {
  std::string id;
  Category category = Category::Replace;
  FixPattern pattern;
  InternalContext ic;
  ExternalContext ec;
  std::size_t instance_count = 0;
  std::set<std::string> instance_ids;

  /// Content identity: pattern, contexts and category (not id or instances).
  bool same_content(const FixTemplate& other) const;
  std::uint64_t content_hash() const;
};

/// Concat(IC_Tree, B_Tree, rn): B attached under the rn node with relation br.
TemplateTree concat(const InternalContext& ic, const TemplateTree& before);

/// Concat of the template's internal context and B_Tree.
inline TemplateTree buggy_key_tree(const FixTemplate& t) { return concat(t.ic, t.pattern.before); }

/// Specific-to-general hierarchy. templates[root] is the most general node;
/// parent[i] is -1 for the root.
struct ClusteringTree {
  std::vector<FixTemplate> templates;
  std::vector<int> parent;
  int root = -1;

  std::vector<int> children_of(int i) const;
  const FixTemplate& root_template() const { return templates.at(static_cast<std::size_t>(root)); }
  bool is_leaf(int i) const { return children_of(i).empty(); }
};

using Forest = std::vector<ClusteringTree>;

}  // namespace tyfix
