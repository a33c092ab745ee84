#include "tyfix/template.hpp"

#include <algorithm>
#include <functional>

#include "tyfix/hash.hpp"

namespace tyfix {

std::string_view to_string(BaseType bt) {
  switch (bt) {
    case BaseType::Variable: return "Variable";
    case BaseType::Op: return "Op";
    case BaseType::Literal: return "Literal";
    case BaseType::Builtin: return "Builtin";
    case BaseType::Type: return "Type";
    case BaseType::Attribute: return "Attribute";
    case BaseType::Expr: return "Expr";
    case BaseType::Stmt: return "Stmt";
  }
  return "Expr";
}

std::optional<BaseType> parse_base_type(std::string_view name) {
  for (BaseType bt : kAllBaseTypes) {
    if (to_string(bt) == name) return bt;
  }
  return std::nullopt;
}

std::string_view to_string(Category c) {
  switch (c) {
    case Category::Add: return "Add";
    case Category::Remove: return "Remove";
    case Category::Insert: return "Insert";
    case Category::Replace: return "Replace";
  }
  return "Replace";
}

std::optional<Category> parse_category(std::string_view name) {
  for (Category c : kAllCategories) {
    if (to_string(c) == name) return c;
  }
  return std::nullopt;
}

// ---- construction ----------------------------------------------------------

namespace {

// Appends `src` (rooted at its node 0) into `dst` under `parent`.
void splice(std::vector<TNode>& dst, const std::vector<TNode>& src, int src_id, int parent,
            const std::string& rel) {
  int id = static_cast<int>(dst.size());
  const TNode& s = src[static_cast<std::size_t>(src_id)];
  TNode n;
  n.label = s.label;
  n.parent = parent;
  n.rel = rel;
  dst.push_back(std::move(n));
  if (parent >= 0) dst[static_cast<std::size_t>(parent)].children.push_back(id);
  for (int c : s.children) splice(dst, src, c, id, src[static_cast<std::size_t>(c)].rel);
}

}  // namespace

TemplateTree TemplateTree::make(Label label, std::vector<std::pair<std::string, TemplateTree>> kids) {
  TemplateTree t;
  TNode root;
  root.label = std::move(label);
  t.nodes_.push_back(std::move(root));
  for (auto& [rel, kid] : kids) {
    if (kid.empty()) continue;
    splice(t.nodes_, kid.nodes_, 0, 0, rel);
  }
  return t;
}

TemplateTree TemplateTree::from_syntax(const syntax::Node& node, std::string_view relation,
                                       const BaseTypeTable& table) {
  TemplateTree t;
  std::function<void(const syntax::Node&, int, const std::string&)> walk =
      [&](const syntax::Node& n, int parent, const std::string& rel) {
        int id = static_cast<int>(t.nodes_.size());
        TNode tn;
        tn.label.bt = table.classify(n.kind, rel, n.value);
        tn.label.t = n.kind;
        tn.label.v = n.value;
        if (n.hole == syntax::HoleKind::Subtree) {
          tn.label.t.reset();
          tn.label.v.reset();
          if (auto bt = parse_base_type(n.hole_base)) tn.label.bt = bt;
        } else if (n.hole == syntax::HoleKind::Value) {
          tn.label.v.reset();
        }
        tn.parent = parent;
        tn.rel = rel;
        t.nodes_.push_back(std::move(tn));
        if (parent >= 0) t.nodes_[static_cast<std::size_t>(parent)].children.push_back(id);
        if (n.hole == syntax::HoleKind::Subtree) return;
        for (const auto& c : n.children) walk(c.node, id, c.relation);
      };
  walk(node, -1, std::string(relation));
  return t;
}

TemplateTree TemplateTree::subtree(int id) const {
  TemplateTree t;
  if (id < 0) return t;
  splice(t.nodes_, nodes_, id, -1, node(id).rel);
  return t;
}

TemplateTree TemplateTree::replace_subtree(int id, const TemplateTree& with) const {
  TemplateTree t;
  if (id == 0) {
    if (with.empty()) return t;
    return with.with_root_relation(nodes_[0].rel);
  }
  std::function<void(int, int)> walk = [&](int src, int parent) {
    if (src == id) {
      if (!with.empty()) splice(t.nodes_, with.nodes_, 0, parent, node(src).rel);
      return;
    }
    int nid = static_cast<int>(t.nodes_.size());
    TNode n;
    n.label = node(src).label;
    n.parent = parent;
    n.rel = node(src).rel;
    t.nodes_.push_back(std::move(n));
    if (parent >= 0) t.nodes_[static_cast<std::size_t>(parent)].children.push_back(nid);
    for (int c : node(src).children) walk(c, nid);
  };
  walk(0, -1);
  return t;
}

TemplateTree TemplateTree::append_child(int id, const std::string& relation,
                                        const TemplateTree& child) const {
  if (child.empty()) return *this;
  TemplateTree t;
  std::function<void(int, int)> walk = [&](int src, int parent) {
    int nid = static_cast<int>(t.nodes_.size());
    TNode n;
    n.label = node(src).label;
    n.parent = parent;
    n.rel = node(src).rel;
    t.nodes_.push_back(std::move(n));
    if (parent >= 0) t.nodes_[static_cast<std::size_t>(parent)].children.push_back(nid);
    for (int c : node(src).children) walk(c, nid);
    if (src == id) splice(t.nodes_, child.nodes_, 0, nid, relation);
  };
  walk(0, -1);
  return t;
}

TemplateTree TemplateTree::with_root_relation(std::string relation) const {
  TemplateTree t = *this;
  if (!t.nodes_.empty()) t.nodes_[0].rel = std::move(relation);
  return t;
}

TemplateTree TemplateTree::with_label(int id, Label label) const {
  TemplateTree t = *this;
  t.nodes_.at(static_cast<std::size_t>(id)).label = std::move(label);
  return t;
}

// ---- queries -----------------------------------------------------------------

std::vector<int> TemplateTree::leaves() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].children.empty()) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::vector<int> TemplateTree::ancestors_or_self(int id) const {
  std::vector<int> out;
  for (int cur = id; cur >= 0; cur = node(cur).parent) out.push_back(cur);
  return out;
}

std::vector<std::size_t> TemplateTree::path_to(int id) const {
  std::vector<std::size_t> path;
  for (int cur = id; node(cur).parent >= 0; cur = node(cur).parent) {
    const auto& sib = node(node(cur).parent).children;
    path.push_back(static_cast<std::size_t>(std::find(sib.begin(), sib.end(), cur) - sib.begin()));
  }
  std::reverse(path.begin(), path.end());
  return path;
}

int TemplateTree::at_path(const std::vector<std::size_t>& path) const {
  if (nodes_.empty()) return -1;
  int cur = 0;
  for (std::size_t i : path) {
    const auto& ch = node(cur).children;
    if (i >= ch.size()) return -1;
    cur = ch[i];
  }
  return cur;
}

int TemplateTree::subtree_end(int id) const {
  int cur = id;
  while (!node(cur).children.empty()) cur = node(cur).children.back();
  return cur;
}

std::size_t TemplateTree::hole_count() const {
  return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const TNode& n) {
    return n.label.type_hole() || n.label.value_hole();
  }));
}

std::size_t TemplateTree::concreteness() const {
  std::size_t c = 0;
  for (const auto& n : nodes_) {
    c += n.label.bt.has_value() + n.label.t.has_value() + n.label.v.has_value();
  }
  return c;
}

std::uint64_t TemplateTree::hash() const {
  Fnv1a h;
  h.add(static_cast<std::uint64_t>(nodes_.size()));
  for (const auto& n : nodes_) {
    h.add(static_cast<std::uint64_t>(n.label.bt ? static_cast<int>(*n.label.bt) + 1 : 0));
    h.add(static_cast<std::uint64_t>(n.label.t.has_value()));
    if (n.label.t) h.add(*n.label.t);
    h.add(static_cast<std::uint64_t>(n.label.v.has_value()));
    if (n.label.v) h.add(*n.label.v);
    h.add(n.rel);
    h.add(static_cast<std::uint64_t>(n.parent + 1));
  }
  return h.value();
}

std::string TemplateTree::debug_string() const {
  if (nodes_.empty()) return "()";
  std::function<std::string(int)> render = [&](int id) {
    const TNode& n = node(id);
    std::string s = "(";
    if (!n.rel.empty()) s += n.rel + ":";
    s += n.label.bt ? std::string(to_string(*n.label.bt)) : "ABS";
    s += "/" + (n.label.t ? *n.label.t : std::string("ABS"));
    if (!n.label.v) {
      s += "=ABS";
    } else if (!n.label.v->empty()) {
      s += "=" + *n.label.v;
    }
    for (int c : n.children) s += " " + render(c);
    return s + ")";
  };
  return render(0);
}

syntax::Node TemplateTree::to_syntax() const {
  if (nodes_.empty()) return syntax::Node{};
  return to_syntax(0);
}

syntax::Node TemplateTree::to_syntax(int id) const {
  const TNode& n = node(id);
  syntax::Node out;
  if (n.label.type_hole()) {
    out.hole = syntax::HoleKind::Subtree;
    out.hole_base = n.label.bt ? std::string(to_string(*n.label.bt)) : "Expr";
    return out;
  }
  out.kind = *n.label.t;
  if (n.label.value_hole()) {
    out.hole = syntax::HoleKind::Value;
  } else {
    out.value = *n.label.v;
  }
  for (int c : n.children) out.children.push_back(syntax::Child{node(c).rel, to_syntax(c)});
  return out;
}

std::set<std::string> variable_values(const TemplateTree& t) {
  std::set<std::string> out;
  for (const auto& n : t.nodes()) {
    if (n.label.bt == BaseType::Variable && n.label.t == "Name" && n.label.v) out.insert(*n.label.v);
  }
  return out;
}

// ---- matching ----------------------------------------------------------------

bool node_match(const Label& a, const Label& b) {
  if (b.v && a.v != b.v) return false;
  if (b.bt && a.bt != b.bt) return false;
  if (!b.t) return true;
  if (a.t == b.t) return true;
  return a.bt && *b.t == to_string(*a.bt);
}

namespace {

bool match_rooted(const TemplateTree& a, int at, const TemplateTree& b, int bid, std::vector<int>* map = nullptr) {
  const TNode& bn = b.node(bid);
  const TNode& an = a.node(at);
  bool group = bn.label.t && *bn.label.t == kGroupKind && bid == 0;
  if (!group && !node_match(an.label, bn.label)) return false;
  if (map) (*map)[static_cast<std::size_t>(bid)] = at;
  // Greedy leftmost subsequence embedding of b's children into a's children.
  std::size_t j = 0;
  const auto& ach = an.children;
  for (int bc : bn.children) {
    const std::string& rel = b.node(bc).rel;
    bool found = false;
    while (j < ach.size()) {
      int ac = ach[j++];
      if (a.node(ac).rel == rel && match_rooted(a, ac, b, bc, map)) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace

bool tree_match_at(const TemplateTree& a, int at, const TemplateTree& b) {
  if (b.empty()) return true;
  if (a.empty()) return false;
  return match_rooted(a, at, b, 0);
}

bool tree_match(const TemplateTree& a, const TemplateTree& b) {
  if (b.empty()) return true;
  for (int i = 0; i < static_cast<int>(a.size()); ++i) {
    if (match_rooted(a, i, b, 0)) return true;
  }
  return false;
}

std::optional<std::vector<int>> match_mapping(const TemplateTree& a, const TemplateTree& b) {
  if (b.empty()) return std::vector<int>{};
  std::vector<int> map(b.size(), -1);
  for (int i = 0; i < static_cast<int>(a.size()); ++i) {
    if (match_rooted(a, i, b, 0, &map)) return map;
  }
  return std::nullopt;
}

std::vector<std::vector<int>> match_mappings(const TemplateTree& a, const TemplateTree& b) {
  std::vector<std::vector<int>> out;
  if (b.empty()) return out;
  for (int i = 0; i < static_cast<int>(a.size()); ++i) {
    std::vector<int> map(b.size(), -1);
    if (match_rooted(a, i, b, 0, &map)) out.push_back(std::move(map));
  }
  return out;
}

bool embeds(const TemplateTree& small, const TemplateTree& big) {
  if (small.empty() || big.empty() || !small.concrete()) return false;
  return tree_match(big, small);
}

Category category_of(const FixPattern& p) {
  if (p.before.empty() && p.after.empty()) throw InvalidPattern("fix pattern has two empty trees");
  if (p.before.empty()) return Category::Add;
  if (p.after.empty()) return Category::Remove;
  if (embeds(p.before, p.after)) return Category::Insert;
  return Category::Replace;
}

// ---- templates ---------------------------------------------------------------

namespace {

void hash_tree(Fnv1a& h, const TemplateTree& t) { h.add(t.hash()); }

}  // namespace

bool FixTemplate::same_content(const FixTemplate& other) const {
  return category == other.category && pattern == other.pattern && ic == other.ic && ec == other.ec;
}

std::uint64_t FixTemplate::content_hash() const {
  Fnv1a h;
  h.add(to_string(category));
  hash_tree(h, pattern.before);
  hash_tree(h, pattern.after);
  h.add(static_cast<std::uint64_t>(pattern.anchor.position));
  h.add(static_cast<std::uint64_t>(pattern.anchor.index.value_or(-1) + 1));
  h.add(static_cast<std::uint64_t>(pattern.anchor.embed.has_value()));
  if (pattern.anchor.embed) {
    for (std::size_t i : *pattern.anchor.embed) h.add(static_cast<std::uint64_t>(i));
  }
  hash_tree(h, ic.tree);
  for (const auto& [id, rels] : ic.rn) {
    h.add(static_cast<std::uint64_t>(id));
    h.add(rels.first);
    h.add(rels.second);
  }
  hash_tree(h, ec.before);
  hash_tree(h, ec.after);
  return h.value();
}

TemplateTree concat(const InternalContext& ic, const TemplateTree& before) {
  if (ic.tree.empty()) return before;
  if (before.empty() || ic.rn.empty()) return ic.tree;
  auto [attach, rels] = *ic.rn.begin();
  const std::string& br = rels.first;
  const TNode& root = before.node(0);
  if (root.label.t && *root.label.t == kGroupKind) {
    TemplateTree out = ic.tree;
    for (int c : root.children) out = out.append_child(attach, br, before.subtree(c));
    return out;
  }
  return ic.tree.append_child(attach, br, before);
}

std::vector<int> ClusteringTree::children_of(int i) const {
  std::vector<int> out;
  for (std::size_t j = 0; j < parent.size(); ++j) {
    if (parent[j] == i) out.push_back(static_cast<int>(j));
  }
  return out;
}

}  // namespace tyfix
