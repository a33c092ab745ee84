#include <algorithm>

#include "tyfix/promptgen.hpp"

namespace tyfix {

namespace {

using syntax::Node;
using syntax::NodePath;

bool is_group(const TemplateTree& t) { return !t.empty() && t.node(0).label.t == std::string(kGroupKind); }

// Top-level units of a pattern tree: a Group's children, or the root.
std::vector<int> units(const TemplateTree& t) {
  if (t.empty()) return {};
  if (is_group(t)) return t.node(0).children;
  return {0};
}

// Children-vector position of the k-th child under `relation`; the end of
// that relation's run (or of all children) when there are fewer.
std::size_t vector_position(const Node& n, const std::string& relation, std::size_t k) {
  std::size_t seen = 0, after_last = n.children.size();
  bool any = false;
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    if (n.children[i].relation != relation) continue;
    if (seen++ == k) return i;
    after_last = i + 1;
    any = true;
  }
  return any ? after_last : n.children.size();
}

std::size_t relation_index(const Node& parent, std::size_t vector_index) {
  const std::string& rel = parent.children[vector_index].relation;
  std::size_t k = 0;
  for (std::size_t i = 0; i < vector_index; ++i) k += parent.children[i].relation == rel;
  return k;
}

// Grammar-required children that the template pruned become dummy holes.
void complete(Node& n) {
  if (n.hole == syntax::HoleKind::Subtree) return;
  for (auto& c : n.children) complete(c.node);
  const auto& required = syntax::required_children(n.kind);
  for (std::size_t k = 0; k < required.size(); ++k) {
    const auto& rc = required[k];
    // Dummies go after the children of this and earlier required relations.
    std::size_t at = 0;
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      for (std::size_t e = 0; e <= k; ++e) {
        if (n.children[i].relation == required[e].relation) at = i + 1;
      }
    }
    for (std::size_t have = n.count(rc.relation); have < rc.min_count; ++have) {
      Node dummy;
      dummy.hole = syntax::HoleKind::Subtree;
      dummy.hole_base = rc.relation == "op" || rc.relation == "ops" ? "Op" : "Expr";
      n.children.insert(n.children.begin() + static_cast<long>(at++), {rc.relation, std::move(dummy)});
    }
  }
}

Node& at_relative(Node& root, const std::vector<std::size_t>& path) {
  Node* n = &root;
  for (std::size_t i : path) n = &n->children.at(i).node;
  return *n;
}

struct Site {
  const TemplateTree* key;
  std::vector<int> map;  // key node -> view node
  std::vector<int> b_units;  // key ids of B's units
  int attach = -1;  // key id of the rn node, or -1 at statement level
};

class Applier {
 public:
  Applier(const Node& program, const ViewSite& vs, const FixTemplate& tpl) : program_(program), vs_(vs), tpl_(tpl) {}

  Application at(const Site& s) {
    const TemplateTree& b = tpl_.pattern.before;
    site_ = &s;
    Application app;
    app.template_id = tpl_.id;
    app.program = program_;
    std::vector<Node> replacement;
    for (int u : units(tpl_.pattern.after)) replacement.push_back(build_unit(u));

    if (s.attach < 0) {
      statement_level(app, std::move(replacement), b.empty());
    } else {
      expression_level(app, std::move(replacement));
    }
    return app;
  }

 private:
  const NodePath& path_of(int key_id) const {
    int v = site_->map.at(static_cast<std::size_t>(key_id));
    if (v < 0) throw NoMatchSite("pattern node without an image");
    return vs_.node_paths.at(static_cast<std::size_t>(v));
  }

  // Key id of B's node `b`.
  int key_of(int b) const {
    if (site_->attach < 0) return b;
    if (is_group(tpl_.pattern.before)) return site_->b_units.front() + b - 1;
    return site_->b_units.front() + b;
  }

  Node build_unit(int unit) {
    const TemplateTree& a = tpl_.pattern.after;
    const TemplateTree& b = tpl_.pattern.before;
    Node out = a.to_syntax(unit);
    std::vector<std::size_t> unit_path = a.path_to(unit);
    auto relative = [&](int id) {
      auto p = a.path_to(id);
      return std::vector<std::size_t>(p.begin() + static_cast<long>(unit_path.size()), p.end());
    };
    auto within = [&](int id) { return id >= unit && id <= a.subtree_end(unit); };
    // The re-embedded original.
    int embed = tpl_.pattern.anchor.embed ? a.at_path(*tpl_.pattern.anchor.embed) : -1;
    if (embed >= 0 && within(embed) && !b.empty()) {
      at_relative(out, relative(embed)) = syntax::node_at(program_, path_of(key_of(0)));
    }
    // Holes that sit where B has the same hole take the matched code.
    for (int id = unit; id <= a.subtree_end(unit); ++id) {
      if (embed >= 0 && id >= embed && id <= a.subtree_end(embed)) continue;
      const Label& l = a.node(id).label;
      if (!l.type_hole() && !l.value_hole()) continue;
      int bid = b.empty() ? -1 : b.at_path(a.path_to(id));
      if (bid < 0 || !(b.node(bid).label == l)) continue;
      if (is_group(b) && bid == 0) continue;
      const Node& image = syntax::node_at(program_, path_of(key_of(bid)));
      Node& target = at_relative(out, relative(id));
      if (l.type_hole()) {
        target = image;
      } else if (image.kind == target.kind) {
        target.value = image.value;
        target.hole = syntax::HoleKind::None;
      }
    }
    complete(out);
    return out;
  }

  void statement_level(Application& app, std::vector<Node> replacement, bool add) {
    NodePath owner;
    std::string rel;
    std::size_t insert_at = 0;
    std::size_t orig_first = 0, orig_last = 0;
    if (add) {
      bool after = tpl_.pattern.anchor.position == Anchor::Position::After;
      const NodePath& stmt = after ? vs_.statements.back() : vs_.statements.front();
      owner.assign(stmt.begin(), stmt.end() - 1);
      const Node& parent = syntax::node_at(program_, owner);
      rel = parent.children[stmt.back()].relation;
      insert_at = stmt.back() + (after ? 1 : 0);
      orig_first = orig_last = relation_index(parent, stmt.back()) + (after ? 1 : 0);
    } else {
      std::vector<std::size_t> removed;
      for (int u : site_->b_units) {
        const NodePath& p = path_of(u);
        if (p.empty()) throw NoMatchSite("statement image is the module");
        NodePath parent(p.begin(), p.end() - 1);
        if (removed.empty()) {
          owner = parent;
        } else if (parent != owner) {
          throw NoMatchSite("matched statements are not siblings");
        }
        removed.push_back(p.back());
      }
      std::sort(removed.begin(), removed.end());
      const Node& parent = syntax::node_at(program_, owner);
      rel = parent.children[removed.front()].relation;
      orig_first = relation_index(parent, removed.front());
      orig_last = relation_index(parent, removed.back()) + 1;
      Node& mut = syntax::node_at(app.program, owner);
      for (auto it = removed.rbegin(); it != removed.rend(); ++it) {
        mut.children.erase(mut.children.begin() + static_cast<long>(*it));
      }
      insert_at = removed.front();
    }
    Node& mut = syntax::node_at(app.program, owner);
    std::size_t first_rel = relation_index_or_end(mut, rel, insert_at);
    if (replacement.empty() && mut.count(rel) == 0 && mut.kind != "Module") {
      Node pass;
      pass.kind = "Pass";
      replacement.push_back(std::move(pass));
    }
    for (std::size_t i = 0; i < replacement.size(); ++i) {
      mut.children.insert(mut.children.begin() + static_cast<long>(insert_at + i), {rel, std::move(replacement[i])});
    }
    app.owner = owner;
    app.relation = rel;
    app.begin = first_rel;
    app.end = first_rel + replacement.size();
    app.original_begin = orig_first;
    app.original_end = orig_last;
  }

  // Relation-local index a child inserted at vector position `at` would get.
  static std::size_t relation_index_or_end(const Node& n, const std::string& rel, std::size_t at) {
    std::size_t k = 0;
    for (std::size_t i = 0; i < at && i < n.children.size(); ++i) k += n.children[i].relation == rel;
    return k;
  }

  void expression_level(Application& app, std::vector<Node> replacement) {
    const auto& [br, ar] = tpl_.ic.rn.begin()->second;
    NodePath x = path_of(site_->attach);
    Node& mut = syntax::node_at(app.program, x);
    std::size_t insert_at;
    if (site_->b_units.empty()) {
      insert_at = vector_position(mut, ar, static_cast<std::size_t>(tpl_.pattern.anchor.index.value_or(0)));
    } else {
      std::vector<std::size_t> removed;
      for (int u : site_->b_units) {
        const NodePath& p = path_of(u);
        if (p.size() != x.size() + 1 || !std::equal(x.begin(), x.end(), p.begin())) {
          throw NoMatchSite("pattern image is not a child of its context");
        }
        removed.push_back(p.back());
      }
      std::sort(removed.begin(), removed.end());
      for (auto it = removed.rbegin(); it != removed.rend(); ++it) {
        mut.children.erase(mut.children.begin() + static_cast<long>(*it));
      }
      insert_at = removed.front();
    }
    for (std::size_t i = 0; i < replacement.size(); ++i) {
      mut.children.insert(mut.children.begin() + static_cast<long>(insert_at + i), {ar, std::move(replacement[i])});
    }
    // The rewritten statement is the nearest statement around the context.
    NodePath stmt = x;
    while (!stmt.empty() && !syntax::is_statement_kind(syntax::node_at(app.program, stmt).kind)) stmt.pop_back();
    if (stmt.empty()) throw NoMatchSite("context is not inside a statement");
    app.owner.assign(stmt.begin(), stmt.end() - 1);
    const Node& parent = syntax::node_at(app.program, app.owner);
    app.relation = parent.children[stmt.back()].relation;
    app.begin = app.original_begin = relation_index(parent, stmt.back());
    app.end = app.original_end = app.begin + 1;
  }

  const Node& program_;
  const ViewSite& vs_;
  const FixTemplate& tpl_;
  const Site* site_ = nullptr;
};

}  // namespace

std::vector<Application> apply_template(const Node& program, const BuggyProgramView& view, const ViewSite& site,
                                        const FixTemplate& tpl) {
  if (!template_match(view, tpl)) throw NoMatchSite("template " + tpl.id + " does not match the program");
  TemplateTree key = buggy_key_tree(tpl);
  Applier applier(program, site, tpl);
  std::vector<Application> out;
  if (key.empty()) {
    Site s{&key, {}, {}, -1};
    out.push_back(applier.at(s));
    return out;
  }
  bool expression = !tpl.ic.empty() && !tpl.ic.rn.empty();
  for (auto& map : match_mappings(view.bug, key)) {
    Site s{&key, std::move(map), {}, -1};
    if (expression) {
      s.attach = tpl.ic.rn.begin()->first;
      std::size_t n = units(tpl.pattern.before).size();
      const auto& kids = key.node(s.attach).children;
      if (n > kids.size()) throw NoMatchSite("pattern not attached to its context");
      s.b_units.assign(kids.end() - static_cast<long>(n), kids.end());
    } else {
      s.b_units = units(key);
    }
    out.push_back(applier.at(s));
  }
  if (out.empty()) throw NoMatchSite("no match site for template " + tpl.id);
  return out;
}

}  // namespace tyfix
