#include <algorithm>
#include <map>

#include "tyfix/fix_parser.hpp"

namespace tyfix {

using syntax::Node;
using syntax::NodePath;

namespace {

// Statement lists, plus the handler list of a Try, are edited at statement level.
bool is_block_relation(std::string_view rel) { return syntax::is_statement_list_relation(rel) || rel == "handlers"; }

bool is_block_kind(std::string_view kind) { return syntax::is_statement_kind(kind) || kind == "ExceptHandler"; }

// Indices into Node::children of the children under `rel`.
std::vector<std::size_t> rel_indices(const Node& n, std::string_view rel) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    if (n.children[i].relation == rel) out.push_back(i);
  }
  return out;
}

std::vector<std::string> relations_of(const Node& b, const Node& a) {
  std::vector<std::string> out;
  for (const Node* n : {&b, &a}) {
    for (const auto& c : n->children) {
      if (std::find(out.begin(), out.end(), c.relation) == out.end()) out.push_back(c.relation);
    }
  }
  return out;
}

struct Region {
  std::string rel;
  std::size_t b0 = 0, b1 = 0, a0 = 0, a1 = 0;  // relation-local positions
};

// Differing regions per relation, aligned with an LCS over structural hashes.
std::vector<Region> diff_children(const Node& b, const Node& a) {
  std::vector<Region> out;
  for (const auto& rel : relations_of(b, a)) {
    std::vector<std::uint64_t> hb, ha;
    for (const Node* c : b.children_of(rel)) hb.push_back(syntax::structural_hash(*c));
    for (const Node* c : a.children_of(rel)) ha.push_back(syntax::structural_hash(*c));
    std::size_t n = hb.size(), m = ha.size();
    std::vector<std::vector<std::uint32_t>> dp(n + 1, std::vector<std::uint32_t>(m + 1, 0));
    for (std::size_t i = n; i-- > 0;) {
      for (std::size_t j = m; j-- > 0;) {
        dp[i][j] = hb[i] == ha[j] ? dp[i + 1][j + 1] + 1 : std::max(dp[i + 1][j], dp[i][j + 1]);
      }
    }
    std::size_t i = 0, j = 0;
    std::optional<Region> cur;
    while (i < n || j < m) {
      if (i < n && j < m && hb[i] == ha[j]) {
        if (cur) out.push_back(*cur), cur.reset();
        ++i, ++j;
        continue;
      }
      if (!cur) cur = Region{rel, i, i, j, j};
      if (j < m && (i == n || dp[i][j + 1] >= dp[i + 1][j])) {
        cur->a1 = ++j;
      } else {
        cur->b1 = ++i;
      }
    }
    if (cur) out.push_back(*cur);
  }
  return out;
}

// Template tree of children [from, to) of `rel`: nothing, the single child,
// or a Group of them.
TemplateTree range_tree(const Node& owner, const std::string& rel, std::size_t from, std::size_t to,
                        BaseType group_bt) {
  auto kids = owner.children_of(rel);
  if (from == to) return {};
  if (to - from == 1) return TemplateTree::from_syntax(*kids[from], rel);
  std::vector<std::pair<std::string, TemplateTree>> parts;
  for (std::size_t k = from; k < to; ++k) parts.emplace_back(rel, TemplateTree::from_syntax(*kids[k], rel));
  return TemplateTree::make({group_bt, std::string(kGroupKind), std::string()}, std::move(parts))
      .with_root_relation(rel);
}

// Relation and relation-local index of the node at `path`.
std::pair<std::string, std::size_t> position_in_parent(const Node& root, const NodePath& path) {
  NodePath parent(path.begin(), path.end() - 1);
  const Node& p = syntax::node_at(root, parent);
  const std::string& rel = p.children[path.back()].relation;
  std::size_t idx = 0;
  for (std::size_t i = 0; i < path.back(); ++i) idx += p.children[i].relation == rel;
  return {rel, idx};
}

// Lines covered by children [from, to) of `rel`.
std::vector<int> lines_of(const Node& owner, const std::string& rel, std::size_t from, std::size_t to) {
  std::vector<int> out;
  auto kids = owner.children_of(rel);
  for (std::size_t k = from; k < to && k < kids.size(); ++k) {
    for (int l = kids[k]->span.start.line; l <= kids[k]->span.end.line; ++l) out.push_back(l);
  }
  return out;
}

void set_anchor(Change& c, const Node& broot, const NodePath& owner, const std::string& rel, std::size_t begin,
                std::size_t end) {
  // An edited handler list anchors on the Try statement itself.
  if (rel == "handlers" && !owner.empty()) {
    auto [prel, idx] = position_in_parent(broot, owner);
    c.anchor_owner.assign(owner.begin(), owner.end() - 1);
    c.anchor_relation = prel;
    c.anchor_begin = idx;
    c.anchor_end = idx + 1;
    return;
  }
  c.anchor_owner = owner;
  c.anchor_relation = rel;
  c.anchor_begin = begin;
  c.anchor_end = end;
}

Change statement_change(const Node& broot, const Node& aroot, const NodePath& pb, const NodePath& pa,
                        const Region& r) {
  const Node& b = syntax::node_at(broot, pb);
  const Node& a = syntax::node_at(aroot, pa);
  Change c;
  c.site = {false, pb, pa, r.rel, r.b0, r.b1, r.a0, r.a1};
  c.pattern.before = range_tree(b, r.rel, r.b0, r.b1, BaseType::Stmt);
  c.pattern.after = range_tree(a, r.rel, r.a0, r.a1, BaseType::Stmt);
  std::size_t count = b.count(r.rel);
  if (r.b0 == r.b1) {
    if (count == 0) throw EmptyChange("cannot anchor an insertion into an empty statement list");
    // Anchor on the statement that follows the insertion, else the one before.
    bool before = r.b0 < count;
    c.pattern.anchor.position = before ? Anchor::Position::Before : Anchor::Position::After;
    std::size_t site = before ? r.b0 : r.b0 - 1;
    set_anchor(c, broot, pb, r.rel, site, site + 1);
    c.bug_lines = lines_of(b, r.rel, site, site + 1);
  } else {
    set_anchor(c, broot, pb, r.rel, r.b0, r.b1);
    c.bug_lines = lines_of(b, r.rel, r.b0, r.b1);
  }
  c.bug_tree = c.pattern.before;
  c.fix_tree = c.pattern.after;
  return c;
}

Change expression_change(const Node& broot, const Node& aroot, const NodePath& pb, const NodePath& pa,
                         const Region& r, const std::string& x_rel) {
  const Node& b = syntax::node_at(broot, pb);
  const Node& a = syntax::node_at(aroot, pa);
  Change c;
  c.site = {true, pb, pa, r.rel, r.b0, r.b1, r.a0, r.a1};
  c.pattern.before = range_tree(b, r.rel, r.b0, r.b1, BaseType::Expr);
  c.pattern.after = range_tree(a, r.rel, r.a0, r.a1, BaseType::Expr);
  if (r.b0 == r.b1) c.pattern.anchor.index = static_cast<int>(r.b0);
  c.ic.tree = TemplateTree::leaf({classify_base_type(b.kind, x_rel, b.value), b.kind, b.value});
  c.ic.rn[0] = {r.rel, r.rel};
  auto [rel, idx] = position_in_parent(broot, pb);
  if (b.kind == "ExceptHandler") {
    NodePath try_path(pb.begin(), pb.end() - 1);
    auto [trel, tidx] = position_in_parent(broot, try_path);
    c.anchor_owner.assign(try_path.begin(), try_path.end() - 1);
    c.anchor_relation = trel;
    c.anchor_begin = tidx;
    c.anchor_end = tidx + 1;
  } else {
    c.anchor_owner.assign(pb.begin(), pb.end() - 1);
    c.anchor_relation = rel;
    c.anchor_begin = idx;
    c.anchor_end = idx + 1;
  }
  c.bug_lines = r.b0 < r.b1 ? lines_of(b, r.rel, r.b0, r.b1) : std::vector<int>{b.span.start.line};
  c.bug_tree = concat(c.ic, c.pattern.before);
  InternalContext after_ic = c.ic;
  c.fix_tree = concat(after_ic, c.pattern.after);
  return c;
}

void finish(Change& c) {
  if (c.pattern.before.empty() && c.pattern.after.empty()) throw EmptyChange("edit removes nothing and adds nothing");
  const auto& b = c.pattern.before;
  const auto& a = c.pattern.after;
  if (!b.empty() && !a.empty() && b.node(0).label.t != std::string(kGroupKind)) {
    // Where the original B image sits inside A, for Insert application.
    TemplateTree key = b.with_root_relation("");
    for (std::size_t i = 1; i < a.size(); ++i) {
      if (a.subtree(static_cast<int>(i)).with_root_relation("") == key) {
        c.pattern.anchor.embed = a.path_to(static_cast<int>(i));
        break;
      }
    }
  }
  std::sort(c.bug_lines.begin(), c.bug_lines.end());
  c.bug_lines.erase(std::unique(c.bug_lines.begin(), c.bug_lines.end()), c.bug_lines.end());
}

}  // namespace

Change extract_change(const Node& broot, const Node& aroot) {
  if (syntax::structurally_equal(broot, aroot)) throw EmptyChange("buggy and fixed programs are identical");
  NodePath pb, pa;
  for (;;) {
    const Node& b = syntax::node_at(broot, pb);
    const Node& a = syntax::node_at(aroot, pa);
    auto regions = diff_children(b, a);
    bool one_rel = !regions.empty() && std::all_of(regions.begin(), regions.end(),
                                                   [&](const Region& r) { return r.rel == regions[0].rel; });
    bool whole = b.value != a.value || b.kind != a.kind || !one_rel;
    if (!whole) {
      Region r{regions[0].rel, regions.front().b0, regions.back().b1, regions.front().a0, regions.back().a1};
      if (is_block_relation(r.rel)) {
        auto bk = b.children_of(r.rel);
        auto ak = a.children_of(r.rel);
        if (regions.size() == 1 && r.b1 - r.b0 == 1 && r.a1 - r.a0 == 1 && bk[r.b0]->kind == ak[r.a0]->kind &&
            is_block_kind(bk[r.b0]->kind)) {
          // One statement edited in place: descend into it.
          pb.push_back(rel_indices(b, r.rel)[r.b0]);
          pa.push_back(rel_indices(a, r.rel)[r.a0]);
          continue;
        }
        Change c = statement_change(broot, aroot, pb, pa, r);
        finish(c);
        return c;
      }
      if (!pb.empty() && is_block_kind(b.kind)) {
        auto [x_rel, idx] = position_in_parent(broot, pb);
        (void)idx;
        Change c = expression_change(broot, aroot, pb, pa, r, x_rel);
        finish(c);
        return c;
      }
    }
    // Edits spread over several relations: replace the whole statement.
    if (pb.empty()) throw EmptyChange("edit does not sit in a statement list");
    NodePath ob(pb.begin(), pb.end() - 1), oa(pa.begin(), pa.end() - 1);
    auto [rel, bi] = position_in_parent(broot, pb);
    auto [arel, ai] = position_in_parent(aroot, pa);
    (void)arel;
    Change c = statement_change(broot, aroot, ob, oa, Region{rel, bi, bi + 1, ai, ai + 1});
    finish(c);
    return c;
  }
}

Change extract_change(const FixInstance& inst) {
  return extract_change(syntax::parse_source(inst.buggy_src), syntax::parse_source(inst.fixed_src));
}

std::pair<FixPattern, InternalContext> split_level(const Change& change) { return {change.pattern, change.ic}; }

namespace {

// Keeps nodes whose subtree mentions a shared variable; a kept Call keeps its callee.
TemplateTree prune(const TemplateTree& t, int id, const std::set<std::string>& vars, std::vector<char>& keep) {
  const TNode& n = t.node(id);
  std::vector<std::pair<std::string, TemplateTree>> kids;
  for (int c : n.children) {
    bool forced = n.label.t == std::string("Call") && t.node(c).rel == "func";
    if (forced) {
      kids.emplace_back(t.node(c).rel, t.subtree(c));
    } else if (keep[static_cast<std::size_t>(c)]) {
      kids.emplace_back(t.node(c).rel, prune(t, c, vars, keep));
    }
  }
  return TemplateTree::make(n.label, std::move(kids)).with_root_relation(n.rel);
}

TemplateTree prune_tree(const TemplateTree& t, const std::set<std::string>& vars) {
  std::vector<char> keep(t.size(), 0);
  for (int i = static_cast<int>(t.size()) - 1; i >= 0; --i) {
    const TNode& n = t.node(i);
    bool k = n.label.bt == BaseType::Variable && n.label.t == std::string("Name") && n.label.v &&
             vars.count(*n.label.v);
    for (int c : n.children) k = k || keep[static_cast<std::size_t>(c)];
    keep[static_cast<std::size_t>(i)] = k;
  }
  if (!keep[0]) return {};
  return prune(t, 0, vars, keep);
}

}  // namespace

TemplateTree context_tree(const Node& owner, const std::string& relation, const std::vector<std::size_t>& indices,
                          const std::set<std::string>& prune_to) {
  auto kids = owner.children_of(relation);
  std::vector<std::pair<std::string, TemplateTree>> parts;
  for (std::size_t i : indices) {
    if (i >= kids.size()) continue;
    TemplateTree t = TemplateTree::from_syntax(*kids[i], "body");
    if (!prune_to.empty()) t = prune_tree(t, prune_to);
    if (!t.empty()) parts.emplace_back("body", std::move(t));
  }
  if (parts.empty()) return {};
  return TemplateTree::make({BaseType::Stmt, std::string(kContextKind), std::string()}, std::move(parts));
}

ExternalContext build_external_context(const Node& buggy, const Change& change, const FixParserOptions& options) {
  std::set<std::string> vars = variable_values(change.pattern.before);
  for (const auto& v : variable_values(change.pattern.after)) vars.insert(v);
  ExternalContext ec;
  if (vars.empty()) return ec;
  const Node& owner = syntax::node_at(buggy, change.anchor_owner);
  auto kids = owner.children_of(change.anchor_relation);
  auto shares = [&](std::size_t i) {
    for (const auto& v : variable_values(TemplateTree::from_syntax(*kids[i], "body"))) {
      if (vars.count(v)) return true;
    }
    return false;
  };
  std::vector<std::size_t> before, after;
  std::size_t w = options.context_window;
  for (std::size_t i = change.anchor_begin >= w ? change.anchor_begin - w : 0; i < change.anchor_begin; ++i) {
    if (shares(i)) before.push_back(i);
  }
  for (std::size_t i = change.anchor_end; i < kids.size() && i < change.anchor_end + w; ++i) {
    if (shares(i)) after.push_back(i);
  }
  ec.before = context_tree(owner, change.anchor_relation, before, vars);
  ec.after = context_tree(owner, change.anchor_relation, after, vars);
  return ec;
}

ParsedFix parse_fix_detailed(const FixInstance& inst, const FixParserOptions& options) {
  Node buggy = syntax::parse_source(inst.buggy_src);
  Node fixed = syntax::parse_source(inst.fixed_src);
  Change c = extract_change(buggy, fixed);
  ParsedFix out;
  out.tpl.id = inst.id;
  out.tpl.pattern = c.pattern;
  out.tpl.category = category_of(c.pattern);
  out.tpl.ic = c.ic;
  out.tpl.ec = build_external_context(buggy, c, options);
  out.tpl.instance_count = 1;
  out.tpl.instance_ids = {inst.id};
  out.buggy_src = inst.buggy_src;
  out.fixed_src = inst.fixed_src;
  out.bug_lines = c.bug_lines;
  return out;
}

FixTemplate parse_fix(const FixInstance& inst, const FixParserOptions& options) {
  return parse_fix_detailed(inst, options).tpl;
}

}  // namespace tyfix
