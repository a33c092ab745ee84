#include "tyfix/abstraction.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "tyfix/metrics.hpp"

namespace tyfix {

std::optional<Label> abstract_label(const Label& a, const Label& b) {
  if (a == b) return a;
  if (a.bt != b.bt) return std::nullopt;
  if (a.t == b.t) return Label{a.bt, a.t, std::nullopt};
  return Label{a.bt, std::nullopt, std::nullopt};
}

namespace {

// A merged node before renumbering: its label, source ids and children.
struct Draft {
  Label label;
  int a = -1, b = -1;
  std::string rel;
  std::vector<Draft> kids;
};

// Keeps only children whose order agrees in both inputs: a child inverted
// with respect to any sibling is dropped (symmetric in the two inputs).
void drop_crossings(std::vector<Draft>& kids, const TemplateTree& t1, const TemplateTree& t2) {
  auto pos = [](const TemplateTree& t, int id) {
    const auto& sib = t.node(t.node(id).parent).children;
    return std::find(sib.begin(), sib.end(), id) - sib.begin();
  };
  std::vector<char> bad(kids.size(), 0);
  for (std::size_t i = 0; i < kids.size(); ++i) {
    for (std::size_t j = i + 1; j < kids.size(); ++j) {
      bool o1 = pos(t1, kids[i].a) < pos(t1, kids[j].a);
      bool o2 = pos(t2, kids[i].b) < pos(t2, kids[j].b);
      if (o1 != o2) bad[i] = bad[j] = 1;
    }
  }
  std::vector<Draft> kept;
  for (std::size_t i = 0; i < kids.size(); ++i) {
    if (!bad[i]) kept.push_back(std::move(kids[i]));
  }
  kids = std::move(kept);
}

TreeAbstraction render(const Draft& root) {
  TreeAbstraction out;
  std::function<TemplateTree(const Draft&, std::vector<std::size_t>&)> rec = [&](const Draft& d,
                                                                                 std::vector<std::size_t>& path) {
    out.image1[d.a] = path;
    out.image2[d.b] = path;
    std::vector<std::pair<std::string, TemplateTree>> kids;
    for (std::size_t i = 0; i < d.kids.size(); ++i) {
      path.push_back(i);
      kids.emplace_back(d.kids[i].rel, rec(d.kids[i], path));
      path.pop_back();
    }
    return TemplateTree::make(d.label, std::move(kids));
  };
  std::vector<std::size_t> path;
  out.tree = rec(root, path).with_root_relation(root.rel);
  return out;
}

std::optional<Draft> top_down(const TemplateTree& t1, int a, const TemplateTree& t2, int b) {
  auto label = abstract_label(t1.node(a).label, t2.node(b).label);
  if (!label) return std::nullopt;
  Draft d{*label, a, b, t1.node(a).rel, {}};
  if (!label->t) return d;  // type hole: children pruned
  std::map<std::string, std::vector<int>> k2;
  for (int c : t2.node(b).children) k2[t2.node(c).rel].push_back(c);
  std::map<std::string, std::size_t> seen;
  for (int c : t1.node(a).children) {
    const std::string& rel = t1.node(c).rel;
    std::size_t k = seen[rel]++;
    auto it = k2.find(rel);
    if (it == k2.end() || k >= it->second.size()) continue;
    if (auto kid = top_down(t1, c, t2, it->second[k])) d.kids.push_back(std::move(*kid));
  }
  drop_crossings(d.kids, t1, t2);
  return d;
}

}  // namespace

TreeAbstraction abstract_tree(const TemplateTree& t1, const TemplateTree& t2) {
  if (t1.empty() || t2.empty()) return {};
  auto d = top_down(t1, 0, t2, 0);
  if (!d) return {};
  return render(*d);
}

FixPattern abstract_pattern(const FixPattern& p1, const FixPattern& p2) {
  TreeAbstraction b = abstract_tree(p1.before, p2.before);
  TreeAbstraction a = abstract_tree(p1.after, p2.after);
  if (b.tree.empty() && a.tree.empty()) throw ResultEmptyPattern("both abstracted trees are empty");
  if (b.tree.empty() != (p1.before.empty() && p2.before.empty()) ||
      a.tree.empty() != (p1.after.empty() && p2.after.empty())) {
    throw IncompatiblePatterns("abstraction would change the pattern's shape");
  }
  if (p1.anchor.position != p2.anchor.position || p1.anchor.index != p2.anchor.index) {
    throw IncompatiblePatterns("anchors disagree");
  }
  FixPattern out{b.tree, a.tree, {}};
  out.anchor.position = p1.anchor.position;
  out.anchor.index = p1.anchor.index;
  if (p1.anchor.embed || p2.anchor.embed) {
    if (!p1.anchor.embed || !p2.anchor.embed) throw IncompatiblePatterns("only one pattern re-embeds its match");
    int e1 = p1.after.at_path(*p1.anchor.embed);
    int e2 = p2.after.at_path(*p2.anchor.embed);
    auto i1 = a.image1.find(e1);
    auto i2 = a.image2.find(e2);
    if (i1 == a.image1.end() || i2 == a.image2.end() || i1->second != i2->second) {
      throw IncompatiblePatterns("re-embedding sites do not correspond");
    }
    out.anchor.embed = i1->second;
  }
  return out;
}

namespace {

std::vector<int> relation_positions(const TemplateTree& t) {
  std::vector<int> idx(t.size(), 0);
  for (const auto& n : t.nodes()) {
    std::map<std::string, int> seen;
    for (int c : n.children) idx[static_cast<std::size_t>(c)] = seen[t.node(c).rel]++;
  }
  return idx;
}

TreeAbstraction bottom_up(const TemplateTree& t1, const TemplateTree& t2, const std::vector<std::pair<int, int>>& pairs) {
  if (t1.empty() || t2.empty()) return {};
  auto idx1 = relation_positions(t1);
  auto idx2 = relation_positions(t2);
  std::map<int, std::set<int>> p1, p2;
  std::map<std::pair<int, int>, Label> labels;
  for (auto [a, b] : pairs) {
    for (;;) {
      auto label = abstract_label(t1.node(a).label, t2.node(b).label);
      if (!label) break;
      labels[{a, b}] = *label;
      p1[a].insert(b);
      p2[b].insert(a);
      const TNode& na = t1.node(a);
      const TNode& nb = t2.node(b);
      if (!label->t || na.parent < 0 || nb.parent < 0 || na.rel != nb.rel) break;
      bool under_context = t1.node(na.parent).label.t == std::string(kContextKind) &&
                           t2.node(nb.parent).label.t == std::string(kContextKind);
      if (!under_context && idx1[static_cast<std::size_t>(a)] != idx2[static_cast<std::size_t>(b)]) break;
      auto up = abstract_label(t1.node(na.parent).label, t2.node(nb.parent).label);
      if (!up || !up->t) break;  // parents must keep their type to hold children
      a = na.parent;
      b = nb.parent;
    }
  }
  auto consistent = [&](int a, int b) { return p1[a].size() == 1 && p2[b].size() == 1 && p1[a].count(b); };
  if (!labels.count({0, 0}) || !consistent(0, 0)) return {};
  // Children of each kept pair, found by scanning consistent pairs.
  std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> kids;
  for (const auto& [ab, l] : labels) {
    auto [a, b] = ab;
    if (a == 0 || b == 0 || !consistent(a, b)) continue;
    kids[{t1.node(a).parent, t2.node(b).parent}].push_back(ab);
  }
  std::function<Draft(int, int)> build = [&](int a, int b) {
    Draft d{labels.at({a, b}), a, b, t1.node(a).rel, {}};
    if (!d.label.t) return d;
    auto it = kids.find({a, b});
    if (it != kids.end()) {
      auto ch = it->second;
      std::sort(ch.begin(), ch.end());
      for (auto [x, y] : ch) {
        if (t1.node(x).rel != t2.node(y).rel) continue;
        d.kids.push_back(build(x, y));
      }
    }
    drop_crossings(d.kids, t1, t2);
    return d;
  };
  return render(build(0, 0));
}

}  // namespace

TemplateTree abstract_context_tree(const TemplateTree& t1, const TemplateTree& t2,
                                   const std::vector<std::pair<int, int>>& pairs) {
  return bottom_up(t1, t2, pairs).tree;
}

namespace {

std::vector<std::pair<int, int>> context_pairs(const TemplateTree& t1, const TemplateTree& t2) {
  if (t1.empty() || t2.empty()) return {};
  if (t1.size() == 1 && t2.size() == 1) return {{0, 0}};
  return context_distance(t1, t2).pairs;
}

}  // namespace

InternalContext abstract_internal(const InternalContext& c1, const InternalContext& c2) {
  InternalContext out;
  if (c1.empty() && c2.empty()) return out;
  if (c1.empty() || c2.empty()) throw IncompatiblePatterns("only one template has an internal context");
  TreeAbstraction r = bottom_up(c1.tree, c2.tree, context_pairs(c1.tree, c2.tree));
  out.tree = r.tree;
  for (const auto& [n1, rels] : c1.rn) {
    auto i1 = r.image1.find(n1);
    if (i1 == r.image1.end()) continue;
    for (const auto& [n2, rels2] : c2.rn) {
      auto i2 = r.image2.find(n2);
      if (i2 != r.image2.end() && i2->second == i1->second && rels2 == rels) {
        out.rn[r.tree.at_path(i1->second)] = rels;
      }
    }
  }
  if (out.rn.size() != std::min(c1.rn.size(), c2.rn.size()) || out.rn.empty()) {
    throw IncompatiblePatterns("internal contexts attach their patterns differently");
  }
  return out;
}

ExternalContext abstract_external(const ExternalContext& c1, const ExternalContext& c2) {
  return {abstract_context_tree(c1.before, c2.before, context_pairs(c1.before, c2.before)),
          abstract_context_tree(c1.after, c2.after, context_pairs(c1.after, c2.after))};
}

}  // namespace tyfix
