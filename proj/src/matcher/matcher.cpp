#include "tyfix/matcher.hpp"

#include <algorithm>
#include <deque>
#include <functional>

#include "json.hpp"
#include "tyfix/metrics.hpp"

namespace tyfix {

namespace {

using syntax::Node;
using syntax::NodePath;

struct ListPosition {
  NodePath owner;
  std::string relation;
  std::size_t index = 0;
};

ListPosition list_position(const Node& root, const NodePath& path) {
  ListPosition out;
  out.owner.assign(path.begin(), path.end() - 1);
  const Node& p = syntax::node_at(root, out.owner);
  out.relation = p.children[path.back()].relation;
  for (std::size_t i = 0; i < path.back(); ++i) out.index += p.children[i].relation == out.relation;
  return out;
}

// Syntax paths of the nodes of from_syntax(node), in the same preorder.
void syntax_paths(const Node& n, NodePath& at, std::vector<NodePath>& out) {
  out.push_back(at);
  if (n.hole == syntax::HoleKind::Subtree) return;
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    at.push_back(i);
    syntax_paths(n.children[i].node, at, out);
    at.pop_back();
  }
}

std::vector<std::size_t> index_range(std::size_t from, std::size_t to) {
  std::vector<std::size_t> out;
  for (std::size_t i = from; i < to; ++i) out.push_back(i);
  return out;
}

}  // namespace

BuggyProgramView make_view(const Node& module, const std::vector<int>& bug_lines, std::size_t window, ViewSite* site) {
  std::vector<NodePath> paths;
  for (auto p : syntax::deepest_statement_paths(module, bug_lines)) {
    if (!p.empty() && syntax::node_at(module, p).kind == "ExceptHandler") p.pop_back();
    if (std::find(paths.begin(), paths.end(), p) == paths.end()) paths.push_back(p);
  }
  std::sort(paths.begin(), paths.end());
  BuggyProgramView view;
  std::vector<NodePath> node_paths;
  if (paths.size() == 1) {
    ListPosition pos = list_position(module, paths[0]);
    view.bug = TemplateTree::from_syntax(syntax::node_at(module, paths[0]), pos.relation);
    NodePath at = paths[0];
    syntax_paths(syntax::node_at(module, paths[0]), at, node_paths);
  } else {
    std::vector<std::pair<std::string, TemplateTree>> parts;
    node_paths.push_back(NodePath(paths[0].begin(), paths[0].end() - 1));
    for (const auto& p : paths) {
      ListPosition pos = list_position(module, p);
      parts.emplace_back(pos.relation, TemplateTree::from_syntax(syntax::node_at(module, p), pos.relation));
      NodePath at = p;
      syntax_paths(syntax::node_at(module, p), at, node_paths);
    }
    view.bug = TemplateTree::make({BaseType::Stmt, std::string(kGroupKind), std::string()}, std::move(parts));
  }
  ListPosition first = list_position(module, paths.front());
  ListPosition last = list_position(module, paths.back());
  const Node& first_owner = syntax::node_at(module, first.owner);
  const Node& last_owner = syntax::node_at(module, last.owner);
  std::size_t begin = first.index >= window ? first.index - window : 0;
  view.before = context_tree(first_owner, first.relation, index_range(begin, first.index), {});
  std::size_t end = std::min(last.index + 1 + window, last_owner.count(last.relation));
  view.after = context_tree(last_owner, last.relation, index_range(last.index + 1, end), {});
  if (site) {
    site->statements = paths;
    site->node_paths = std::move(node_paths);
  }
  return view;
}

bool template_match(const BuggyProgramView& view, const FixTemplate& tpl) {
  return tree_match(view.bug, buggy_key_tree(tpl)) && tree_match(view.before, tpl.ec.before) &&
         tree_match(view.after, tpl.ec.after);
}

namespace {

// Walks each tree from its root through matched nodes only.
template <typename Emit>
void walk_matched(const Forest& forest, const BuggyProgramView& view, Emit emit) {
  for (const auto& tree : forest) {
    if (tree.root < 0 || !template_match(view, tree.root_template())) continue;
    std::deque<int> queue{tree.root};
    while (!queue.empty()) {
      int n = queue.front();
      queue.pop_front();
      std::vector<int> matched;
      for (int c : tree.children_of(n)) {
        if (template_match(view, tree.templates[static_cast<std::size_t>(c)])) matched.push_back(c);
      }
      emit(tree.templates[static_cast<std::size_t>(n)], matched.empty());
      queue.insert(queue.end(), matched.begin(), matched.end());
    }
  }
}

}  // namespace

std::vector<FixTemplate> bfs_select(const Forest& forest, const BuggyProgramView& view) {
  std::vector<FixTemplate> out;
  walk_matched(forest, view, [&](const FixTemplate& t, bool frontier) {
    if (frontier) out.push_back(t);
  });
  return out;
}

std::vector<FixTemplate> matched_templates(const Forest& forest, const BuggyProgramView& view) {
  std::vector<FixTemplate> out;
  walk_matched(forest, view, [&](const FixTemplate& t, bool) { out.push_back(t); });
  return out;
}

std::vector<FixTemplate> RankedTemplates::flatten() const {
  std::vector<FixTemplate> out;
  for (const auto& g : groups) out.insert(out.end(), g.templates.begin(), g.templates.end());
  return out;
}

RankedTemplates rank(const std::vector<FixTemplate>& matched) {
  if (matched.empty()) throw EmptyMatch("no template matched the buggy program");
  std::map<std::uint64_t, std::vector<FixTemplate>> by_key;
  for (const auto& t : matched) by_key[buggy_key_tree(t).hash()].push_back(t);
  RankedTemplates out;
  for (auto& [key, ts] : by_key) {
    std::sort(ts.begin(), ts.end(), [](const FixTemplate& a, const FixTemplate& b) {
      if (a.instance_count != b.instance_count) return a.instance_count > b.instance_count;
      std::uint64_t ha = a.content_hash(), hb = b.content_hash();
      if (ha != hb) return ha < hb;
      return a.id < b.id;
    });
    out.groups.push_back({key, std::move(ts)});
  }
  std::stable_sort(out.groups.begin(), out.groups.end(), [](const RankedGroup& a, const RankedGroup& b) {
    double ra = abstraction_ratio(a.templates.front().pattern.after);
    double rb = abstraction_ratio(b.templates.front().pattern.after);
    if (ra != rb) return ra < rb;
    return a.key < b.key;
  });
  return out;
}

bool subsumes(const FixTemplate& general, const BuggyProgramView& view, const FixTemplate& specific) {
  return general.category == specific.category && template_match(view, general) &&
         tree_match(specific.pattern.after, general.pattern.after);
}

std::string CoverageReport::to_json() const {
  nlohmann::json j;
  j["total"] = total;
  j["covered"] = covered;
  j["ratio"] = ratio;
  j["per_fix"] = nlohmann::json::array();
  for (const auto& e : per_fix) {
    nlohmann::json f{{"id", e.id}, {"covered", e.covered}, {"matched_template_ids", e.matched_template_ids}};
    if (!e.error.empty()) f["error"] = e.error;
    j["per_fix"].push_back(std::move(f));
  }
  return j.dump(2);
}

namespace {

using Candidates = std::function<std::vector<FixTemplate>(const BuggyProgramView&)>;

CoverageReport coverage(const std::vector<FixInstance>& fixes, const Candidates& candidates) {
  CoverageReport r;
  for (const auto& fix : fixes) {
    CoverageEntry e;
    e.id = fix.id;
    try {
      ParsedFix parsed = parse_fix_detailed(fix);
      Node module = syntax::parse_source(parsed.buggy_src);
      BuggyProgramView view = make_view(module, parsed.bug_lines);
      for (const auto& t : candidates(view)) {
        if (subsumes(t, view, parsed.tpl)) e.matched_template_ids.push_back(t.id);
      }
      std::sort(e.matched_template_ids.begin(), e.matched_template_ids.end());
      e.covered = !e.matched_template_ids.empty();
      ++r.total;
      r.covered += e.covered;
    } catch (const std::exception& ex) {
      e.error = ex.what();
    }
    r.per_fix.push_back(std::move(e));
  }
  r.ratio = r.total == 0 ? 0.0 : static_cast<double>(r.covered) / static_cast<double>(r.total);
  return r;
}

}  // namespace

CoverageReport template_coverage(const Forest& forest, const std::vector<FixInstance>& fixes) {
  return coverage(fixes, [&](const BuggyProgramView& view) { return matched_templates(forest, view); });
}

CoverageReport brute_force_coverage(const Forest& forest, const std::vector<FixInstance>& fixes) {
  return coverage(fixes, [&](const BuggyProgramView&) {
    std::vector<FixTemplate> all;
    for (const auto& tree : forest) all.insert(all.end(), tree.templates.begin(), tree.templates.end());
    return all;
  });
}

}  // namespace tyfix
