#include "tyfix/matcher.hpp"

namespace tyfix {

namespace {

const Label kAnyVar{BaseType::Variable, std::string("Name"), std::nullopt};
// Matches any node, whatever its base type.
const Label kAny{std::nullopt, std::nullopt, std::nullopt};

// Template tree of the first statement of `src`, or of its expression when
// `expression` is set, with the root relation `rel`.
TemplateTree snippet(const std::string& src, const std::string& rel, bool expression = false) {
  syntax::Node m = syntax::parse_source(src);
  const syntax::Node& stmt = m.children.at(0).node;
  return TemplateTree::from_syntax(expression ? stmt.children.at(0).node : stmt, rel);
}

// Replaces the labels at the given paths; a type hole also drops children.
TemplateTree holes(TemplateTree t, const std::vector<std::pair<std::vector<std::size_t>, Label>>& at) {
  for (const auto& [path, label] : at) {
    int id = t.at_path(path);
    if (!label.t) {
      t = t.replace_subtree(id, TemplateTree::leaf(label).with_root_relation(t.node(id).rel));
    } else {
      t = t.with_label(id, label);
    }
  }
  return t;
}

FixTemplate make(const std::string& name, FixPattern p, std::optional<Category> category = std::nullopt) {
  FixTemplate t;
  t.id = "baseline/" + name;
  t.pattern = std::move(p);
  t.category = category ? *category : category_of(t.pattern);
  t.instance_count = 1;
  return t;
}

FixTemplate wrap_variable(const std::string& func) {
  FixPattern p;
  p.before = TemplateTree::leaf(kAnyVar);
  p.after = holes(snippet(func + "(x)\n", "", true), {{{1}, kAnyVar}});
  p.anchor.embed = std::vector<std::size_t>{1};
  return make("wrap-" + func, p, Category::Insert);
}

}  // namespace

Forest baseline_pack() {
  std::vector<FixTemplate> ts;
  for (const char* f : {"str", "int", "float", "list"}) ts.push_back(wrap_variable(f));
  {
    // x.decode(...) on a value that is already text: drop the call.
    FixPattern p;
    p.before = holes(snippet("x.decode('utf-8')\n", "", true), {{{0, 0}, kAnyVar}, {{1}, kAny}});
    p.after = TemplateTree::leaf(kAnyVar);
    ts.push_back(make("drop-decode", p));
  }
  {
    // x == None  ->  x is None
    FixPattern p;
    p.before = holes(snippet("x == None\n", "", true), {{{0}, kAny}});
    p.after = holes(snippet("x is None\n", "", true), {{{0}, kAny}});
    ts.push_back(make("none-identity", p));
  }
  {
    // Guard: return early when a value is None.
    FixPattern p;
    p.after = holes(snippet("if x is None:\n    return\n", "body"), {{{0, 0}, kAny}});
    p.anchor.position = Anchor::Position::Before;
    ts.push_back(make("none-guard", p));
  }
  {
    // Guard: skip the statement unless the value has the expected type.
    FixPattern p;
    p.after = holes(snippet("if not isinstance(x, t):\n    return\n", "body"),
                    {{{0, 1, 1}, kAny}, {{0, 1, 2}, kAny}});
    p.anchor.position = Anchor::Position::Before;
    ts.push_back(make("type-guard", p));
  }
  {
    // Default an optional value before use.
    FixPattern p;
    p.after = holes(snippet("x = x or ''\n", "body"), {{{0}, kAnyVar}, {{1, 1}, kAnyVar}, {{1, 2}, kAny}});
    p.anchor.position = Anchor::Position::Before;
    ts.push_back(make("default-value", p));
  }
  Forest out;
  for (auto& t : ts) {
    ClusteringTree ct;
    ct.templates.push_back(std::move(t));
    ct.parent.push_back(-1);
    ct.root = 0;
    out.push_back(std::move(ct));
  }
  return out;
}

}  // namespace tyfix
