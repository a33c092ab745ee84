#include "doctest.h"
#include "random_trees.hpp"
#include "tyfix/abstraction.hpp"
#include "tyfix/fix_parser.hpp"
#include "tyfix/metrics.hpp"

using namespace tyfix;

namespace {

FixTemplate fix(const std::string& buggy, const std::string& fixed) {
  return parse_fix(FixInstance{"t", buggy, fixed, {}, {}});
}

Label L(BaseType bt, const char* t, const char* v) { return {bt, std::string(t), std::string(v)}; }

}  // namespace

TEST_CASE("abstract_label cases") {
  Label x = L(BaseType::Variable, "Name", "x");
  Label y = L(BaseType::Variable, "Name", "y");
  Label call = L(BaseType::Expr, "Call", "");
  Label binop = L(BaseType::Expr, "BinOp", "");
  CHECK(abstract_label(x, x) == x);
  CHECK(abstract_label(x, y) == Label{BaseType::Variable, std::string("Name"), std::nullopt});
  CHECK(abstract_label(call, binop) == Label{BaseType::Expr, std::nullopt, std::nullopt});
  CHECK_FALSE(abstract_label(x, call).has_value());
}

TEST_CASE("pattern abstraction of two call wraps") {
  // Two hand-built Insert patterns: str(a + b) and to_bytes(a % b).
  auto wrap = [](Label func, Label op) {
    auto inner = TemplateTree::make(L(BaseType::Expr, "BinOp", ""),
                                    {{"left", TemplateTree::leaf(L(BaseType::Variable, "Name", "a"))},
                                     {"op", TemplateTree::leaf(op)},
                                     {"right", TemplateTree::leaf(L(BaseType::Variable, "Name", "b"))}});
    FixPattern p;
    p.before = inner.with_root_relation("value");
    p.after = TemplateTree::make(L(BaseType::Expr, "Call", ""), {{"func", TemplateTree::leaf(func)},
                                                                  {"args", inner}})
                  .with_root_relation("value");
    p.anchor.embed = std::vector<std::size_t>{1};
    return p;
  };
  FixPattern p1 = wrap(L(BaseType::Variable, "Name", "to_bytes"), L(BaseType::Op, "Add", ""));
  FixPattern p2 = wrap(L(BaseType::Variable, "Name", "to_text"), L(BaseType::Op, "Mod", ""));
  FixPattern g = abstract_pattern(p1, p2);
  CHECK(g.after.node(1).label == Label{BaseType::Variable, std::string("Name"), std::nullopt});
  CHECK(g.after.node(4).label == Label{BaseType::Op, std::nullopt, std::nullopt});
  REQUIRE(g.anchor.embed.has_value());
  CHECK(*g.anchor.embed == std::vector<std::size_t>{1});
  CHECK(tree_match(p1.after, g.after));
  CHECK(tree_match(p2.after, g.after));
  CHECK(abstract_pattern(p1, p1) == p1);
}

TEST_CASE("type conversion of a variable generalizes to an expression") {
  auto a = fix("y = f(x)\n", "y = str(f(x))\n");
  auto b = fix("y = a + b\n", "y = to_bytes(a + b)\n");
  REQUIRE(a.category == Category::Insert);
  REQUIRE(b.category == Category::Insert);
  FixPattern g = abstract_pattern(a.pattern, b.pattern);
  // Call vs BinOp share the Expr base type: a type hole.
  CHECK(g.before.size() == 1);
  CHECK(g.before.node(0).label == Label{BaseType::Expr, std::nullopt, std::nullopt});
  REQUIRE(g.anchor.embed.has_value());
  CHECK(tree_match(a.pattern.before, g.before));
  CHECK(tree_match(b.pattern.after, g.after));
}

TEST_CASE("pattern abstraction failures") {
  auto add = fix("x = 1\n", "x = 1\ny = 2\n");
  auto rm = fix("x = 1\ny = 2\n", "x = 1\n");
  CHECK_THROWS_AS(abstract_pattern(add.pattern, rm.pattern), ResultEmptyPattern);
  auto r1 = fix("x = 1\n", "x = y\n");
  auto r2 = fix("x = 1\n", "x = f()\n");
  CHECK_THROWS_AS(abstract_pattern(r1.pattern, r2.pattern), IncompatiblePatterns);
}

TEST_CASE("external context abstraction") {
  std::string body = "    if isinstance(value, str):\n        return value\n";
  auto a = fix("def f(value):\n    value = boolean(value)\n" + body,
               "def f(value):\n    value = boolean(value)\n    if isinstance(str(value), str):\n        return value\n");
  auto b = fix("def f(value):\n    value = coerce(value)\n" + body,
               "def f(value):\n    value = coerce(value)\n    if isinstance(str(value), str):\n        return value\n");
  REQUIRE_FALSE(a.ec.before.empty());
  ExternalContext g = abstract_external(a.ec, b.ec);
  CHECK(tree_match(a.ec.before, g.before));
  CHECK(tree_match(b.ec.before, g.before));
  CHECK(g.before.hole_count() >= 1);
  CHECK(abstract_external(a.ec, a.ec) == a.ec);
  CHECK(abstract_external(a.ec, ExternalContext{}).empty());
}

TEST_CASE("internal context abstraction") {
  auto a = fix("if x:\n    pass\n", "if f(x):\n    pass\n");
  auto b = fix("while x:\n    pass\n", "while f(x):\n    pass\n");
  InternalContext g = abstract_internal(a.ic, b.ic);
  REQUIRE(g.tree.size() == 1);
  CHECK(g.tree.node(0).label == Label{BaseType::Stmt, std::nullopt, std::nullopt});
  CHECK(g.rn.at(0) == std::pair<std::string, std::string>{"test", "test"});
  CHECK(abstract_internal(a.ic, a.ic) == a.ic);
  auto c = fix("x = y\n", "x = f(y)\n");
  CHECK_THROWS_AS(abstract_internal(a.ic, c.ic), IncompatiblePatterns);
}

TEST_CASE("random abstraction soundness and commutativity") {
  tyfix::testing::RandomTrees gen(21);
  for (int i = 0; i < 500; ++i) {
    TemplateTree x = gen.tree(10);
    TemplateTree y = gen.pick(0, 1) ? gen.mutate(x, 0.3) : gen.tree(10);
    TemplateTree g = abstract_tree(x, y).tree;
    CHECK(tree_match(x, g));
    CHECK(tree_match(y, g));
    CHECK(g == abstract_tree(y, x).tree);
    CHECK(abstract_tree(x, x).tree == x);
    TemplateTree c = abstract_context_tree(x, y, context_distance(x, y).pairs);
    CHECK(tree_match(x, c));
    CHECK(tree_match(y, c));
    CHECK(c == abstract_context_tree(y, x, context_distance(y, x).pairs));
  }
}
