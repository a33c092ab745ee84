#include <fstream>
#include <string>

#include "doctest.h"
#include "tyfix/serialize.hpp"
#include "tyfix/template.hpp"

using namespace tyfix;

namespace {

// Template tree of the first statement's expression value, or of the statement.
TemplateTree expr_tree(const std::string& src) {
  auto m = syntax::parse_source(src);
  const auto& stmt = *m.child("body");
  if (stmt.kind == "Expr") return TemplateTree::from_syntax(*stmt.child("value"), "value");
  return TemplateTree::from_syntax(stmt, "body");
}

}  // namespace

TEST_CASE("base type table") {
  CHECK(classify_base_type("BoolOp", "value") == BaseType::Expr);
  CHECK(classify_base_type("BinOp", "value") == BaseType::Expr);
  CHECK(classify_base_type("UnaryOp", "value") == BaseType::Expr);
  CHECK(classify_base_type("If", "body") == BaseType::Stmt);
  CHECK(classify_base_type("Return", "body") == BaseType::Stmt);
  CHECK(classify_base_type("Add", "op") == BaseType::Op);
  CHECK(classify_base_type("Constant", "value", "1") == BaseType::Literal);
  CHECK(classify_base_type("Attribute", "func", "x") == BaseType::Attribute);
  CHECK(classify_base_type("Name", "func", "isinstance") == BaseType::Builtin);
  CHECK(classify_base_type("Name", "func", "str") == BaseType::Type);
  CHECK(classify_base_type("Name", "annotation", "Foo") == BaseType::Type);
  CHECK(classify_base_type("Name", "args", "user") == BaseType::Variable);
  CHECK(classify_base_type("Name", "func", "to_bytes") == BaseType::Variable);
}

TEST_CASE("base type table is total over the grammar") {
  for (const auto& kind : syntax::all_node_kinds()) {
    BaseType bt = classify_base_type(kind, "value", "x");
    CAPTURE(kind);
    if (syntax::is_statement_kind(kind)) CHECK(bt == BaseType::Stmt);
    if (syntax::is_operator_kind(kind)) CHECK(bt == BaseType::Op);
  }
}

TEST_CASE("base type table round-trips through JSON") {
  auto table = BaseTypeTable::from_json(BaseTypeTable::defaults().to_json());
  for (const auto& kind : syntax::all_node_kinds()) {
    for (const char* v : {"x", "str", "len"}) {
      CHECK(table.classify(kind, "args", v) == classify_base_type(kind, "args", v));
    }
  }
  CHECK_THROWS(BaseTypeTable::from_json(R"({"kinds":{"If":"Nope"},"builtins":[],"type_names":[],"annotation_relations":[]})"));
}

TEST_CASE("the documented base type table is the default") {
  std::ifstream in(std::string(TYFIX_DOCS) + "/base_types.json");
  REQUIRE(in);
  std::string text(std::istreambuf_iterator<char>(in), {});
  CHECK(BaseTypeTable::from_json(text).to_json() == BaseTypeTable::defaults().to_json());
}

TEST_CASE("preorder ids") {
  TemplateTree t = expr_tree("isinstance(to_native(value), string_types)\n");
  REQUIRE(t.size() == 6);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const TNode& n = t.node(static_cast<int>(i));
    for (std::size_t k = 1; k < n.children.size(); ++k) CHECK(n.children[k] > n.children[k - 1]);
    if (n.parent >= 0) CHECK(n.parent < static_cast<int>(i));
  }
  CHECK(t.node(0).label.t == "Call");
  CHECK(t.node(1).label.bt == BaseType::Builtin);
  CHECK(t.leaves().size() == 4);
}

TEST_CASE("category predicates") {
  FixPattern p;
  CHECK_THROWS_AS(category_of(p), InvalidPattern);
  p.after = expr_tree("if x:\n    pass\n");
  CHECK(category_of(p) == Category::Add);
  p.before = p.after;
  p.after = {};
  CHECK(category_of(p) == Category::Remove);
  p.before = expr_tree("f(x)\n");
  p.after = expr_tree("g(f(x))\n");
  CHECK(category_of(p) == Category::Insert);
  p.before = expr_tree("unquote(user)\n");
  p.after = expr_tree("ascii(user)\n");
  CHECK(category_of(p) == Category::Replace);
}

TEST_CASE("node and tree match") {
  Label concrete{BaseType::Variable, std::string("Name"), std::string("x")};
  Label value_hole{BaseType::Variable, std::string("Name"), std::nullopt};
  Label type_hole{BaseType::Variable, std::nullopt, std::nullopt};
  Label base_named{BaseType::Variable, std::string("Variable"), std::nullopt};
  CHECK(node_match(concrete, concrete));
  CHECK(node_match(concrete, value_hole));
  CHECK(node_match(concrete, type_hole));
  CHECK(node_match(concrete, base_named));
  CHECK_FALSE(node_match(value_hole, concrete));
  Label other{BaseType::Literal, std::string("Constant"), std::string("x")};
  CHECK_FALSE(node_match(other, type_hole));

  TemplateTree big = expr_tree("f(a, b, c)\n");
  TemplateTree small = expr_tree("f(a, c)\n");
  CHECK(tree_match(big, small));
  CHECK_FALSE(tree_match(small, big));
  CHECK(tree_match(big, TemplateTree{}));
  TemplateTree reordered = expr_tree("f(c, a)\n");
  CHECK_FALSE(tree_match(big, reordered));
}

TEST_CASE("subtree editing keeps preorder") {
  TemplateTree t = expr_tree("f(a, g(b))\n");
  int g = -1;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t.node(static_cast<int>(i)).label.v == "g") g = t.node(static_cast<int>(i)).parent;
  }
  REQUIRE(g > 0);
  TemplateTree sub = t.subtree(g);
  CHECK(sub.node(0).label.t == "Call");
  CHECK(sub.size() == 3);
  TemplateTree removed = t.replace_subtree(g, {});
  CHECK(removed.size() == t.size() - 3);
  TemplateTree back = removed.append_child(0, "args", sub);
  CHECK(back == t);
  CHECK(t.at_path(t.path_to(g)) == g);
  CHECK(t.subtree_end(0) == static_cast<int>(t.size()) - 1);
}

TEST_CASE("to_syntax renders holes") {
  TemplateTree t = expr_tree("str(x)\n");
  Label func = t.node(1).label;
  func.t.reset();
  func.v.reset();
  t = t.with_label(1, func);
  CHECK(syntax::unparse(t.to_syntax()) == "<HOLE>(x)");
}

TEST_CASE("value escaping") {
  CHECK(decode_value(encode_value(std::nullopt)) == std::nullopt);
  for (std::string v : {"", "ABS", "\\ABS", "\\", "x", "\\\\ABS"}) {
    CAPTURE(v);
    CHECK(decode_value(encode_value(v)) == v);
  }
  CHECK(encode_value(std::string("ABS")) != "ABS");
}

TEST_CASE("template serialization round-trip") {
  FixTemplate t;
  t.id = "Insert/0/0";
  t.category = Category::Insert;
  t.pattern.before = expr_tree("value\n").with_root_relation("args");
  t.pattern.after = expr_tree("to_native(value)\n").with_root_relation("args");
  t.pattern.anchor.embed = std::vector<std::size_t>{1};
  t.ic.tree = TemplateTree::leaf({BaseType::Expr, std::string("Call"), std::string("")});
  t.ic.rn[0] = {"args", "args"};
  Label lit{BaseType::Literal, std::string("Constant"), std::string("ABS")};
  t.ec.before = TemplateTree::make({BaseType::Stmt, std::string("Context"), std::nullopt},
                                   {{"body", TemplateTree::leaf(lit)}});
  t.instance_count = 2;
  t.instance_ids = {"a", "b"};
  FixTemplate back = template_from_json(template_to_json(t));
  CHECK(back.same_content(t));
  CHECK(back.id == t.id);
  CHECK(back.instance_ids == t.instance_ids);
  CHECK(back.instance_count == 2);
  CHECK(back.ec.before.node(1).label.v == "ABS");
  CHECK_FALSE(back.ec.before.node(0).label.v.has_value());

  ClusteringTree ct;
  ct.templates = {t, t, t};
  ct.templates[1].id = "c1";
  ct.templates[2].id = "c2";
  ct.parent = {-1, 0, 0};
  ct.root = 0;
  Forest f{ct};
  Forest g = forest_from_string(forest_to_string(f));
  REQUIRE(g.size() == 1);
  CHECK(g[0].parent == ct.parent);
  CHECK(g[0].templates[2].id == "c2");
  CHECK(forest_to_string(g) == forest_to_string(f));
}

TEST_CASE("schema errors") {
  CHECK_THROWS_AS(forest_from_string("{"), SchemaError);
  CHECK_THROWS_AS(forest_from_string(R"({"schema_version": 9, "trees": []})"), SchemaError);
  CHECK_THROWS_AS(tree_from_json(nlohmann::json::parse(R"({"nodes": []})")), SchemaError);
  CHECK_THROWS_AS(tree_from_json(nlohmann::json::parse(
                      R"({"rt":0,"nodes":[{"id":0,"bt":"Expr","t":"Call","v":"","parent":-1,"rel":""},{"id":1,"bt":"Nope","t":"x","v":"","parent":0,"rel":"a"}]})")),
                  SchemaError);
  CHECK(forest_from_string(R"({"schema_version": 1, "trees": []})").empty());
}
