#include <string>

#include "doctest.h"
#include "tyfix/fix_parser.hpp"

using namespace tyfix;

namespace {

FixInstance one(const std::string& buggy, const std::string& fixed) { return {"t", buggy, fixed, {}, {}}; }

bool has_value(const TemplateTree& t, const std::string& v) {
  for (const auto& n : t.nodes()) {
    if (n.label.v == v) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("line diff and unified diff agree") {
  std::string a = "a\nb\nc\nd\ne\nf\ng\nh\ni\nj\n";
  std::string b = "a\nB\nc\nd\ne\nf\ng\nh\nI\nI2\nj\n";
  auto hunks = line_diff(a, b);
  REQUIRE(hunks.size() == 2);
  CHECK(hunks[0] == Hunk{1, 1, 1, 1});
  CHECK(hunks[1] == Hunk{8, 1, 8, 2});
  CHECK(apply_unified_diff(a, unified_diff(a, b, "a", "b")) == b);
  CHECK(apply_unified_diff("x\n", unified_diff("x\n", "", "a", "b")).empty());
  CHECK_THROWS_AS(apply_unified_diff(a, "@@ -1,1 +1,1 @@\n-zzz\n+y\n"), UnparseableDiff);
  CHECK_THROWS_AS(apply_unified_diff(a, "nothing here\n"), UnparseableDiff);
}

TEST_CASE("split_fix groups connected edits") {
  std::string buggy =
      "def f(x):\n    y = x + 1\n    return y\n\n\ndef g(z):\n    w = z\n    return w\n";
  std::string fixed =
      "def f(x):\n    y = int(x) + 1\n    return y\n\n\ndef g(z):\n    w = str(z)\n    return w\n";
  auto insts = split_fix("c1", buggy, fixed);
  REQUIRE(insts.size() == 2);
  CHECK(insts[0].id == "c1#1");
  CHECK(fix_id_of(insts[1].id) == "c1");
  CHECK(insts[0].fixed_src.find("int(x)") != std::string::npos);
  CHECK(insts[0].fixed_src.find("str(z)") == std::string::npos);
  CHECK(insts[1].fixed_src.find("str(z)") != std::string::npos);
  CHECK(insts[0].deleted_lines.size() == 1);
  CHECK(insts[0].deleted_lines[0].start_line == 2);

  std::string same_stmt_b = "def f(x):\n    if x:\n        y = x\n    return y\n";
  std::string same_stmt_a = "def f(x):\n    if x is not None:\n        y = str(x)\n    return y\n";
  CHECK(split_fix("c2", same_stmt_b, same_stmt_a).size() == 1);
}

TEST_CASE("split_fix limits and comment-only changes") {
  std::string buggy, fixed;
  for (int i = 0; i < 30; ++i) {
    buggy += "x" + std::to_string(i) + " = " + std::to_string(i) + "\n";
    fixed += "x" + std::to_string(i) + " = str(" + std::to_string(i) + ")\n";
  }
  CHECK_THROWS_AS(split_fix("big", buggy, fixed), OversizeCommit);
  CHECK_THROWS_AS(split_fix("c", "x = 1\n", "# note\nx = 1\n"), EmptyChange);
  CHECK_THROWS_AS(split_fix("c", "x = (\n", "x = 1\n"), syntax::SyntaxError);
}

TEST_CASE("identical sources give EmptyChange") {
  CHECK_THROWS_AS(extract_change(one("x = 1\n", "x = 1\n")), EmptyChange);
  CHECK_THROWS_AS(extract_change(one("x = 1\n", "x = (1)  # same\n")), EmptyChange);
}

TEST_CASE("expression-level If condition change") {
  std::string buggy =
      "def f(value):\n"
      "    value = boolean(value, strict=False)\n"
      "    if isinstance(value, string_types):\n"
      "        return value\n"
      "    return None\n";
  std::string fixed =
      "def f(value):\n"
      "    value = boolean(value, strict=False)\n"
      "    if isinstance(to_native(value), string_types):\n"
      "        return value\n"
      "    return None\n";
  auto parsed = parse_fix_detailed(one(buggy, fixed));
  const FixTemplate& t = parsed.tpl;
  CHECK(t.category == Category::Replace);
  REQUIRE(t.ic.tree.size() == 1);
  CHECK(t.ic.tree.node(0).label.t == "If");
  CHECK(t.ic.rn.at(0) == std::pair<std::string, std::string>{"test", "test"});
  CHECK(t.pattern.before.node(0).label.t == "Call");
  CHECK_FALSE(has_value(t.pattern.before, "return"));
  CHECK(has_value(t.pattern.after, "to_native"));
  // Body statements are not part of the pattern.
  for (const auto& n : t.pattern.after.nodes()) CHECK(n.label.t != "Return");
  // The preceding assignment shares `value`; its keyword is pruned.
  REQUIRE_FALSE(t.ec.before.empty());
  CHECK(t.ec.before.node(0).label.t == std::string(kContextKind));
  CHECK(has_value(t.ec.before, "boolean"));
  CHECK_FALSE(has_value(t.ec.before, "strict"));
  CHECK(t.ec.after.empty());
  CHECK(parsed.bug_lines == std::vector<int>{3});
  CHECK(t.instance_count == 1);
  CHECK(t.instance_ids == std::set<std::string>{"t"});
}

TEST_CASE("wrapping an expression is an Insert") {
  std::string buggy =
      "if user:\n"
      "    user_pass = '%s:%s' % (unquote(user), unquote(password))\n"
      "    creds = base64.b64encode(user_pass).strip()\n"
      "else:\n"
      "    creds = None\n";
  std::string fixed =
      "if user:\n"
      "    user_pass = to_bytes('%s:%s' % (unquote(user), unquote(password)))\n"
      "    creds = base64.b64encode(user_pass).strip()\n"
      "else:\n"
      "    creds = None\n";
  auto t = parse_fix(one(buggy, fixed));
  CHECK(t.category == Category::Insert);
  CHECK(t.ic.tree.node(0).label.t == "Assign");
  CHECK(t.pattern.before.node(0).label.t == "BinOp");
  REQUIRE(t.pattern.anchor.embed.has_value());
  int at = t.pattern.after.at_path(*t.pattern.anchor.embed);
  REQUIRE(at > 0);
  CHECK(t.pattern.after.subtree(at).with_root_relation("") == t.pattern.before.with_root_relation(""));
  // The assignment target sits outside the pattern, so nothing is shared.
  CHECK(t.ec.empty());
}

TEST_CASE("guard insertion is an Add with external context") {
  std::string buggy =
      "def f(items):\n"
      "    n = len(items)\n"
      "    return items[0] / n\n";
  std::string fixed =
      "def f(items):\n"
      "    n = len(items)\n"
      "    if n == 0:\n"
      "        return None\n"
      "    return items[0] / n\n";
  auto parsed = parse_fix_detailed(one(buggy, fixed));
  const auto& t = parsed.tpl;
  CHECK(t.category == Category::Add);
  CHECK(t.ic.empty());
  CHECK(t.pattern.before.empty());
  CHECK(t.pattern.after.node(0).label.t == "If");
  CHECK(t.pattern.anchor.position == Anchor::Position::Before);
  CHECK(has_value(t.ec.before, "n"));
  CHECK(parsed.bug_lines == std::vector<int>{3});
}

TEST_CASE("statement removal and replacement") {
  auto rm = parse_fix(one("x = 1\nprint(x)\ny = 2\n", "x = 1\ny = 2\n"));
  CHECK(rm.category == Category::Remove);
  CHECK(rm.pattern.after.empty());
  CHECK(rm.ic.empty());

  auto rep = parse_fix(one("def f(a):\n    x = a\n", "def f(a):\n    return a\n"));
  CHECK(rep.category == Category::Replace);
  CHECK(rep.ic.empty());
  CHECK(rep.pattern.before.node(0).label.t == "Assign");
  CHECK(rep.pattern.after.node(0).label.t == "Return");

  auto grp = parse_fix(one("a = 1\nb = 2\nc = 3\n", "a = 1\nb = str(2)\nc = str(3)\n"));
  CHECK(grp.pattern.before.node(0).label.t == std::string(kGroupKind));
  CHECK(grp.pattern.before.node(0).children.size() == 2);
}

TEST_CASE("expression additions") {
  auto call = parse_fix(one("f(a)\n", "f(a, b)\n"));
  CHECK(call.category == Category::Insert);
  CHECK(call.ic.tree.node(0).label.t == "Expr");
  CHECK_FALSE(call.pattern.anchor.embed.has_value());

  auto ret = parse_fix(one("def f(a):\n    return\n", "def f(a):\n    return a\n"));
  CHECK(ret.category == Category::Add);
  CHECK(ret.ic.tree.node(0).label.t == "Return");
  REQUIRE(ret.pattern.anchor.index.has_value());
  CHECK(*ret.pattern.anchor.index == 0);
}

TEST_CASE("handler edits anchor on the try statement") {
  std::string buggy = "x = 0\ntry:\n    x = f(x)\nexcept ValueError:\n    pass\n";
  std::string fixed = "x = 0\ntry:\n    x = f(x)\nexcept (ValueError, TypeError):\n    pass\n";
  Change c = extract_change(one(buggy, fixed));
  CHECK(c.site.expression_level);
  CHECK(c.ic.tree.node(0).label.t == "ExceptHandler");
  CHECK(c.anchor_relation == "body");
  CHECK(c.anchor_begin == 1);
}
