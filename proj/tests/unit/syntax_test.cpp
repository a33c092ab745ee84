#include <string>
#include <vector>

#include "doctest.h"
#include "tyfix/syntax.hpp"

using namespace tyfix::syntax;

namespace {

const std::vector<std::string> kSnippets = {
    "x = 1\n",
    "a, b = b, a\n",
    "x = (1,)\n",
    "f(a, *args, key=1, **kw)\n",
    "print(x for x in range(3))\n",
    "y = [i * 2 for i in xs if i > 0]\n",
    "d = {k: v for k, v in items.items()}\n",
    "s = {1, 2, 3}\n",
    "e = {}\n",
    "t = ()\n",
    "z = {**a, 'b': 1}\n",
    "v = a if b else c\n",
    "w = lambda x, y=2: x + y\n",
    "n = not a and b or c\n",
    "m = -x ** 2\n",
    "p = (-x) ** 2\n",
    "q = (a + b) * c\n",
    "r = a - (b - c)\n",
    "c = a < b <= c is not None\n",
    "k = x not in y\n",
    "u = obj.attr[1:2, ::3]\n",
    "i = (1).real\n",
    "x += 1\n",
    "x: int = 5\n",
    "del a[0], b\n",
    "assert x, 'msg'\n",
    "raise ValueError('bad') from err\n",
    "import os.path as p, sys\n",
    "from ..pkg import a as b, c\n",
    "from x import *\n",
    "global g\n",
    "def f(a, b: int = 1, *args, c, d=2, **kw) -> str:\n    return a\n",
    "def g(a, /, b, *, c):\n    pass\n",
    "async def h():\n    await x\n    async with a as b:\n        pass\n",
    "@decorator\nclass C(Base, metaclass=M):\n    x = 1\n",
    "if a:\n    pass\nelif b:\n    x = 1\nelse:\n    y = 2\n",
    "while True:\n    break\nelse:\n    pass\n",
    "for i, j in pairs:\n    continue\n",
    "try:\n    f()\nexcept (A, B) as e:\n    raise\nexcept:\n    pass\nelse:\n    g()\nfinally:\n    h()\n",
    "with open(p) as f, lock:\n    data = f.read()\n",
    "def gen():\n    yield 1\n    x = yield\n    yield from other()\n",
    "if (n := len(a)) > 10:\n    pass\n",
    "s = 'a' 'b'\n",
    "f'{x}'\n",
    "x = a[b](c).d\n",
    "x = ~a | b ^ c & d << 1\n",
    "return_value = 0x1F + 1.5e3 + 2j\n",
};

}  // namespace

TEST_CASE("normalize is idempotent") {
  for (const auto& src : kSnippets) {
    CAPTURE(src);
    std::string once = normalize(src);
    CHECK(normalize(once) == once);
  }
}

TEST_CASE("canonical text of simple snippets is the source itself") {
  for (const auto& src : kSnippets) {
    CAPTURE(src);
    if (src == "s = 'a' 'b'\n" || src == "f'{x}'\n") continue;
    CHECK(normalize(src) == src);
  }
}

TEST_CASE("comments and blank lines are dropped") {
  CHECK(normalize("# hi\n\nx = 1  # trailing\n\n\ny = 2\n") == "x = 1\ny = 2\n");
}

TEST_CASE("parenthesized tuples and redundant parens normalize") {
  CHECK(normalize("x = (a)\n") == "x = a\n");
  CHECK(normalize("x = ((a + b))\n") == "x = a + b\n");
  CHECK(normalize("f((a, b))\n") == "f((a, b))\n");
  CHECK(normalize("for x in (1, 2):\n  pass\n") == "for x in 1, 2:\n    pass\n");
}

TEST_CASE("syntax errors carry positions") {
  try {
    parse_source("x = (1,\n");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.line() >= 1);
  }
  CHECK_THROWS_AS(parse_source("def f(:\n  pass\n"), SyntaxError);
  CHECK_THROWS_AS(parse_source("if x:\npass\n"), SyntaxError);
  CHECK_THROWS_AS(parse_source("x = )\n"), SyntaxError);
  CHECK_THROWS_AS(parse_source("  x = 1\n y = 2\n"), SyntaxError);
}

TEST_CASE("structure of a call") {
  Node m = parse_source("user_pass = str('%s:%s' % (user, pw))\n");
  REQUIRE(m.count("body") == 1);
  const Node& assign = *m.child("body");
  CHECK(assign.kind == "Assign");
  const Node& call = *assign.child("value");
  CHECK(call.kind == "Call");
  CHECK(call.child("func")->kind == "Name");
  CHECK(call.child("func")->value == "str");
  const Node& binop = *call.child("args");
  CHECK(binop.kind == "BinOp");
  CHECK(binop.child("op")->kind == "Mod");
  CHECK(binop.child("right")->kind == "Tuple");
}

TEST_CASE("spans and deepest statements") {
  std::string src =
      "def f(x):\n"
      "    if x:\n"
      "        y = 1\n"
      "        z = 2\n"
      "    return y\n";
  Node m = parse_source(src);
  auto stmts = deepest_statements(m, SourceSpan(3, 3));
  REQUIRE(stmts.size() == 1);
  CHECK(stmts[0]->kind == "Assign");
  CHECK(stmts[0]->span.start.line == 3);

  stmts = deepest_statements(m, SourceSpan(3, 4));
  REQUIRE(stmts.size() == 2);
  CHECK(stmts[1]->span.start.line == 4);

  // The If header line absorbs its body.
  stmts = deepest_statements(m, SourceSpan(2, 3));
  REQUIRE(stmts.size() == 1);
  CHECK(stmts[0]->kind == "If");

  CHECK_THROWS_AS(deepest_statements(m, SourceSpan(9, 9)), EmptyResult);
  CHECK_THROWS_AS(SourceSpan(3, 2), std::invalid_argument);
}

TEST_CASE("holes render through the callback") {
  Node m = parse_source("x = str(y)\n");
  Node& func = *m.child("body")->child("value")->child("func");
  func.hole = HoleKind::Subtree;
  func.hole_base = "Variable";
  Node& arg = *m.child("body")->child("value")->child("args");
  arg.hole = HoleKind::Value;
  UnparseOptions opts;
  opts.render_hole = [](const HoleSlot&, std::size_t i) { return "<extra_id_" + std::to_string(i) + ">"; };
  auto r = unparse_with(m, opts);
  CHECK(r.text == "x = <extra_id_0>(<extra_id_1>)\n");
  REQUIRE(r.holes.size() == 2);
  CHECK(r.holes[0].hole == HoleKind::Subtree);
  CHECK(r.holes[0].base_type == "Variable");
  CHECK(r.holes[1].kind == "Name");
  CHECK(unparse(m) == "x = <HOLE>(<HOLE>)\n");
}

TEST_CASE("focus lines are reported") {
  Node m = parse_source("a = 1\nif a:\n    b = 2\n    c = 3\n");
  UnparseOptions opts;
  opts.focus = m.child("body", 1);
  auto r = unparse_with(m, opts);
  REQUIRE(r.focus_lines.has_value());
  CHECK(*r.focus_lines == SourceSpan(2, 4));
  opts.focus = m.child("body", 1)->child("body", 1)->child("value");
  r = unparse_with(m, opts);
  REQUIRE(r.focus_lines.has_value());
  CHECK(*r.focus_lines == SourceSpan(4, 4));
}

TEST_CASE("missing required children are rejected") {
  Node m = parse_source("f(x)\n");
  Node& call = *m.child("body")->child("value");
  call.children.erase(call.children.begin());
  CHECK_THROWS_AS(unparse(m), UnparseError);
}

TEST_CASE("structural hash agrees with equality") {
  Node a = parse_source("x = f(1)\n");
  Node b = parse_source("x   =   f( 1 )  # c\n");
  Node c = parse_source("x = f(2)\n");
  CHECK(structurally_equal(a, b));
  CHECK(structural_hash(a) == structural_hash(b));
  CHECK_FALSE(structurally_equal(a, c));
  CHECK(structural_hash(a) != structural_hash(c));
}
