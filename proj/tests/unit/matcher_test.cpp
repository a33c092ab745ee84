#include <algorithm>
#include <random>

#include "doctest.h"
#include "json.hpp"
#include "tyfix/fix_parser.hpp"
#include "tyfix/matcher.hpp"
#include "tyfix/metrics.hpp"
#include "tyfix/miner.hpp"

using namespace tyfix;

namespace {

const char* kAuthSnippet =
    "if user:\n"
    "    user_pass = '%s:%s' % (unquote(user), unquote(password))\n"
    "    creds = base64.b64encode(user_pass).strip()\n"
    "else:\n"
    "    creds = None\n";

BuggyProgramView view_of(const std::string& src, std::vector<int> lines) {
  return make_view(syntax::parse_source(src), lines);
}

std::vector<FixInstance> corpus(const std::string& name) {
  return load_corpus(std::string(TYFIX_TEST_DATA) + "/" + name).instances;
}

Forest mined(const std::vector<FixInstance>& fixes) {
  std::vector<FixTemplate> ts;
  for (const auto& f : fixes) ts.push_back(parse_fix(f));
  return mine_all(ts, 1);
}

FixTemplate named(const std::string& id, std::size_t count, TemplateTree after = {}) {
  FixTemplate t;
  t.id = id;
  t.category = Category::Add;
  t.pattern.after = after.empty() ? TemplateTree::leaf({BaseType::Stmt, std::string("Pass"), std::string()}) : after;
  t.instance_count = count;
  return t;
}

ClusteringTree chain(std::vector<FixTemplate> ts, std::vector<int> parent) {
  ClusteringTree t;
  t.templates = std::move(ts);
  t.parent = std::move(parent);
  t.root = 0;
  return t;
}

std::vector<std::string> ids(const std::vector<FixTemplate>& ts) {
  std::vector<std::string> out;
  for (const auto& t : ts) out.push_back(t.id);
  return out;
}

}  // namespace

TEST_CASE("view triple of a buggy program") {
  std::string src = "a = 1\nb = g(a)\nc = f(a, b)\nd = c\nreturn d\n";
  ViewSite site;
  auto v = make_view(syntax::parse_source(src), {3}, 3, &site);
  CHECK(v.bug.node(0).label.t == "Assign");
  CHECK(v.before.node(0).children.size() == 2);
  CHECK(v.after.node(0).children.size() == 2);
  CHECK(site.node_paths.size() == v.bug.size());
  auto g = view_of(src, {2, 3});
  CHECK(g.bug.node(0).label.t == std::string(kGroupKind));
  CHECK(g.before.node(0).children.size() == 1);
  CHECK_THROWS(view_of(src, {40}));
}

TEST_CASE("the empty template matches every view") {
  FixTemplate empty;
  for (int line = 1; line <= 5; ++line) CHECK(template_match(view_of(kAuthSnippet, {line}), empty));
}

TEST_CASE("wrapping template mined from a small corpus matches the auth snippet") {
  Forest f = mined(corpus("wraps"));
  REQUIRE(f.size() == 1);
  const FixTemplate& root = f[0].root_template();
  CHECK(root.category == Category::Insert);
  CHECK(root.instance_count == 5);
  CHECK(root.pattern.after.node(0).label.t == "Call");
  CHECK_FALSE(root.pattern.after.node(1).label.v.has_value());
  CHECK(template_match(view_of(kAuthSnippet, {2}), root));
  // `creds = None` has no expression to wrap.
  CHECK_FALSE(template_match(view_of(kAuthSnippet, {5}), root));
  CHECK(bfs_select(f, view_of(kAuthSnippet, {2})).size() == 1);
}

TEST_CASE("bfs_select returns the deepest matched frontier") {
  FixTemplate general = named("root", 3);
  FixTemplate narrow = named("narrow", 1);
  narrow.pattern.before = TemplateTree::leaf({BaseType::Stmt, std::string("Return"), std::nullopt});
  narrow.pattern.after = {};
  narrow.category = Category::Remove;
  FixTemplate wide = named("wide", 2);
  wide.pattern.before = TemplateTree::leaf({BaseType::Stmt, std::nullopt, std::nullopt});
  auto v = view_of("x = 1\nreturn x\n", {1});
  CHECK(ids(bfs_select({chain({general}, {-1})}, v)) == std::vector<std::string>{"root"});
  CHECK(ids(bfs_select({chain({general, narrow}, {-1, 0})}, v)) == std::vector<std::string>{"root"});
  CHECK(ids(bfs_select({chain({general, wide, narrow}, {-1, 0, 1})}, v)) == std::vector<std::string>{"wide"});
  auto both = bfs_select({chain({general, wide, named("w2", 1)}, {-1, 0, 0})}, v);
  CHECK(both.size() == 2);
  CHECK(bfs_select({chain({narrow, general}, {-1, 0})}, v).empty());
  CHECK(matched_templates({chain({general, wide, narrow}, {-1, 0, 1})}, v).size() == 2);
}

TEST_CASE("ranking orders groups and members") {
  CHECK_THROWS_AS(rank({}), EmptyMatch);
  auto many = named("many", 40), few = named("few", 7);
  auto r = rank({few, many});
  REQUIRE(r.groups.size() == 1);
  CHECK(ids(r.flatten()) == std::vector<std::string>{"many", "few"});

  auto concrete = TemplateTree::make({BaseType::Stmt, std::string("Return"), std::string()},
                                     {{"value", TemplateTree::leaf({BaseType::Variable, std::string("Name"), std::string("x")})}});
  auto vague = TemplateTree::make({BaseType::Stmt, std::string("Return"), std::string()},
                                  {{"value", TemplateTree::leaf({BaseType::Expr, std::nullopt, std::nullopt})}});
  auto a = named("concrete", 1, concrete);
  auto b = named("vague", 9, vague);
  b.pattern.before = TemplateTree::leaf({BaseType::Stmt, std::string("Pass"), std::string()});
  b.category = Category::Replace;
  REQUIRE(abstraction_ratio(concrete) < abstraction_ratio(vague));
  CHECK(ids(rank({b, a}).flatten()) == std::vector<std::string>{"concrete", "vague"});

  // Any permutation gives the same order.
  std::vector<FixTemplate> pool = {many, few, a, b, named("x", 7), named("y", 7)};
  std::string first;
  for (auto t : rank(pool).flatten()) first += t.id + ",";
  std::mt19937 rng(11);
  for (int i = 0; i < 20; ++i) {
    std::shuffle(pool.begin(), pool.end(), rng);
    std::string again;
    for (auto t : rank(pool).flatten()) again += t.id + ",";
    CHECK(again == first);
  }
}

TEST_CASE("coverage and its brute-force oracle") {
  auto fixes = corpus("desk");
  CHECK(template_coverage({}, fixes).ratio == 0.0);
  Forest f = mined(fixes);
  auto self = template_coverage(f, fixes);
  CHECK(self.total == fixes.size());
  CHECK(self.ratio == 1.0);
  auto loo = leave_one_out_coverage(fixes, 1);
  auto oracle = leave_one_out_coverage(fixes, 1, true);
  CHECK(loo.covered == oracle.covered);
  for (std::size_t i = 0; i < loo.per_fix.size(); ++i) {
    CHECK(loo.per_fix[i].matched_template_ids == oracle.per_fix[i].matched_template_ids);
  }
  CHECK(loo.ratio > 0.0);
  CHECK(loo.ratio <= 1.0);
  auto j = nlohmann::json::parse(loo.to_json());
  CHECK(j["per_fix"].size() == fixes.size());
}
