#include <algorithm>
#include <map>

#include "doctest.h"
#include "random_trees.hpp"
#include "tyfix/metrics.hpp"

using namespace tyfix;
using tyfix::testing::RandomTrees;

namespace {

// Reference top-down count written straight from the definition.
std::size_t ref_matches(const TemplateTree& t1, int a, const TemplateTree& t2, int b, bool by_type) {
  const Label& x = t1.node(a).label;
  const Label& y = t2.node(b).label;
  if (by_type ? x.t != y.t : !(x == y)) return 0;
  std::size_t total = 2;
  std::map<std::string, std::vector<int>> k1, k2;
  for (int c : t1.node(a).children) k1[t1.node(c).rel].push_back(c);
  for (int c : t2.node(b).children) k2[t2.node(c).rel].push_back(c);
  for (auto& [rel, v1] : k1) {
    auto& v2 = k2[rel];
    for (std::size_t i = 0; i < v1.size() && i < v2.size(); ++i) total += ref_matches(t1, v1[i], t2, v2[i], by_type);
  }
  return total;
}

double ref_d(const TemplateTree& t1, const TemplateTree& t2, bool by_type) {
  std::size_t n = t1.size() + t2.size();
  if (n == 0) return 1.0;
  std::size_t m = t1.empty() || t2.empty() ? 0 : ref_matches(t1, 0, t2, 0, by_type);
  return 1.0 - static_cast<double>(m) / static_cast<double>(n);
}

}  // namespace

TEST_CASE("pattern distance basics") {
  RandomTrees gen(7);
  for (int i = 0; i < 50; ++i) {
    TemplateTree t = gen.tree(10);
    auto r = pattern_distance(t, t);
    CHECK(r.d == 0.0);
    CHECK(r.sd == 0.0);
  }
  auto x = TemplateTree::leaf({BaseType::Variable, std::string("Name"), std::string("x")});
  auto y = TemplateTree::leaf({BaseType::Variable, std::string("Name"), std::string("y")});
  auto r = pattern_distance(x, y);
  CHECK(r.d == 1.0);
  CHECK(r.sd == 0.0);
  CHECK(pattern_distance(TemplateTree{}, TemplateTree{}).d == 1.0);
  CHECK(pattern_distance(x, TemplateTree{}).sd == 1.0);
}

TEST_CASE("pattern distance equals the reference on all small trees") {
  auto trees = tyfix::testing::all_trees(4);
  CHECK(trees.size() == 3 + 9 + 2 * 27 + 5 * 81);
  for (std::size_t i = 0; i < trees.size(); i += 3) {
    for (std::size_t j = 0; j < trees.size(); ++j) {
      auto r = pattern_distance(trees[i], trees[j]);
      REQUIRE(r.d == ref_d(trees[i], trees[j], false));
      REQUIRE(r.sd == ref_d(trees[i], trees[j], true));
    }
  }
  RandomTrees gen(11);
  for (int i = 0; i < 2000; ++i) {
    TemplateTree a = gen.tree(12);
    TemplateTree b = gen.pick(0, 1) ? gen.mutate(a, 0.3) : gen.tree(12);
    auto r = pattern_distance(a, b);
    REQUIRE(r.d == ref_d(a, b, false));
    REQUIRE(r.sd == ref_d(a, b, true));
  }
}

TEST_CASE("context distance axioms") {
  RandomTrees gen(3);
  for (int i = 0; i < 300; ++i) {
    TemplateTree a = gen.tree(10);
    TemplateTree b = gen.pick(0, 1) ? gen.mutate(a, 0.3) : gen.tree(10);
    auto ab = context_distance(a, b);
    auto ba = context_distance(b, a);
    CHECK(ab.d == ba.d);
    CHECK(ab.sd == ba.sd);
    CHECK(ab.d >= 0.0);
    CHECK(ab.d <= 1.0);
    CHECK(ab.sd >= 0.0);
    CHECK(ab.sd <= 1.0);
    CHECK((ab.d == 0.0) == (a == b));
    CHECK(context_distance(a, a).d == 0.0);
  }
  CHECK(context_distance(TemplateTree{}, TemplateTree{}).d == 0.0);
  CHECK(context_distance(gen.tree(3), TemplateTree{}).d == 1.0);
}

TEST_CASE("context distance against the optimal matching") {
  RandomTrees gen(5);
  int checked = 0, unique = 0;
  double worst = 0;
  for (int i = 0; i < 400; ++i) {
    TemplateTree a = gen.tree(9);
    TemplateTree b = gen.pick(0, 1) ? gen.mutate(a, 0.4) : gen.tree(9);
    if (a.leaves().size() > 6 || b.leaves().size() > 6) continue;
    ++checked;
    for (bool by_type : {false, true}) {
      auto g = greedy_leaf_matching(a, b, by_type);
      auto o = optimal_leaf_matching(a, b, by_type);
      CHECK(g.score <= o.score);
      CHECK(matching_score(a, b, g.pairs, by_type) == g.score);
      double gap = static_cast<double>(o.score - g.score) / static_cast<double>(a.size() + b.size());
      worst = std::max(worst, gap);
      CHECK(gap <= 0.05);
      if (g.unique) {
        ++unique;
        CHECK(g.score == o.score);
      }
    }
  }
  CHECK(checked > 100);
  CHECK(unique > 0);
}

TEST_CASE("abstraction ratio") {
  CHECK(abstraction_ratio(TemplateTree{}) == 1.0);
  Label c{BaseType::Expr, std::string("Call"), std::string("")};
  Label v{BaseType::Variable, std::string("Name"), std::string("x")};
  Label h{BaseType::Variable, std::string("Name"), std::nullopt};
  auto t = TemplateTree::make(c, {{"args", TemplateTree::leaf(v)}, {"args", TemplateTree::leaf(h)}});
  CHECK(abstraction_ratio(t) == doctest::Approx(1.0 / 3));
  CHECK(abstraction_ratio(TemplateTree::make(c, {{"args", TemplateTree::leaf(v)}})) == 0.0);
}

TEST_CASE("distance cache") {
  RandomTrees gen(9);
  DistanceCache cache;
  TemplateTree a = gen.tree(8), b = gen.tree(8);
  auto r1 = cache.context(a, b);
  auto r2 = cache.context(a, b);
  CHECK(r1.d == r2.d);
  CHECK(cache.size() == 1);
  FixPattern p{a, b, {}};
  CHECK(cache.pattern(p, p).d == 0.0);
}

TEST_CASE("swapped leaves never reach context distance zero") {
  Label root{BaseType::Expr, std::string("A"), std::string("r")};
  auto leaf = [](const char* v) { return TemplateTree::leaf({BaseType::Expr, std::string("C"), std::string(v)}); };
  auto a = TemplateTree::make(root, {{"x", leaf("p")}, {"y", leaf("q")}});
  auto b = TemplateTree::make(root, {{"x", leaf("q")}, {"y", leaf("p")}});
  auto r = context_distance(a, b);
  CHECK(r.d > 0.0);
  CHECK(r.sd == 0.0);
  CHECK(context_distance(a, a).d == 0.0);
}

TEST_CASE("leaf chains only climb between equal depths") {
  Label top{BaseType::Expr, std::string("A"), std::string("v")};
  Label mid{BaseType::Expr, std::string("B"), std::string("w")};
  auto leaf = TemplateTree::leaf({BaseType::Expr, std::string("C"), std::string("z")});
  // The leaf sits at depth 1 in a and depth 2 in b; its parent label matches a's root.
  auto a = TemplateTree::make(top, {{"k", leaf}});
  auto b = TemplateTree::make(mid, {{"k", TemplateTree::make(top, {{"k", leaf}})}});
  auto pairs = covered_pairs(a, b, {{1, 2}}, false);
  CHECK(pairs == std::vector<std::pair<int, int>>{{1, 2}});
}
