#pragma once

// Random and exhaustive template trees over a small alphabet, for property tests.

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "tyfix/template.hpp"

namespace tyfix::testing {

inline const std::vector<std::string>& kinds() {
  static const std::vector<std::string> k = {"A", "B", "C"};
  return k;
}

inline Label label_of(const std::string& kind, const std::string& value) {
  return {BaseType::Expr, kind, value};
}

// Builds a tree from a parent array (parent[i] < i) and per-node labels/relations.
inline TemplateTree build(const std::vector<int>& parent, const std::vector<Label>& labels,
                          const std::vector<std::string>& rels) {
  std::function<TemplateTree(int)> rec = [&](int id) {
    std::vector<std::pair<std::string, TemplateTree>> kids;
    for (std::size_t c = 0; c < parent.size(); ++c) {
      if (parent[c] == id) kids.emplace_back(rels[c], rec(static_cast<int>(c)));
    }
    return TemplateTree::make(labels[static_cast<std::size_t>(id)], std::move(kids));
  };
  return rec(0);
}

class RandomTrees {
 public:
  explicit RandomTrees(unsigned seed) : rng_(seed) {}

  TemplateTree tree(int max_nodes, int values = 2, int relations = 2) {
    int n = pick(1, max_nodes);
    std::vector<int> parent(static_cast<std::size_t>(n), -1);
    std::vector<Label> labels;
    std::vector<std::string> rels(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      if (i > 0) parent[static_cast<std::size_t>(i)] = pick(0, i - 1);
      labels.push_back(label_of(kinds()[static_cast<std::size_t>(pick(0, 2))], "v" + std::to_string(pick(0, values - 1))));
      rels[static_cast<std::size_t>(i)] = "r" + std::to_string(pick(0, relations - 1));
    }
    return build(parent, labels, rels);
  }

  // A copy with some labels perturbed.
  TemplateTree mutate(const TemplateTree& t, double p) {
    TemplateTree out = t;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (std::uniform_real_distribution<double>(0, 1)(rng_) >= p) continue;
      Label l = t.node(static_cast<int>(i)).label;
      if (pick(0, 1)) {
        l.v = "v" + std::to_string(pick(0, 3));
      } else {
        l.t = kinds()[static_cast<std::size_t>(pick(0, 2))];
      }
      out = out.with_label(static_cast<int>(i), l);
    }
    return out;
  }

  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  std::mt19937& rng() { return rng_; }

 private:
  std::mt19937 rng_;
};

// Every tree with at most `max_nodes` nodes over the three kinds, one value
// and one relation (ordered shapes x labellings).
inline std::vector<TemplateTree> all_trees(int max_nodes) {
  std::vector<TemplateTree> out;
  // Shapes as parent arrays in preorder: parent[i] is on the rightmost path of nodes < i.
  std::function<void(std::vector<int>&)> shapes = [&](std::vector<int>& parent) {
    int n = static_cast<int>(parent.size());
    // Enumerate labellings of this shape.
    std::vector<int> lab(static_cast<std::size_t>(n), 0);
    for (;;) {
      std::vector<Label> labels;
      for (int k : lab) labels.push_back(label_of(kinds()[static_cast<std::size_t>(k)], "v"));
      out.push_back(build(parent, labels, std::vector<std::string>(static_cast<std::size_t>(n), "r")));
      std::size_t i = 0;
      while (i < lab.size() && ++lab[i] == 3) lab[i++] = 0;
      if (i == lab.size()) break;
    }
    if (n == max_nodes) return;
    // Rightmost path from the last node up to the root.
    for (int p = n - 1; p >= 0; p = parent[static_cast<std::size_t>(p)]) {
      parent.push_back(p);
      shapes(parent);
      parent.pop_back();
    }
  };
  std::vector<int> root = {-1};
  shapes(root);
  return out;
}

}  // namespace tyfix::testing
