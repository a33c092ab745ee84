#pragma once

// Distances between template components and the abstraction ratio.
//
// Fix patterns are compared top-down: nodes pair from the roots, children
// pair positionally within each relation. Contexts are compared bottom-up:
// leaves are paired one-to-one and each pair climbs towards the roots while
// the nodes stay equal. A node counts once, with a single partner, however
// many leaf chains reach it, which keeps distances in [0, 1].

#include <cstdint>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "tyfix/template.hpp"

namespace tyfix {

struct DistanceReport {
  double d = 1.0;   // value distance
  double sd = 1.0;  // structural (type) distance
  // Leaf pairs (t1 id, t2 id) chosen by the type-level context matching.
  std::vector<std::pair<int, int>> pairs;
};

/// Top-down match counts: 2 per paired node, recursing into paired children.
std::size_t pattern_value_matches(const TemplateTree& t1, const TemplateTree& t2);
std::size_t pattern_type_matches(const TemplateTree& t1, const TemplateTree& t2);

DistanceReport pattern_distance(const TemplateTree& t1, const TemplateTree& t2);
/// Both trees of the patterns together: one normalizer over all four trees.
DistanceReport pattern_distance(const FixPattern& p1, const FixPattern& p2);

/// A one-to-one leaf matching and its score (2 per covered node pair).
struct LeafMatching {
  std::size_t score = 0;
  std::vector<std::pair<int, int>> pairs;
  bool unique = true;  // every greedy step had a single best pair
};

/// Greedy matching used by context_distance; `by_type` compares types only.
LeafMatching greedy_leaf_matching(const TemplateTree& t1, const TemplateTree& t2, bool by_type);
/// Exhaustive optimum over all partial one-to-one leaf matchings (small trees).
LeafMatching optimal_leaf_matching(const TemplateTree& t1, const TemplateTree& t2, bool by_type);
/// Score of an arbitrary set of leaf pairs.
std::size_t matching_score(const TemplateTree& t1, const TemplateTree& t2,
                           const std::vector<std::pair<int, int>>& pairs, bool by_type);
/// Node pairs covered consistently by the leaf pairs: (t1 id, t2 id).
std::vector<std::pair<int, int>> covered_pairs(const TemplateTree& t1, const TemplateTree& t2,
                                               const std::vector<std::pair<int, int>>& pairs, bool by_type);

DistanceReport context_distance(const TemplateTree& t1, const TemplateTree& t2);
DistanceReport context_distance(const ExternalContext& c1, const ExternalContext& c2);

/// Share of nodes whose type or value is a hole; 1.0 for the empty tree.
double abstraction_ratio(const TemplateTree& t);

/// Memoized distances keyed by tree hashes; safe for concurrent use.
class DistanceCache {
 public:
  DistanceReport pattern(const FixPattern& p1, const FixPattern& p2);
  DistanceReport context(const TemplateTree& t1, const TemplateTree& t2);
  DistanceReport context(const ExternalContext& c1, const ExternalContext& c2);
  std::size_t size() const;

 private:
  using Key = std::pair<std::uint64_t, std::uint64_t>;
  mutable std::mutex mu_;
  std::map<std::pair<int, Key>, DistanceReport> memo_;
  template <typename F>
  DistanceReport lookup(int kind, Key key, F compute);
};

}  // namespace tyfix
