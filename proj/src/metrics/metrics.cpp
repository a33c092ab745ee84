#include "tyfix/metrics.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace tyfix {

namespace {

bool labels_equal(const Label& a, const Label& b, bool by_type) { return by_type ? a.t == b.t : a == b; }

// Children of `id` grouped by relation, in order of first appearance.
std::vector<std::pair<std::string, std::vector<int>>> grouped_children(const TemplateTree& t, int id) {
  std::vector<std::pair<std::string, std::vector<int>>> out;
  for (int c : t.node(id).children) {
    const std::string& rel = t.node(c).rel;
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& g) { return g.first == rel; });
    if (it == out.end()) {
      out.push_back({rel, {c}});
    } else {
      it->second.push_back(c);
    }
  }
  return out;
}

std::size_t top_down(const TemplateTree& t1, int a, const TemplateTree& t2, int b, bool by_type) {
  if (!labels_equal(t1.node(a).label, t2.node(b).label, by_type)) return 0;
  std::size_t total = 2;
  auto g2 = grouped_children(t2, b);
  for (const auto& [rel, kids1] : grouped_children(t1, a)) {
    auto it = std::find_if(g2.begin(), g2.end(), [&](const auto& g) { return g.first == rel; });
    if (it == g2.end()) continue;
    std::size_t k = std::min(kids1.size(), it->second.size());
    for (std::size_t i = 0; i < k; ++i) total += top_down(t1, kids1[i], t2, it->second[i], by_type);
  }
  return total;
}

std::size_t top_down(const TemplateTree& t1, const TemplateTree& t2, bool by_type) {
  if (t1.empty() || t2.empty()) return 0;
  return top_down(t1, 0, t2, 0, by_type);
}

double ratio_distance(std::size_t matched, std::size_t total, double if_empty) {
  if (total == 0) return if_empty;
  return 1.0 - static_cast<double>(matched) / static_cast<double>(total);
}

// Position of a node among its parent's children of the same relation.
std::vector<int> relation_index(const TemplateTree& t) {
  std::vector<int> idx(t.size(), 0);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const TNode& n = t.node(static_cast<int>(i));
    std::map<std::string, int> seen;
    for (int c : n.children) idx[static_cast<std::size_t>(c)] = seen[t.node(c).rel]++;
  }
  return idx;
}

// Leaf chains climb while nodes are equal, sit at the same depth, and the
// edges agree: same relation, and same position within it except directly
// under Context roots, whose statements may shift.
class Chains {
 public:
  Chains(const TemplateTree& t1, const TemplateTree& t2, bool by_type)
      : t1_(t1),
        t2_(t2),
        by_type_(by_type),
        idx1_(relation_index(t1)),
        idx2_(relation_index(t2)),
        depth1_(depths(t1)),
        depth2_(depths(t2)) {}

  std::vector<std::pair<int, int>> chain(int a, int b) const {
    std::vector<std::pair<int, int>> out;
    for (;;) {
      const TNode& na = t1_.node(a);
      const TNode& nb = t2_.node(b);
      if (!labels_equal(na.label, nb.label, by_type_)) break;
      out.emplace_back(a, b);
      if (na.parent < 0 || nb.parent < 0 || na.rel != nb.rel) break;
      if (depth1_[static_cast<std::size_t>(a)] != depth2_[static_cast<std::size_t>(b)]) break;
      bool under_context = t1_.node(na.parent).label.t == std::string(kContextKind) &&
                           t2_.node(nb.parent).label.t == std::string(kContextKind);
      if (!under_context && idx1_[static_cast<std::size_t>(a)] != idx2_[static_cast<std::size_t>(b)]) break;
      a = na.parent;
      b = nb.parent;
    }
    return out;
  }

 private:
  static std::vector<int> depths(const TemplateTree& t) {
    std::vector<int> d(t.size(), 0);
    for (std::size_t i = 0; i < t.size(); ++i) {
      int p = t.node(static_cast<int>(i)).parent;
      if (p >= 0) d[i] = d[static_cast<std::size_t>(p)] + 1;
    }
    return d;
  }

  const TemplateTree& t1_;
  const TemplateTree& t2_;
  bool by_type_;
  std::vector<int> idx1_, idx2_, depth1_, depth2_;
};

// Union of chain pairs; a pair counts when both of its nodes have exactly one partner.
class Coverage {
 public:
  Coverage(std::size_t n1, std::size_t n2) : p1_(n1), p2_(n2) {}

  std::size_t consistent() const { return consistent_; }

  // Adds the pairs; returns those that were new (for undo).
  std::vector<std::pair<int, int>> add(const std::vector<std::pair<int, int>>& chain) {
    std::vector<std::pair<int, int>> added;
    for (const auto& [a, b] : chain) {
      if (p1_[static_cast<std::size_t>(a)].count(b)) continue;
      adjust(a, b, -1);
      p1_[static_cast<std::size_t>(a)].insert(b);
      p2_[static_cast<std::size_t>(b)].insert(a);
      adjust(a, b, +1);
      added.emplace_back(a, b);
    }
    return added;
  }

  void remove(const std::vector<std::pair<int, int>>& added) {
    for (auto it = added.rbegin(); it != added.rend(); ++it) {
      auto [a, b] = *it;
      adjust(a, b, -1);
      p1_[static_cast<std::size_t>(a)].erase(b);
      p2_[static_cast<std::size_t>(b)].erase(a);
      adjust(a, b, +1);
    }
  }

  std::vector<std::pair<int, int>> consistent_pairs() const {
    std::vector<std::pair<int, int>> out;
    for (std::size_t a = 0; a < p1_.size(); ++a) {
      if (p1_[a].size() == 1) {
        int b = *p1_[a].begin();
        if (p2_[static_cast<std::size_t>(b)].size() == 1) out.emplace_back(static_cast<int>(a), b);
      }
    }
    return out;
  }

 private:
  bool is_consistent(int a, int b) const {
    const auto& s1 = p1_[static_cast<std::size_t>(a)];
    const auto& s2 = p2_[static_cast<std::size_t>(b)];
    return s1.size() == 1 && s2.size() == 1 && *s1.begin() == b;
  }
  // Re-counts every pair touching node a (in t1) or node b (in t2).
  void adjust(int a, int b, int sign) {
    std::set<std::pair<int, int>> touched;
    for (int y : p1_[static_cast<std::size_t>(a)]) touched.emplace(a, y);
    for (int x : p2_[static_cast<std::size_t>(b)]) touched.emplace(x, b);
    for (const auto& [x, y] : touched) {
      if (is_consistent(x, y)) consistent_ = static_cast<std::size_t>(static_cast<long>(consistent_) + sign);
    }
  }

  std::vector<std::set<int>> p1_, p2_;
  std::size_t consistent_ = 0;
};

// Root path of every node as (relation, index) steps.
std::vector<std::vector<std::pair<std::string, int>>> positions(const TemplateTree& t) {
  auto idx = relation_index(t);
  std::vector<std::vector<std::pair<std::string, int>>> out(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const TNode& n = t.node(static_cast<int>(i));
    if (n.parent < 0) continue;
    out[i] = out[static_cast<std::size_t>(n.parent)];
    out[i].emplace_back(n.rel, idx[i]);
  }
  return out;
}

constexpr int kRefinePasses = 4;
constexpr std::size_t kEjectionLimit = 1024;

LeafMatching greedy_oriented(const TemplateTree& t1, const TemplateTree& t2, bool by_type) {
  LeafMatching out;
  if (t1.empty() || t2.empty()) return out;
  Chains chains(t1, t2, by_type);
  auto l1 = t1.leaves();
  auto l2 = t2.leaves();
  std::vector<std::vector<std::vector<std::pair<int, int>>>> cand(l1.size(),
                                                                  std::vector<std::vector<std::pair<int, int>>>(l2.size()));
  for (std::size_t i = 0; i < l1.size(); ++i) {
    for (std::size_t j = 0; j < l2.size(); ++j) cand[i][j] = chains.chain(l1[i], l2[j]);
  }
  // Equal gains prefer leaves at the same position from the root.
  auto p1 = positions(t1), p2 = positions(t2);
  Coverage cov(t1.size(), t2.size());
  std::vector<char> used1(l1.size(), 0), used2(l2.size(), 0);
  std::vector<std::pair<std::size_t, std::size_t>> chosen;
  for (;;) {
    long best = 0;
    bool best_aligned = false;
    std::size_t bi = 0, bj = 0;
    int ties = 0;
    for (std::size_t i = 0; i < l1.size(); ++i) {
      if (used1[i]) continue;
      for (std::size_t j = 0; j < l2.size(); ++j) {
        if (used2[j] || cand[i][j].empty()) continue;
        std::size_t before = cov.consistent();
        auto added = cov.add(cand[i][j]);
        long gain = static_cast<long>(cov.consistent()) - static_cast<long>(before);
        cov.remove(added);
        bool aligned = p1[static_cast<std::size_t>(l1[i])] == p2[static_cast<std::size_t>(l2[j])];
        if (gain > best || (gain == best && gain > 0 && aligned && !best_aligned)) {
          best = gain;
          best_aligned = aligned;
          bi = i;
          bj = j;
          ties = 1;
        } else if (gain == best && gain > 0 && aligned == best_aligned) {
          ++ties;
        }
      }
    }
    if (best <= 0) break;
    if (ties > 1) out.unique = false;
    cov.add(cand[bi][bj]);
    used1[bi] = used2[bj] = 1;
    chosen.emplace_back(bi, bj);
  }

  // Local improvement: swap partners of two pairs, move a pair to an unused
  // leaf, or drop it, while that strictly raises the score.
  auto score_of = [&](const std::vector<std::pair<std::size_t, std::size_t>>& ps) {
    Coverage c(t1.size(), t2.size());
    for (const auto& [i, j] : ps) c.add(cand[i][j]);
    return c.consistent();
  };
  std::size_t score = cov.consistent();
  for (int pass = 0; pass < kRefinePasses; ++pass) {
    bool improved = false;
    auto try_move = [&](std::vector<std::pair<std::size_t, std::size_t>> next) {
      std::size_t s = score_of(next);
      if (s <= score) return false;
      score = s;
      chosen = std::move(next);
      improved = true;
      return true;
    };
    for (std::size_t x = 0; x < chosen.size(); ++x) {
      for (std::size_t y = x + 1; y < chosen.size(); ++y) {
        auto next = chosen;
        std::swap(next[x].second, next[y].second);
        if (cand[next[x].first][next[x].second].empty() || cand[next[y].first][next[y].second].empty()) continue;
        try_move(std::move(next));
      }
      std::vector<char> taken(l2.size(), 0);
      for (const auto& pr : chosen) taken[pr.second] = 1;
      for (std::size_t j = 0; j < l2.size(); ++j) {
        if (taken[j] || cand[chosen[x].first][j].empty()) continue;
        auto next = chosen;
        next[x].second = j;
        if (try_move(std::move(next))) break;
      }
      auto next = chosen;
      next.erase(next.begin() + static_cast<long>(x));
      try_move(std::move(next));
    }
    std::vector<char> in1(l1.size(), 0), in2(l2.size(), 0);
    for (const auto& [i, j] : chosen) in1[i] = in2[j] = 1;
    for (std::size_t i = 0; i < l1.size(); ++i) {
      for (std::size_t j = 0; j < l2.size() && !in1[i]; ++j) {
        if (in2[j] || cand[i][j].empty()) continue;
        auto next = chosen;
        next.emplace_back(i, j);
        if (try_move(std::move(next))) in1[i] = in2[j] = 1;
      }
    }
    // Ejection: x takes y's partner and y moves to a free leaf.
    if (l1.size() * l2.size() <= kEjectionLimit) {
      for (std::size_t x = 0; x < chosen.size(); ++x) {
        for (std::size_t y = 0; y < chosen.size(); ++y) {
          if (x == y || cand[chosen[x].first][chosen[y].second].empty()) continue;
          std::vector<char> taken(l2.size(), 0);
          for (const auto& pr : chosen) taken[pr.second] = 1;
          for (std::size_t k = 0; k < l2.size(); ++k) {
            if (k != chosen[x].second && (taken[k] || cand[chosen[y].first][k].empty())) continue;
            if (k == chosen[x].second && cand[chosen[y].first][k].empty()) continue;
            auto next = chosen;
            next[x].second = chosen[y].second;
            next[y].second = k;
            if (try_move(std::move(next))) break;
          }
        }
      }
    }
    if (!improved) break;
    out.unique = false;
  }
  for (const auto& [i, j] : chosen) out.pairs.emplace_back(l1[i], l2[j]);
  out.score = 2 * score;
  return out;
}

}  // namespace

std::size_t pattern_value_matches(const TemplateTree& t1, const TemplateTree& t2) { return top_down(t1, t2, false); }
std::size_t pattern_type_matches(const TemplateTree& t1, const TemplateTree& t2) { return top_down(t1, t2, true); }

DistanceReport pattern_distance(const TemplateTree& t1, const TemplateTree& t2) {
  std::size_t n = t1.size() + t2.size();
  return {ratio_distance(top_down(t1, t2, false), n, 1.0), ratio_distance(top_down(t1, t2, true), n, 1.0), {}};
}

DistanceReport pattern_distance(const FixPattern& p1, const FixPattern& p2) {
  std::size_t n = p1.before.size() + p2.before.size() + p1.after.size() + p2.after.size();
  std::size_t vm = top_down(p1.before, p2.before, false) + top_down(p1.after, p2.after, false);
  std::size_t tm = top_down(p1.before, p2.before, true) + top_down(p1.after, p2.after, true);
  return {ratio_distance(vm, n, 1.0), ratio_distance(tm, n, 1.0), {}};
}

std::vector<std::pair<int, int>> covered_pairs(const TemplateTree& t1, const TemplateTree& t2,
                                               const std::vector<std::pair<int, int>>& pairs, bool by_type) {
  Chains chains(t1, t2, by_type);
  Coverage cov(t1.size(), t2.size());
  for (const auto& [a, b] : pairs) cov.add(chains.chain(a, b));
  return cov.consistent_pairs();
}

std::size_t matching_score(const TemplateTree& t1, const TemplateTree& t2,
                           const std::vector<std::pair<int, int>>& pairs, bool by_type) {
  return 2 * covered_pairs(t1, t2, pairs, by_type).size();
}

LeafMatching greedy_leaf_matching(const TemplateTree& t1, const TemplateTree& t2, bool by_type) {
  // Run in both orientations, from a canonical first tree, so the score and
  // the chosen pairs do not depend on argument order.
  bool flip = t2.hash() < t1.hash();
  const TemplateTree& x = flip ? t2 : t1;
  const TemplateTree& y = flip ? t1 : t2;
  LeafMatching fwd = greedy_oriented(x, y, by_type);
  LeafMatching rev = greedy_oriented(y, x, by_type);
  for (auto& p : rev.pairs) std::swap(p.first, p.second);
  LeafMatching out = rev.score > fwd.score ? rev : fwd;
  out.unique = fwd.unique && rev.unique;
  if (flip) {
    for (auto& p : out.pairs) std::swap(p.first, p.second);
  }
  std::sort(out.pairs.begin(), out.pairs.end());
  return out;
}

LeafMatching optimal_leaf_matching(const TemplateTree& t1, const TemplateTree& t2, bool by_type) {
  LeafMatching best;
  if (t1.empty() || t2.empty()) return best;
  Chains chains(t1, t2, by_type);
  auto l1 = t1.leaves();
  auto l2 = t2.leaves();
  std::vector<char> used(l2.size(), 0);
  std::vector<std::pair<int, int>> cur;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == l1.size()) {
      std::size_t s = matching_score(t1, t2, cur, by_type);
      if (s > best.score) {
        best.score = s;
        best.pairs = cur;
      }
      return;
    }
    rec(i + 1);
    for (std::size_t j = 0; j < l2.size(); ++j) {
      if (used[j] || chains.chain(l1[i], l2[j]).empty()) continue;
      used[j] = 1;
      cur.emplace_back(l1[i], l2[j]);
      rec(i + 1);
      cur.pop_back();
      used[j] = 0;
    }
  };
  rec(0);
  return best;
}

namespace {

constexpr std::size_t kExactLeaves = 6;

// Exact search on small trees, greedy above that. Both run from the
// hash-canonical orientation so the pairs do not depend on argument order.
LeafMatching leaf_matching(const TemplateTree& t1, const TemplateTree& t2, bool by_type) {
  if (t1.leaves().size() > kExactLeaves || t2.leaves().size() > kExactLeaves) {
    return greedy_leaf_matching(t1, t2, by_type);
  }
  bool flip = t2.hash() < t1.hash();
  LeafMatching out = flip ? optimal_leaf_matching(t2, t1, by_type) : optimal_leaf_matching(t1, t2, by_type);
  if (flip) {
    for (auto& p : out.pairs) std::swap(p.first, p.second);
  }
  std::sort(out.pairs.begin(), out.pairs.end());
  return out;
}

// Leaf chains can cover every node of two different trees when equal leaves
// swap places; such a cover keeps one pair back so that only identical trees
// (isomorphic ones, by type) sit at distance 0.
std::size_t context_score(const TemplateTree& t1, const TemplateTree& t2, std::size_t score, bool by_type) {
  std::size_t n = t1.size() + t2.size();
  if (score == n && n > 0 && top_down(t1, t2, by_type) != n) return n - 2;
  return score;
}

}  // namespace

DistanceReport context_distance(const TemplateTree& t1, const TemplateTree& t2) {
  std::size_t n = t1.size() + t2.size();
  LeafMatching vm = leaf_matching(t1, t2, false);
  LeafMatching tm = leaf_matching(t1, t2, true);
  return {ratio_distance(context_score(t1, t2, vm.score, false), n, 0.0),
          ratio_distance(context_score(t1, t2, tm.score, true), n, 0.0), tm.pairs};
}

DistanceReport context_distance(const ExternalContext& c1, const ExternalContext& c2) {
  std::size_t n = c1.before.size() + c2.before.size() + c1.after.size() + c2.after.size();
  auto score = [](const TemplateTree& a, const TemplateTree& b, bool by_type) {
    return context_score(a, b, leaf_matching(a, b, by_type).score, by_type);
  };
  std::size_t vm = score(c1.before, c2.before, false) + score(c1.after, c2.after, false);
  std::size_t tm = score(c1.before, c2.before, true) + score(c1.after, c2.after, true);
  return {ratio_distance(vm, n, 0.0), ratio_distance(tm, n, 0.0), {}};
}

double abstraction_ratio(const TemplateTree& t) {
  if (t.empty()) return 1.0;
  return static_cast<double>(t.hole_count()) / static_cast<double>(t.size());
}

template <typename F>
DistanceReport DistanceCache::lookup(int kind, Key key, F compute) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = memo_.find({kind, key});
    if (it != memo_.end()) return it->second;
  }
  DistanceReport r = compute();
  std::lock_guard<std::mutex> lock(mu_);
  memo_.emplace(std::make_pair(kind, key), r);
  return r;
}

namespace {

std::uint64_t mix(std::uint64_t a, std::uint64_t b) { return a * 0x9e3779b97f4a7c15ULL ^ (b + 0x7f4a7c15ULL + (a << 6)); }

}  // namespace

DistanceReport DistanceCache::pattern(const FixPattern& p1, const FixPattern& p2) {
  Key key{mix(p1.before.hash(), p1.after.hash()), mix(p2.before.hash(), p2.after.hash())};
  return lookup(0, key, [&] { return pattern_distance(p1, p2); });
}

DistanceReport DistanceCache::context(const TemplateTree& t1, const TemplateTree& t2) {
  return lookup(1, {t1.hash(), t2.hash()}, [&] { return context_distance(t1, t2); });
}

DistanceReport DistanceCache::context(const ExternalContext& c1, const ExternalContext& c2) {
  Key key{mix(c1.before.hash(), c1.after.hash()), mix(c2.before.hash(), c2.after.hash())};
  return lookup(2, key, [&] { return context_distance(c1, c2); });
}

std::size_t DistanceCache::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return memo_.size();
}

}  // namespace tyfix
