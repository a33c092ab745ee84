#include "tyfix/miner.hpp"

#include <algorithm>
#include <functional>
#include <thread>
#include <tuple>

#include "json.hpp"
#include "tyfix/abstraction.hpp"
#include "tyfix/metrics.hpp"

namespace tyfix {

namespace {

bool same_pattern(const FixTemplate& a, const FixTemplate& b) { return a.pattern == b.pattern; }
bool same_pattern_and_ic(const FixTemplate& a, const FixTemplate& b) {
  return a.pattern == b.pattern && a.ic == b.ic;
}

struct MNode {
  FixTemplate tpl;
  std::vector<int> kids;
  std::uint64_t hash = 0;
  std::size_t own = 0;  // origin instances held directly (not via children)
};

// A scored candidate pair; lower sorts first.
struct Candidate {
  bool structural_mismatch = true;  // sd != 0
  double d = 1.0;
  std::uint64_t h1 = 0, h2 = 0;
  std::size_t i = 0, j = 0;
  bool operator<(const Candidate& o) const {
    return std::tie(structural_mismatch, d, h1, h2) < std::tie(o.structural_mismatch, o.d, o.h1, o.h2);
  }
};

class Miner {
 public:
  Miner(const std::vector<FixTemplate>& templates, const MinerOptions& options) : options_(options) {
    for (const auto& t : templates) add(t, {});
    stats_.input_templates = templates.size();
    stats_.bound = templates.size();
  }

  Forest run() {
    for (;;) {
      if (stats_.iterations > stats_.bound) throw std::logic_error("mining exceeded its termination bound");
      ++stats_.iterations;
      canonicalize();
      bool changed = dedup();
      if (stage(Stage::ExternalContext) || stage(Stage::InternalContext) || stage(Stage::Pattern)) changed = true;
      if (!changed) break;
    }
    return emit();
  }

  const MiningStats& stats() const { return stats_; }

 private:
  void add(FixTemplate t, std::vector<int> kids) {
    std::size_t own = std::max<std::size_t>(t.instance_count, 1);
    active_.push_back(make(std::move(t), std::move(kids), own));
  }

  void canonicalize() {
    std::sort(active_.begin(), active_.end(), [&](int a, int b) {
      const MNode& x = arena_[static_cast<std::size_t>(a)];
      const MNode& y = arena_[static_cast<std::size_t>(b)];
      if (x.hash != y.hash) return x.hash < y.hash;
      return x.tpl.instance_ids < y.tpl.instance_ids;
    });
  }

  FixTemplate& tpl(std::size_t k) { return arena_[static_cast<std::size_t>(active_[k])].tpl; }

  bool dedup() {
    bool changed = false;
    std::vector<int> kept;
    for (int id : active_) {
      MNode& n = arena_[static_cast<std::size_t>(id)];
      auto same = std::find_if(kept.begin(), kept.end(), [&](int k) {
        const MNode& m = arena_[static_cast<std::size_t>(k)];
        return m.hash == n.hash && m.tpl.same_content(n.tpl);
      });
      if (same == kept.end()) {
        kept.push_back(id);
        continue;
      }
      MNode& into = arena_[static_cast<std::size_t>(*same)];
      absorb(into, n);
      ++stats_.dedup_merges;
      changed = true;
    }
    active_ = kept;
    return changed;
  }

  // Folds `from` into `into`: instances and children are combined.
  void absorb(MNode& into, const MNode& from) {
    into.tpl.instance_ids.insert(from.tpl.instance_ids.begin(), from.tpl.instance_ids.end());
    into.kids.insert(into.kids.end(), from.kids.begin(), from.kids.end());
    into.own += from.own;
  }

  std::vector<Candidate> candidates(Stage s, const std::vector<std::size_t>& cluster) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t x = 0; x < cluster.size(); ++x) {
      for (std::size_t y = x + 1; y < cluster.size(); ++y) pairs.emplace_back(cluster[x], cluster[y]);
    }
    std::vector<Candidate> out(pairs.size());
    auto work = [&](std::size_t from, std::size_t to) {
      for (std::size_t k = from; k < to; ++k) {
        auto [i, j] = pairs[k];
        const FixTemplate& a = tpl(i);
        const FixTemplate& b = tpl(j);
        DistanceReport r;
        if (s == Stage::ExternalContext) {
          r = cache_.context(a.ec, b.ec);
        } else if (s == Stage::InternalContext) {
          r = cache_.context(a.ic.tree, b.ic.tree);
        } else {
          r = cache_.pattern(a.pattern, b.pattern);
        }
        std::uint64_t h1 = arena_[static_cast<std::size_t>(active_[i])].hash;
        std::uint64_t h2 = arena_[static_cast<std::size_t>(active_[j])].hash;
        out[k] = {r.sd != 0.0, r.d, std::min(h1, h2), std::max(h1, h2), i, j};
        // Never merge fix patterns that share nothing at all.
        if (s == Stage::Pattern && r.d == 1.0 && r.sd == 1.0) out[k].d = 2.0;
      }
    };
    unsigned jobs = std::max(1u, options_.jobs);
    if (jobs == 1 || pairs.size() < 64) {
      work(0, pairs.size());
    } else {
      std::vector<std::thread> threads;
      std::size_t chunk = (pairs.size() + jobs - 1) / jobs;
      for (unsigned t = 0; t < jobs; ++t) {
        std::size_t from = t * chunk, to = std::min(pairs.size(), from + chunk);
        if (from < to) threads.emplace_back(work, from, to);
      }
      for (auto& th : threads) th.join();
    }
    out.erase(std::remove_if(out.begin(), out.end(), [](const Candidate& c) { return c.d > 1.0; }), out.end());
    std::sort(out.begin(), out.end());
    return out;
  }

  // Full abstraction of two templates; throws when they cannot be merged.
  FixTemplate merged(const FixTemplate& a, const FixTemplate& b) {
    FixTemplate t;
    t.category = a.category;
    t.pattern = a.pattern == b.pattern ? a.pattern : abstract_pattern(a.pattern, b.pattern);
    t.ic = a.ic == b.ic ? a.ic : abstract_internal(a.ic, b.ic);
    t.ec = a.ec == b.ec ? a.ec : abstract_external(a.ec, b.ec);
    t.instance_ids = a.instance_ids;
    t.instance_ids.insert(b.instance_ids.begin(), b.instance_ids.end());
    return t;
  }

  bool stage(Stage s) {
    std::vector<FixTemplate> view;
    for (std::size_t k = 0; k < active_.size(); ++k) view.push_back(tpl(k));
    auto clusters = select_clusters(s, view);
    std::vector<std::size_t> gone;
    std::vector<int> fresh;
    for (const auto& cluster : clusters) {
      for (const Candidate& c : candidates(s, cluster)) {
        FixTemplate t;
        try {
          t = merged(tpl(c.i), tpl(c.j));
        } catch (const ResultEmptyPattern&) {
          continue;
        } catch (const IncompatiblePatterns&) {
          continue;
        }
        int a = active_[c.i], b = active_[c.j];
        if (s == Stage::ExternalContext) {
          // Fold both into one node.
          int id = make(std::move(t), {}, 0);
          absorb(arena_[static_cast<std::size_t>(id)], arena_[static_cast<std::size_t>(a)]);
          absorb(arena_[static_cast<std::size_t>(id)], arena_[static_cast<std::size_t>(b)]);
          fresh.push_back(id);
          ++stats_.ec_merges;
        } else {
          fresh.push_back(make(std::move(t), {a, b}, 0));
          ++(s == Stage::InternalContext ? stats_.ic_merges : stats_.pattern_merges);
        }
        gone.push_back(c.i);
        gone.push_back(c.j);
        break;
      }
    }
    if (fresh.empty()) return false;
    std::vector<int> next;
    for (std::size_t k = 0; k < active_.size(); ++k) {
      if (std::find(gone.begin(), gone.end(), k) == gone.end()) next.push_back(active_[k]);
    }
    next.insert(next.end(), fresh.begin(), fresh.end());
    active_ = next;
    return true;
  }

  int make(FixTemplate t, std::vector<int> kids, std::size_t own) {
    MNode n{std::move(t), std::move(kids), 0, own};
    n.hash = n.tpl.content_hash();
    arena_.push_back(std::move(n));
    return static_cast<int>(arena_.size()) - 1;
  }

  // Instances held by the node plus those under its children.
  std::size_t count(int id) {
    const MNode& n = arena_[static_cast<std::size_t>(id)];
    std::size_t total = n.own;
    for (int k : n.kids) total += count(k);
    return total;
  }

  Forest emit() {
    canonicalize();
    Forest forest;
    for (int root : active_) {
      ClusteringTree ct;
      std::function<void(int, int)> walk = [&](int id, int parent) {
        const MNode& n = arena_[static_cast<std::size_t>(id)];
        int me = static_cast<int>(ct.templates.size());
        FixTemplate t = n.tpl;
        t.instance_count = count(id);
        ct.templates.push_back(std::move(t));
        ct.parent.push_back(parent);
        std::vector<int> kids = n.kids;
        std::sort(kids.begin(), kids.end(), [&](int x, int y) {
          const MNode& p = arena_[static_cast<std::size_t>(x)];
          const MNode& q = arena_[static_cast<std::size_t>(y)];
          if (p.hash != q.hash) return p.hash < q.hash;
          return p.tpl.instance_ids < q.tpl.instance_ids;
        });
        for (int k : kids) walk(k, me);
      };
      walk(root, -1);
      ct.root = 0;
      forest.push_back(std::move(ct));
    }
    return forest;
  }

  MinerOptions options_;
  std::vector<MNode> arena_;
  std::vector<int> active_;
  DistanceCache cache_;
  MiningStats stats_;
};

}  // namespace

std::vector<std::vector<std::size_t>> select_clusters(Stage stage, const std::vector<FixTemplate>& active) {
  std::vector<std::vector<std::size_t>> out;
  if (stage == Stage::Pattern) {
    if (active.size() >= 2) {
      out.emplace_back();
      for (std::size_t i = 0; i < active.size(); ++i) out.back().push_back(i);
    }
    return out;
  }
  auto same = stage == Stage::ExternalContext ? same_pattern_and_ic : same_pattern;
  std::vector<char> taken(active.size(), 0);
  for (std::size_t i = 0; i < active.size(); ++i) {
    if (taken[i]) continue;
    std::vector<std::size_t> group = {i};
    for (std::size_t j = i + 1; j < active.size(); ++j) {
      if (!taken[j] && same(active[i], active[j])) {
        group.push_back(j);
        taken[j] = 1;
      }
    }
    if (group.size() >= 2) out.push_back(std::move(group));
  }
  return out;
}

Forest mine(const std::vector<FixTemplate>& templates, const MinerOptions& options, MiningStats* stats) {
  Miner m(templates, options);
  Forest f = m.run();
  if (stats) *stats = m.stats();
  return f;
}

Forest prune_trees(const Forest& forest, std::size_t min_frequency) {
  Forest out;
  for (const auto& t : forest) {
    if (t.root_template().instance_count >= min_frequency) out.push_back(t);
  }
  return out;
}

std::string MiningReport::to_json(bool with_timing) const {
  nlohmann::json j;
  if (with_timing) j["wall_seconds"] = wall_seconds;
  nlohmann::json cats = nlohmann::json::object();
  for (const auto& [c, r] : categories) {
    cats[std::string(to_string(c))] = {{"instances", r.instances},
                                       {"clustering_trees", r.trees},
                                       {"trees_after_pruning", r.kept_trees},
                                       {"template_nodes", r.nodes},
                                       {"iterations", r.stats.iterations},
                                       {"iteration_bound", r.stats.bound},
                                       {"dedup_merges", r.stats.dedup_merges},
                                       {"external_context_merges", r.stats.ec_merges},
                                       {"internal_context_merges", r.stats.ic_merges},
                                       {"pattern_merges", r.stats.pattern_merges}};
  }
  j["categories"] = cats;
  return j.dump(2) + "\n";
}

Forest mine_all(const std::vector<FixTemplate>& templates, std::size_t min_frequency, const MinerOptions& options,
                MiningReport* report) {
  auto start = std::chrono::steady_clock::now();
  Forest out;
  MiningReport rep;
  for (Category c : kAllCategories) {
    std::vector<FixTemplate> part;
    for (const auto& t : templates) {
      if (t.category == c) part.push_back(t);
    }
    CategoryReport& cr = rep.categories[c];
    for (const auto& t : part) cr.instances += t.instance_ids.size();
    if (part.empty()) continue;
    Forest f = mine(part, options, &cr.stats);
    cr.trees = f.size();
    for (const auto& t : f) cr.nodes += t.templates.size();
    Forest kept = prune_trees(f, min_frequency);
    cr.kept_trees = kept.size();
    std::size_t index = out.size();
    for (auto& t : kept) {
      for (std::size_t k = 0; k < t.templates.size(); ++k) {
        t.templates[k].id = std::string(to_string(c)) + "/" + std::to_string(index) + "/" + std::to_string(k);
      }
      ++index;
      out.push_back(std::move(t));
    }
  }
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (report) *report = rep;
  return out;
}

}  // namespace tyfix
