#pragma once

// Hierarchical clustering of specific fix templates into clustering trees.
//
// Each iteration deduplicates identical templates, then tries the stages in
// priority order (external context, internal context, fix pattern) and
// performs the merges of the first stage that changes anything. External
// context merges fold two templates into one node; the other stages give two
// templates a new, more abstract parent.

#include <chrono>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "tyfix/template.hpp"

namespace tyfix {

enum class Stage { ExternalContext, InternalContext, Pattern };

struct MinerOptions {
  unsigned jobs = 1;  // threads for pairwise distances
};

struct MiningStats {
  std::size_t input_templates = 0;
  std::size_t iterations = 0;
  std::size_t bound = 0;  // iterations allowed by the termination argument
  std::size_t dedup_merges = 0;
  std::size_t ec_merges = 0;
  std::size_t ic_merges = 0;
  std::size_t pattern_merges = 0;
};

/// Groups of indices into `active` that the stage may merge within (only
/// groups of two or more). External context: same pattern and internal
/// context; internal context: same pattern; pattern: everything.
std::vector<std::vector<std::size_t>> select_clusters(Stage stage, const std::vector<FixTemplate>& active);

/// Mines one category. Templates must be specific and share a category.
Forest mine(const std::vector<FixTemplate>& templates, const MinerOptions& options = {},
            MiningStats* stats = nullptr);

/// Drops trees whose root instance count is below `min_frequency`.
Forest prune_trees(const Forest& forest, std::size_t min_frequency);

struct CategoryReport {
  std::size_t instances = 0;
  std::size_t trees = 0;
  std::size_t nodes = 0;
  std::size_t kept_trees = 0;  // after pruning
  MiningStats stats;
};

struct MiningReport {
  std::map<Category, CategoryReport> categories;
  double wall_seconds = 0;
  // Wall time is left out unless asked for, so that reports are reproducible.
  std::string to_json(bool with_timing = false) const;
};

/// Partitions by category, mines each, prunes, and concatenates the forests
/// in category order.
Forest mine_all(const std::vector<FixTemplate>& templates, std::size_t min_frequency,
                const MinerOptions& options = {}, MiningReport* report = nullptr);

}  // namespace tyfix
