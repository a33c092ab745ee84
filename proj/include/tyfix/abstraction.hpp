#pragma once

// Merging two template components into a more general one.
//
// Node cases, applied pairwise: equal labels keep the node; equal base type
// and type with different values give a value hole; equal base type with
// different types give a type hole without children; anything else removes
// the node. Patterns are merged from the roots down, contexts from paired
// leaves up.

#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tyfix/template.hpp"

namespace tyfix {

/// Both trees of an abstracted pattern became empty.
class ResultEmptyPattern : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The patterns cannot share a parent: a tree would vanish, or their anchors
/// disagree.
class IncompatiblePatterns : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Label merge; std::nullopt means the node is removed.
std::optional<Label> abstract_label(const Label& a, const Label& b);

struct TreeAbstraction {
  TemplateTree tree;
  // Input node id -> child-index path of its image in `tree`.
  std::map<int, std::vector<std::size_t>> image1, image2;
};

/// Top-down merge: children pair positionally within each relation, up to
/// the shorter list.
TreeAbstraction abstract_tree(const TemplateTree& t1, const TemplateTree& t2);

FixPattern abstract_pattern(const FixPattern& p1, const FixPattern& p2);

/// Bottom-up merge along paired leaves; chains climb while both parents share
/// base type and type and the edges agree. Shared ancestors are merged.
TemplateTree abstract_context_tree(const TemplateTree& t1, const TemplateTree& t2,
                                   const std::vector<std::pair<int, int>>& pairs);

InternalContext abstract_internal(const InternalContext& c1, const InternalContext& c2);
ExternalContext abstract_external(const ExternalContext& c1, const ExternalContext& c2);

}  // namespace tyfix
