#pragma once

// Turning one bug fix (buggy file, fixed file) into a specific fix template.
//
// The pipeline: line diff -> split_fix (hunks grouped by connected deepest
// statements) -> extract_change (parallel tree diff locating the edit) ->
// split_level (fix pattern + internal context) -> build_external_context.

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tyfix/syntax.hpp"
#include "tyfix/template.hpp"

namespace tyfix {

class OversizeCommit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class UnparseableDiff : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class EmptyChange : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FixParserOptions {
  std::size_t max_modified_lines = 50;
  std::size_t context_window = 3;  // statements before and after the edit site
};

/// A line hunk: buggy lines [b_start, b_start + b_count) replaced by fixed
/// lines [a_start, a_start + a_count); 0-based.
struct Hunk {
  std::size_t b_start = 0;
  std::size_t b_count = 0;
  std::size_t a_start = 0;
  std::size_t a_count = 0;
  friend bool operator==(const Hunk&, const Hunk&) = default;
};

std::vector<std::string> split_lines(std::string_view text);
std::vector<Hunk> line_diff(std::string_view before, std::string_view after);
/// Applies a unified diff to `before`; throws UnparseableDiff on malformed
/// input or context mismatch.
std::string apply_unified_diff(std::string_view before, std::string_view diff);
/// Renders a unified diff (3 lines of context).
std::string unified_diff(std::string_view before, std::string_view after, const std::string& from_name,
                         const std::string& to_name);

struct FixInstance {
  std::string id;
  std::string buggy_src;
  std::string fixed_src;
  std::vector<syntax::SourceSpan> deleted_lines;  // in buggy_src
  std::vector<syntax::SourceSpan> added_lines;    // in fixed_src
};

/// Splits a fix into instances of connected edits. Each instance's fixed
/// source is the buggy source with only that instance's hunks applied.
std::vector<FixInstance> split_fix(const std::string& id, const std::string& buggy, const std::string& fixed,
                                   const FixParserOptions& options = {});
/// Instances of a split fix are named "<fix-id>#<k>"; this recovers the fix id.
std::string fix_id_of(const std::string& instance_id);
/// Same, from a unified diff against `buggy`.
std::vector<FixInstance> split_fix_diff(const std::string& id, const std::string& buggy, std::string_view diff,
                                        const FixParserOptions& options = {});

/// Where the edit sits. For statement-level edits `owner` holds the edited
/// statement list under `relation`; for expression-level edits `owner` is the
/// internal-context node and `relation` the attach relation. Ranges are
/// positions within the children of that relation.
struct EditSite {
  bool expression_level = false;
  syntax::NodePath owner_b;
  syntax::NodePath owner_a;
  std::string relation;
  std::size_t b_begin = 0, b_end = 0;
  std::size_t a_begin = 0, a_end = 0;
};

struct Change {
  EditSite site;
  TemplateTree bug_tree;  // pruned buggy side
  TemplateTree fix_tree;  // pruned fixed side
  // Statements anchoring the external context: a range of one statement
  // list in the buggy program.
  syntax::NodePath anchor_owner;
  std::string anchor_relation;
  std::size_t anchor_begin = 0, anchor_end = 0;
  FixPattern pattern;
  InternalContext ic;
  std::vector<int> bug_lines;  // 1-based buggy lines of the edit site
};

/// Locates the edit by a parallel top-down diff of the two syntax trees.
/// Throws EmptyChange when the trees are identical.
Change extract_change(const syntax::Node& buggy, const syntax::Node& fixed);
Change extract_change(const FixInstance& inst);

/// The fix pattern and internal context of a change (already computed by
/// extract_change; exposed for symmetry with the pipeline description).
std::pair<FixPattern, InternalContext> split_level(const Change& change);

/// Statement siblings of a range, under a synthetic Context root.
/// `keep` selects statements; when `prune_to` is non-empty, subtrees that do
/// not mention one of those variables are pruned.
TemplateTree context_tree(const syntax::Node& owner, const std::string& relation,
                          const std::vector<std::size_t>& indices, const std::set<std::string>& prune_to);

ExternalContext build_external_context(const syntax::Node& buggy, const Change& change,
                                       const FixParserOptions& options = {});

/// A parsed fix with what later stages need to replay it.
struct ParsedFix {
  FixTemplate tpl;
  std::string buggy_src;
  std::string fixed_src;
  std::vector<int> bug_lines;  // 1-based buggy lines of the edit site
};

ParsedFix parse_fix_detailed(const FixInstance& inst, const FixParserOptions& options = {});
FixTemplate parse_fix(const FixInstance& inst, const FixParserOptions& options = {});

/// Corpus layout: <dir>/<fix-id>/before.py plus after.py or fix.diff, and an
/// optional lines.json {"deleted": [[s, e], ...], "added": [[s, e], ...]}.
struct CorpusError {
  std::string id;
  std::string message;
};
struct Corpus {
  std::vector<FixInstance> instances;
  std::vector<CorpusError> errors;
};
Corpus load_corpus(const std::string& dir, const FixParserOptions& options = {});

}  // namespace tyfix
