#pragma once

// Matching a buggy program against mined templates, and ranking the matches.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "tyfix/fix_parser.hpp"
#include "tyfix/syntax.hpp"
#include "tyfix/template.hpp"

namespace tyfix {

/// The buggy program as seen by the matcher: the statements on the bug
/// lines, and the statements around them.
struct BuggyProgramView {
  TemplateTree bug;     // Bug_Tree
  TemplateTree before;  // BBug_Tree
  TemplateTree after;   // ABug_Tree
};

/// Where the view came from in the syntax tree.
struct ViewSite {
  std::vector<syntax::NodePath> statements;  // deepest statements on the bug lines
  // Absolute syntax path of every node of the view's Bug_Tree; a Group root
  // maps to the statements' common parent.
  std::vector<syntax::NodePath> node_paths;
};

BuggyProgramView make_view(const syntax::Node& module, const std::vector<int>& bug_lines, std::size_t window = 3,
                           ViewSite* site = nullptr);

bool template_match(const BuggyProgramView& view, const FixTemplate& tpl);

/// Deepest matched templates of each tree (nodes matched with no matched child).
std::vector<FixTemplate> bfs_select(const Forest& forest, const BuggyProgramView& view);
/// Every matched template, found by descending only through matched nodes.
std::vector<FixTemplate> matched_templates(const Forest& forest, const BuggyProgramView& view);

class EmptyMatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RankedGroup {
  std::uint64_t key = 0;  // hash of Concat(IC_Tree, B_Tree)
  std::vector<FixTemplate> templates;
};

struct RankedTemplates {
  std::vector<RankedGroup> groups;
  std::vector<FixTemplate> flatten() const;
};

RankedTemplates rank(const std::vector<FixTemplate>& matched);

/// Does the general template subsume the specific one from a fix: the fix's
/// buggy view matches and the fixed side matches too.
bool subsumes(const FixTemplate& general, const BuggyProgramView& view, const FixTemplate& specific);

struct CoverageEntry {
  std::string id;
  bool covered = false;
  std::vector<std::string> matched_template_ids;
  std::string error;  // parse failure, when the fix is excluded
};

struct CoverageReport {
  std::size_t total = 0;
  std::size_t covered = 0;
  double ratio = 0;
  std::vector<CoverageEntry> per_fix;
  std::string to_json() const;
};

/// Coverage of the fixes by the forest (templates found by descending
/// through matched nodes).
CoverageReport template_coverage(const Forest& forest, const std::vector<FixInstance>& fixes);
/// Same, checking every template of the forest against every fix.
CoverageReport brute_force_coverage(const Forest& forest, const std::vector<FixInstance>& fixes);

/// A fixed pack of nine hand-written templates for common type-error repairs
/// (conversions, None checks and guards), one tree each; a reference point
/// for mined coverage.
Forest baseline_pack();

/// Each fix is checked against a forest mined from every other fix (instances
/// of the same commit are held out together).
CoverageReport leave_one_out_coverage(const std::vector<FixInstance>& fixes, std::size_t min_frequency,
                                      bool brute_force = false, unsigned jobs = 1);

}  // namespace tyfix
