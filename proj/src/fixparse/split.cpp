#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "tyfix/fix_parser.hpp"

namespace tyfix {

using syntax::NodePath;

namespace {

bool is_prefix(const NodePath& a, const NodePath& b) {
  return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
}

bool trivial_line(const std::string& l) {
  auto p = l.find_first_not_of(" \t");
  return p == std::string::npos || l[p] == '#';
}

std::vector<NodePath> statements_at(const syntax::Node& root, const std::vector<int>& lines) {
  try {
    return syntax::deepest_statement_paths(root, lines);
  } catch (const syntax::EmptyResult&) {
    return {};
  }
}

// Deepest statements a hunk touches in the buggy program. Pure additions
// attach to the next line holding a statement, else the previous one.
std::vector<NodePath> hunk_sites(const syntax::Node& root, const Hunk& h, int line_count) {
  std::vector<int> lines;
  for (std::size_t k = 0; k < h.b_count; ++k) lines.push_back(static_cast<int>(h.b_start + k) + 1);
  auto paths = statements_at(root, lines);
  if (!paths.empty()) return paths;
  for (int l = static_cast<int>(h.b_start + h.b_count) + 1; l <= line_count; ++l) {
    paths = statements_at(root, {l});
    if (!paths.empty()) return paths;
  }
  for (int l = static_cast<int>(h.b_start); l >= 1; --l) {
    paths = statements_at(root, {l});
    if (!paths.empty()) return paths;
  }
  return {};
}

std::string join(const std::vector<std::string>& lines) {
  std::string s;
  for (const auto& l : lines) s += l + "\n";
  return s;
}

std::size_t find(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<syntax::SourceSpan> spans_from_json(const nlohmann::json& j, const char* key) {
  std::vector<syntax::SourceSpan> out;
  if (!j.contains(key)) return out;
  for (const auto& e : j.at(key)) out.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
  return out;
}

}  // namespace

std::string fix_id_of(const std::string& instance_id) {
  auto p = instance_id.rfind('#');
  return p == std::string::npos ? instance_id : instance_id.substr(0, p);
}

std::vector<FixInstance> split_fix(const std::string& id, const std::string& buggy, const std::string& fixed,
                                   const FixParserOptions& options) {
  auto b_lines = split_lines(buggy);
  auto a_lines = split_lines(fixed);
  auto all = line_diff(buggy, fixed);
  std::size_t modified = 0;
  for (const auto& h : all) modified += h.b_count + h.a_count;
  if (modified > options.max_modified_lines) {
    throw OversizeCommit(id + ": " + std::to_string(modified) + " modified lines exceeds the limit of " +
                         std::to_string(options.max_modified_lines));
  }
  std::vector<Hunk> hunks;
  for (const auto& h : all) {
    bool trivial = true;
    for (std::size_t k = 0; k < h.b_count; ++k) trivial = trivial && trivial_line(b_lines[h.b_start + k]);
    for (std::size_t k = 0; k < h.a_count; ++k) trivial = trivial && trivial_line(a_lines[h.a_start + k]);
    if (!trivial) hunks.push_back(h);
  }
  if (hunks.empty()) throw EmptyChange(id + ": the fix changes only comments or blank lines");

  syntax::Node root = syntax::parse_source(buggy);
  std::vector<std::vector<NodePath>> sites;
  for (const auto& h : hunks) sites.push_back(hunk_sites(root, h, static_cast<int>(b_lines.size())));
  std::vector<std::size_t> parent(hunks.size());
  std::iota(parent.begin(), parent.end(), 0);
  for (std::size_t i = 0; i < hunks.size(); ++i) {
    for (std::size_t j = i + 1; j < hunks.size(); ++j) {
      bool related = false;
      for (const auto& p : sites[i]) {
        for (const auto& q : sites[j]) related = related || is_prefix(p, q) || is_prefix(q, p);
      }
      if (related) parent[find(parent, i)] = find(parent, j);
    }
  }
  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::size_t> group_of(hunks.size(), SIZE_MAX);
  for (std::size_t i = 0; i < hunks.size(); ++i) {
    std::size_t r = find(parent, i);
    if (group_of[r] == SIZE_MAX) {
      group_of[r] = groups.size();
      groups.emplace_back();
    }
    groups[group_of[r]].push_back(i);
  }

  auto instance = [&](const std::string& iid, const std::vector<std::size_t>& members) {
    FixInstance inst;
    inst.id = iid;
    inst.buggy_src = buggy;
    std::vector<std::string> out;
    std::size_t pos = 0;
    for (std::size_t m : members) {
      const Hunk& h = hunks[m];
      while (pos < h.b_start) out.push_back(b_lines[pos++]);
      if (h.b_count) inst.deleted_lines.emplace_back(h.b_start + 1, h.b_start + h.b_count);
      if (h.a_count) {
        int first = static_cast<int>(out.size()) + 1;
        inst.added_lines.emplace_back(first, first + static_cast<int>(h.a_count) - 1);
      }
      for (std::size_t k = 0; k < h.a_count; ++k) out.push_back(a_lines[h.a_start + k]);
      pos = h.b_start + h.b_count;
    }
    while (pos < b_lines.size()) out.push_back(b_lines[pos++]);
    inst.fixed_src = join(out);
    return inst;
  };

  std::vector<std::size_t> every(hunks.size());
  std::iota(every.begin(), every.end(), 0);
  if (groups.size() == 1) {
    FixInstance one = instance(id, every);
    one.fixed_src = fixed;
    return {one};
  }
  std::vector<FixInstance> out;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    out.push_back(instance(id + "#" + std::to_string(g + 1), groups[g]));
    try {
      syntax::parse_source(out.back().fixed_src);
    } catch (const syntax::SyntaxError&) {
      // The edits only make sense together.
      FixInstance one = instance(id, every);
      one.fixed_src = fixed;
      return {one};
    }
  }
  return out;
}

std::vector<FixInstance> split_fix_diff(const std::string& id, const std::string& buggy, std::string_view diff,
                                        const FixParserOptions& options) {
  return split_fix(id, buggy, apply_unified_diff(buggy, diff), options);
}

Corpus load_corpus(const std::string& dir, const FixParserOptions& options) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw std::runtime_error("corpus directory not found: " + dir);
  std::vector<fs::path> entries;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_directory()) entries.push_back(e.path());
  }
  std::sort(entries.begin(), entries.end());
  Corpus corpus;
  for (const auto& p : entries) {
    std::string id = p.filename().string();
    try {
      std::string buggy = read_file(p / "before.py");
      std::string fixed;
      if (fs::exists(p / "after.py")) {
        fixed = read_file(p / "after.py");
      } else if (fs::exists(p / "fix.diff")) {
        fixed = apply_unified_diff(buggy, read_file(p / "fix.diff"));
      } else {
        throw std::runtime_error("neither after.py nor fix.diff present");
      }
      syntax::parse_source(fixed);
      if (fs::exists(p / "lines.json")) {
        // Explicit line annotations describe one connected edit.
        auto j = nlohmann::json::parse(read_file(p / "lines.json"));
        FixInstance inst;
        inst.id = id;
        inst.buggy_src = buggy;
        inst.fixed_src = fixed;
        inst.deleted_lines = spans_from_json(j, "deleted");
        inst.added_lines = spans_from_json(j, "added");
        std::size_t modified = 0;
        for (const auto& s : inst.deleted_lines) modified += static_cast<std::size_t>(s.end_line - s.start_line + 1);
        for (const auto& s : inst.added_lines) modified += static_cast<std::size_t>(s.end_line - s.start_line + 1);
        if (modified > options.max_modified_lines) throw OversizeCommit(id + ": too many modified lines");
        corpus.instances.push_back(std::move(inst));
      } else {
        for (auto& inst : split_fix(id, buggy, fixed, options)) corpus.instances.push_back(std::move(inst));
      }
    } catch (const std::exception& e) {
      corpus.errors.push_back({id, e.what()});
    }
  }
  return corpus;
}

}  // namespace tyfix
