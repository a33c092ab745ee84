#include <algorithm>
#include <regex>
#include <sstream>

#include "tyfix/fix_parser.hpp"

namespace tyfix {

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      out.emplace_back(text.substr(start));
      break;
    }
    std::string_view line = text.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    out.emplace_back(line);
    start = nl + 1;
  }
  return out;
}

namespace {

std::string join_lines(const std::vector<std::string>& lines) {
  std::string s;
  for (const auto& l : lines) s += l + "\n";
  return s;
}

}  // namespace

std::vector<Hunk> line_diff(std::string_view before, std::string_view after) {
  auto a = split_lines(before);
  auto b = split_lines(after);
  std::size_t pre = 0;
  while (pre < a.size() && pre < b.size() && a[pre] == b[pre]) ++pre;
  std::size_t suf = 0;
  while (suf < a.size() - pre && suf < b.size() - pre && a[a.size() - 1 - suf] == b[b.size() - 1 - suf]) ++suf;
  std::size_t n = a.size() - pre - suf;
  std::size_t m = b.size() - pre - suf;
  std::vector<Hunk> hunks;
  if (n == 0 && m == 0) return hunks;
  if (n == 0 || m == 0 || n * m > 16'000'000) {
    hunks.push_back({pre, n, pre, m});
    return hunks;
  }
  // LCS over the middle section.
  std::vector<std::vector<std::uint32_t>> dp(n + 1, std::vector<std::uint32_t>(m + 1, 0));
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = m; j-- > 0;) {
      dp[i][j] = a[pre + i] == b[pre + j] ? dp[i + 1][j + 1] + 1 : std::max(dp[i + 1][j], dp[i][j + 1]);
    }
  }
  std::size_t i = 0, j = 0;
  Hunk cur;
  bool open = false;
  auto close = [&] {
    if (open) hunks.push_back(cur);
    open = false;
  };
  while (i < n || j < m) {
    if (i < n && j < m && a[pre + i] == b[pre + j]) {
      close();
      ++i;
      ++j;
      continue;
    }
    if (!open) {
      cur = {pre + i, 0, pre + j, 0};
      open = true;
    }
    if (j < m && (i == n || dp[i][j + 1] >= dp[i + 1][j])) {
      ++cur.a_count;
      ++j;
    } else {
      ++cur.b_count;
      ++i;
    }
  }
  close();
  return hunks;
}

std::string apply_unified_diff(std::string_view before, std::string_view diff) {
  auto src = split_lines(before);
  auto lines = split_lines(diff);
  static const std::regex header(R"(^@@ -(\d+)(?:,(\d+))? \+(\d+)(?:,(\d+))? @@.*$)");
  std::vector<std::string> out;
  std::size_t pos = 0;  // next unconsumed source line
  bool any = false;
  std::size_t k = 0;
  while (k < lines.size()) {
    std::smatch m;
    if (!std::regex_match(lines[k], m, header)) {
      if (any && !lines[k].empty() && lines[k].rfind("diff ", 0) != 0 && lines[k].rfind("--- ", 0) != 0 &&
          lines[k].rfind("+++ ", 0) != 0 && lines[k].rfind("index ", 0) != 0) {
        throw UnparseableDiff("unexpected line " + std::to_string(k + 1) + " in diff");
      }
      ++k;
      continue;
    }
    any = true;
    std::size_t old_start = std::stoul(m[1]);
    std::size_t old_count = m[2].matched ? std::stoul(m[2]) : 1;
    std::size_t new_count = m[4].matched ? std::stoul(m[4]) : 1;
    std::size_t first = old_count == 0 ? old_start : old_start - 1;
    if (old_count > 0 && old_start == 0) throw UnparseableDiff("bad hunk start");
    if (first < pos || first > src.size()) throw UnparseableDiff("hunks out of order or out of range");
    while (pos < first) out.push_back(src[pos++]);
    std::size_t seen_old = 0, seen_new = 0;
    ++k;
    while (k < lines.size() && (seen_old < old_count || seen_new < new_count)) {
      const std::string& l = lines[k];
      char tag = l.empty() ? ' ' : l[0];
      std::string body = l.empty() ? std::string() : l.substr(1);
      if (tag == '\\') {
        ++k;
        continue;
      }
      if (tag == ' ' || tag == '-') {
        if (pos >= src.size() || src[pos] != body) {
          throw UnparseableDiff("context mismatch at source line " + std::to_string(pos + 1));
        }
        if (tag == ' ') out.push_back(body);
        ++pos;
        ++seen_old;
        if (tag == ' ') ++seen_new;
      } else if (tag == '+') {
        out.push_back(body);
        ++seen_new;
      } else {
        throw UnparseableDiff("bad hunk line " + std::to_string(k + 1));
      }
      ++k;
    }
    if (seen_old != old_count || seen_new != new_count) throw UnparseableDiff("truncated hunk");
    while (k < lines.size() && !lines[k].empty() && lines[k][0] == '\\') ++k;
  }
  if (!any) throw UnparseableDiff("no hunks in diff");
  while (pos < src.size()) out.push_back(src[pos++]);
  return join_lines(out);
}

std::string unified_diff(std::string_view before, std::string_view after, const std::string& from_name,
                         const std::string& to_name) {
  auto a = split_lines(before);
  auto b = split_lines(after);
  auto hunks = line_diff(before, after);
  if (hunks.empty()) return {};
  constexpr std::size_t ctx = 3;
  std::ostringstream os;
  os << "--- " << from_name << "\n+++ " << to_name << "\n";
  std::size_t h = 0;
  while (h < hunks.size()) {
    // Merge hunks whose context windows touch.
    std::size_t last = h;
    while (last + 1 < hunks.size() &&
           hunks[last + 1].b_start <= hunks[last].b_start + hunks[last].b_count + 2 * ctx) {
      ++last;
    }
    std::size_t b0 = hunks[h].b_start >= ctx ? hunks[h].b_start - ctx : 0;
    std::size_t a0 = hunks[h].a_start - (hunks[h].b_start - b0);
    std::size_t b1 = std::min(a.size(), hunks[last].b_start + hunks[last].b_count + ctx);
    std::size_t a1 = hunks[last].a_start + hunks[last].a_count + (b1 - hunks[last].b_start - hunks[last].b_count);
    auto range = [](std::size_t start, std::size_t count) {
      return std::to_string(count == 0 ? start : start + 1) + "," + std::to_string(count);
    };
    os << "@@ -" << range(b0, b1 - b0) << " +" << range(a0, a1 - a0) << " @@\n";
    std::size_t bi = b0;
    for (std::size_t k = h; k <= last; ++k) {
      while (bi < hunks[k].b_start) os << " " << a[bi++] << "\n";
      for (std::size_t x = 0; x < hunks[k].b_count; ++x) os << "-" << a[bi++] << "\n";
      for (std::size_t x = 0; x < hunks[k].a_count; ++x) os << "+" << b[hunks[k].a_start + x] << "\n";
    }
    while (bi < b1) os << " " << a[bi++] << "\n";
    h = last + 1;
  }
  return os.str();
}

}  // namespace tyfix
