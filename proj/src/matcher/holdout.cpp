#include <map>

#include "tyfix/matcher.hpp"
#include "tyfix/miner.hpp"

namespace tyfix {

CoverageReport leave_one_out_coverage(const std::vector<FixInstance>& fixes, std::size_t min_frequency,
                                      bool brute_force, unsigned jobs) {
  std::vector<std::pair<std::string, FixTemplate>> templates;
  for (const auto& f : fixes) {
    try {
      templates.emplace_back(fix_id_of(f.id), parse_fix(f));
    } catch (const std::exception&) {
      // reported by the per-fix pass below
    }
  }
  std::map<std::string, Forest> forests;
  CoverageReport out;
  for (const auto& f : fixes) {
    std::string held = fix_id_of(f.id);
    if (!forests.count(held)) {
      std::vector<FixTemplate> rest;
      for (const auto& [id, t] : templates) {
        if (id != held) rest.push_back(t);
      }
      forests[held] = mine_all(rest, min_frequency, MinerOptions{jobs});
    }
    const Forest& forest = forests[held];
    CoverageReport one = brute_force ? brute_force_coverage(forest, {f}) : template_coverage(forest, {f});
    out.total += one.total;
    out.covered += one.covered;
    out.per_fix.push_back(one.per_fix.front());
  }
  out.ratio = out.total == 0 ? 0.0 : static_cast<double>(out.covered) / static_cast<double>(out.total);
  return out;
}

}  // namespace tyfix
