#include <algorithm>
#include <set>

#include "tyfix/promptgen.hpp"

namespace tyfix {

std::string_view to_string(PatchStatus s) {
  switch (s) {
    case PatchStatus::Generated:
      return "generated";
    case PatchStatus::SyntaxOk:
      return "syntax_ok";
    case PatchStatus::Plausible:
      return "plausible";
  }
  return "generated";
}

Generation generate_patches(const std::string& source, const BuggyProgramView& view, const ViewSite& site,
                            const RankedTemplates& ranked, MaskFiller& filler, const GenerationOptions& options) {
  Generation out;
  syntax::Node program = syntax::parse_source(source);
  std::set<std::string> seen;
  std::size_t rank = 0;
  for (const auto& tpl : ranked.flatten()) {
    if (rank++ >= options.max_templates) break;
    try {
      std::vector<CandidatePatch> mine;
      for (const auto& app : apply_template(program, view, site, tpl)) {
        CodePrompt prompt = render_prompt(app, source, options.context_lines);
        out.prompts.push_back(prompt);
        std::vector<FillResult> fills;
        if (prompt.mask_count == 0) {
          fills.push_back({{}, 1.0});
        } else {
          fills = filler.fill(prompt, options.beam);
        }
        for (auto& f : fills) {
          CandidatePatch c;
          c.template_id = tpl.id;
          c.text = fill_prompt(prompt, f.fills);
          c.fills = std::move(f.fills);
          c.score = f.score;
          mine.push_back(std::move(c));
        }
      }
      std::stable_sort(mine.begin(), mine.end(),
                       [](const CandidatePatch& a, const CandidatePatch& b) { return a.score > b.score; });
      for (auto& c : mine) {
        if (!seen.insert(c.text).second) continue;
        c.id = "c" + std::to_string(out.candidates.size());
        out.candidates.push_back(std::move(c));
      }
    } catch (const std::exception& e) {
      out.errors.push_back({tpl.id, e.what()});
    }
  }
  return out;
}

}  // namespace tyfix
