#include <algorithm>

#include "tyfix/fix_parser.hpp"
#include "tyfix/promptgen.hpp"

namespace tyfix {

namespace {

using syntax::Node;

constexpr char kOpen = '\x01';
constexpr char kClose = '\x02';

std::string leading_space(const std::string& line) {
  return line.substr(0, line.find_first_not_of(" \t"));
}

// Only whitespace or a comment after `col`.
bool clean_tail(const std::string& line, int col) {
  if (static_cast<std::size_t>(col) > line.size()) return true;
  auto rest = line.find_first_not_of(" \t", static_cast<std::size_t>(col));
  return rest == std::string::npos || line[rest] == '#';
}

class Renderer {
 public:
  std::string render(const Node& n) {
    syntax::UnparseOptions opts;
    opts.render_hole = [this](const syntax::HoleSlot& slot, std::size_t) {
      std::size_t k = slots_.size();
      slots_.push_back(slot);
      return std::string(1, kOpen) + std::to_string(k) + kClose;
    };
    try {
      return syntax::unparse_with(n, opts).text;
    } catch (const syntax::UnparseError& e) {
      throw GrammarViolation(e.what());
    }
  }
  std::vector<syntax::HoleSlot> slots_;
};

std::string join(const std::vector<std::string>& lines, std::size_t from, std::size_t to) {
  std::string out;
  for (std::size_t i = from; i < to && i < lines.size(); ++i) out += lines[i] + "\n";
  return out;
}

// Splits a rendered text at its sentinels into pieces around the masks.
std::vector<std::string> pieces_of(const std::string& text) {
  std::vector<std::string> out(1);
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == kOpen) {
      i = text.find(kClose, i);
      out.emplace_back();
    } else {
      out.back() += text[i];
    }
  }
  return out;
}

}  // namespace

std::string mask_token(std::size_t index) { return "<extra_id_" + std::to_string(index) + ">"; }

std::string placeholder_for(const syntax::HoleSlot& slot) {
  if (slot.hole == syntax::HoleKind::Subtree) {
    if (slot.base_type == "Stmt") return "pass";
    if (slot.base_type == "Op") return slot.relation == "ops" ? "==" : "+";
    return "__hole__";
  }
  if (slot.kind == "Constant") return "0";
  return "__hole__";
}

std::string fill_prompt(const CodePrompt& prompt, const std::vector<std::string>& fills) {
  auto pieces = pieces_of(prompt.text_with_sentinels);
  if (fills.size() + 1 != pieces.size()) throw std::invalid_argument("fill count does not match the masks");
  std::string out = pieces[0];
  for (std::size_t i = 0; i < fills.size(); ++i) out += fills[i] + pieces[i + 1];
  return out;
}

CodePrompt render_prompt(const Application& app, const std::string& source, std::size_t context_lines,
                         std::size_t max_masks) {
  CodePrompt p;
  p.template_id = app.template_id;
  Node original = syntax::parse_source(source);
  auto lines = split_lines(source);
  const Node& old_owner = syntax::node_at(original, app.owner);
  auto old_list = old_owner.children_of(app.relation);
  auto new_list = syntax::node_at(app.program, app.owner).children_of(app.relation);

  // Lines [first, last) of the original source that are replaced.
  std::size_t first = 0, last = 0;
  std::string indent;
  bool spliceable = true;
  if (app.original_begin < app.original_end) {
    const Node& a = *old_list.at(app.original_begin);
    const Node& b = *old_list.at(app.original_end - 1);
    first = static_cast<std::size_t>(a.span.start.line - 1);
    last = static_cast<std::size_t>(b.span.end.line);
    indent = leading_space(lines.at(first));
    spliceable = a.span.start.col == static_cast<int>(indent.size()) &&
                 clean_tail(lines.at(last - 1), b.span.end.col);
  } else if (app.original_begin < old_list.size()) {
    const Node& a = *old_list[app.original_begin];
    first = last = static_cast<std::size_t>(a.span.start.line - 1);
    indent = leading_space(lines.at(first));
    spliceable = a.span.start.col == static_cast<int>(indent.size());
  } else if (!old_list.empty()) {
    const Node& b = *old_list.back();
    first = last = static_cast<std::size_t>(b.span.end.line);
    indent = leading_space(lines.at(static_cast<std::size_t>(b.span.start.line - 1)));
    spliceable = clean_tail(lines.at(first - 1), b.span.end.col);
  } else {
    spliceable = false;
  }

  Renderer r;
  std::string text;
  std::size_t ctx_from = 0, ctx_to = 0;
  if (spliceable) {
    std::string block;
    for (std::size_t i = app.begin; i < app.end; ++i) {
      for (const auto& l : split_lines(r.render(*new_list.at(i)))) block += (l.empty() ? l : indent + l) + "\n";
    }
    std::size_t added = static_cast<std::size_t>(std::count(block.begin(), block.end(), '\n'));
    text = join(lines, 0, first) + block + join(lines, last, lines.size());
    ctx_from = first > context_lines ? first - context_lines : 0;
    ctx_to = first + added + context_lines;
  } else {
    text = r.render(app.program);
    ctx_to = static_cast<std::size_t>(-1);
  }
  if (r.slots_.size() > max_masks) {
    throw TooManyMasks(std::to_string(r.slots_.size()) + " holes exceed the " + std::to_string(max_masks) +
                       " available masks");
  }
  p.slots = r.slots_;
  p.mask_count = r.slots_.size();
  p.text_with_sentinels = text;
  std::vector<std::string> masks;
  for (std::size_t i = 0; i < p.mask_count; ++i) masks.push_back(mask_token(i));
  p.text = fill_prompt(p, masks);
  auto out_lines = split_lines(p.text);
  p.context = join(out_lines, ctx_from, std::min(ctx_to, out_lines.size()));
  return p;
}

}  // namespace tyfix
