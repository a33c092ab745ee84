#include <algorithm>
#include <map>

#include "tyfix/syntax.hpp"

namespace tyfix::syntax {
namespace {

// Precedence levels, loosest first.
enum Prec : int {
  kYield = -1,  // only bare as a statement or assignment value
  kTuple = 0,
  kLambda = 1,
  kIfExp = 2,
  kOr = 3,
  kAnd = 4,
  kNot = 5,
  kCompare = 6,
  kBitOr = 7,
  kBitXor = 8,
  kBitAnd = 9,
  kShift = 10,
  kArith = 11,
  kTerm = 12,
  kUnary = 13,
  kPow = 14,
  kAwait = 15,
  kPrimary = 16,
  kAtom = 17,
};

struct OpInfo {
  const char* symbol;
  int prec;
};

const std::map<std::string, OpInfo, std::less<>> kOps = {
    {"Add", {"+", kArith}},       {"Sub", {"-", kArith}},        {"Mult", {"*", kTerm}},
    {"MatMult", {"@", kTerm}},    {"Div", {"/", kTerm}},         {"Mod", {"%", kTerm}},
    {"FloorDiv", {"//", kTerm}},  {"Pow", {"**", kPow}},         {"LShift", {"<<", kShift}},
    {"RShift", {">>", kShift}},   {"BitOr", {"|", kBitOr}},      {"BitXor", {"^", kBitXor}},
    {"BitAnd", {"&", kBitAnd}},   {"And", {"and", kAnd}},        {"Or", {"or", kOr}},
    {"Not", {"not", kNot}},       {"Invert", {"~", kUnary}},     {"UAdd", {"+", kUnary}},
    {"USub", {"-", kUnary}},      {"Eq", {"==", kCompare}},      {"NotEq", {"!=", kCompare}},
    {"Lt", {"<", kCompare}},      {"LtE", {"<=", kCompare}},     {"Gt", {">", kCompare}},
    {"GtE", {">=", kCompare}},    {"Is", {"is", kCompare}},      {"IsNot", {"is not", kCompare}},
    {"In", {"in", kCompare}},     {"NotIn", {"not in", kCompare}}};

bool all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

class Unparser {
 public:
  explicit Unparser(const UnparseOptions& opts) : opts_(opts) {}

  UnparseResult run(const Node& root) {
    if (root.kind == "Module") {
      block_items(root, "body", 0, /*allow_empty=*/true);
    } else if (is_statement_kind(root.kind) || has_statement_child(root)) {
      stmt(root, 0);
    } else if (root.hole == HoleKind::Subtree && root.hole_base == "Stmt") {
      stmt(root, 0);
    } else {
      if (opts_.focus == &root) focus_hit_ = true;
      out_ = expr(root, kTuple, "");
      if (focus_hit_) result_.focus_lines = SourceSpan(1, 1 + newlines(out_));
    }
    result_.text = std::move(out_);
    return std::move(result_);
  }

 private:
  static bool has_statement_child(const Node& n) {
    if (n.kind != "Group" && n.kind != "Context") return false;
    return std::any_of(n.children.begin(), n.children.end(), [](const Child& c) {
      return is_statement_kind(c.node.kind) ||
             (c.node.hole == HoleKind::Subtree && c.node.hole_base == "Stmt");
    });
  }

  static int newlines(const std::string& s) {
    return static_cast<int>(std::count(s.begin(), s.end(), '\n'));
  }

  int current_line() const { return 1 + newlines(out_); }

  std::string hole(const Node& n, std::string_view relation) {
    HoleSlot slot;
    slot.hole = n.hole;
    slot.relation = std::string(relation);
    if (n.hole == HoleKind::Value) {
      slot.kind = n.kind;
    } else {
      slot.base_type = n.hole_base;
    }
    std::size_t index = result_.holes.size();
    result_.holes.push_back(slot);
    return opts_.render_hole ? opts_.render_hole(slot, index) : std::string("<HOLE>");
  }

  // The node's value, or the hole text for value holes.
  std::string val(const Node& n, std::string_view relation) {
    return n.hole == HoleKind::Value ? hole(n, relation) : n.value;
  }

  static void require(const Node& n) {
    for (const auto& rc : required_children(n.kind)) {
      if (n.count(rc.relation) < rc.min_count) {
        throw UnparseError(n.kind + " is missing required child '" + rc.relation + "'");
      }
    }
  }

  // ---- expressions ---------------------------------------------------------

  int prec_of(const Node& n) const {
    if (n.hole == HoleKind::Subtree) return kAtom;
    const std::string& k = n.kind;
    if (k == "Tuple") return n.children.size() <= 1 ? kAtom : kTuple;
    if (k == "Yield" || k == "YieldFrom") return kYield;
    if (k == "Lambda") return kLambda;
    if (k == "IfExp") return kIfExp;
    if (k == "BoolOp" || k == "BinOp" || k == "UnaryOp") {
      const Node* op = n.child("op");
      if (op == nullptr) return kAtom;
      if (op->is_hole()) return kCompare;
      if (k == "UnaryOp") return op->kind == "Not" ? kNot : kUnary;
      auto it = kOps.find(op->kind);
      return it == kOps.end() ? kAtom : it->second.prec;
    }
    if (k == "Compare") return kCompare;
    if (k == "Await") return kAwait;
    if (k == "Call" || k == "Attribute" || k == "Subscript") return kPrimary;
    return kAtom;
  }

  std::string expr(const Node& n, int required, std::string_view relation) {
    if (opts_.focus == &n) focus_hit_ = true;
    if (n.hole == HoleKind::Subtree) return hole(n, relation);
    require(n);
    std::string s = expr_body(n, relation);
    if (prec_of(n) < required) return "(" + s + ")";
    return s;
  }

  std::string op_text(const Node& op, std::string_view relation) {
    if (op.is_hole()) return hole(op, relation);
    auto it = kOps.find(op.kind);
    if (it == kOps.end()) throw UnparseError("unknown operator " + op.kind);
    return it->second.symbol;
  }

  std::string join_exprs(const Node& n, std::string_view relation, int required) {
    std::string s;
    for (const auto& c : n.children) {
      if (c.relation != relation) continue;
      if (!s.empty()) s += ", ";
      s += expr(c.node, required, c.relation);
    }
    return s;
  }

  std::string tuple_elts(const Node& n) {
    std::string s = join_exprs(n, "elts", kLambda);
    if (n.count("elts") == 1) s += ",";
    return s;
  }

  std::string expr_body(const Node& n, std::string_view relation) {
    const std::string& k = n.kind;
    if (k == "Name" || k == "Constant" || k == "JoinedStr") return val(n, relation);
    if (k == "Attribute") {
      const Node& v = *n.child("value");
      std::string base = expr(v, kPrimary, "value");
      if (v.kind == "Constant" && !v.is_hole() && all_digits(v.value)) base = "(" + base + ")";
      return base + "." + val(n, relation);
    }
    if (k == "Call") return call(n);
    if (k == "Subscript") {
      std::string s = expr(*n.child("value"), kPrimary, "value");
      const Node& sl = *n.child("slice");
      std::string inner;
      if (sl.kind == "Tuple" && !sl.is_hole() && !sl.children.empty()) {
        if (opts_.focus == &sl) focus_hit_ = true;
        inner = tuple_elts(sl);
      } else {
        inner = expr(sl, kTuple, "slice");
      }
      return s + "[" + inner + "]";
    }
    if (k == "Slice") {
      std::string s;
      if (const Node* lo = n.child("lower")) s += expr(*lo, kLambda, "lower");
      s += ":";
      if (const Node* up = n.child("upper")) s += expr(*up, kLambda, "upper");
      if (const Node* st = n.child("step")) s += ":" + expr(*st, kLambda, "step");
      return s;
    }
    if (k == "BinOp") {
      const Node& op = *n.child("op");
      int p = prec_of(n);
      int lreq = op.is_hole() ? kPrimary : (op.kind == "Pow" ? kAwait : p);
      int rreq = op.is_hole() ? kPrimary : (op.kind == "Pow" ? kUnary : p + 1);
      std::string l = expr(*n.child("left"), lreq, "left");
      std::string o = op_text(op, "op");
      std::string r = expr(*n.child("right"), rreq, "right");
      return l + " " + o + " " + r;
    }
    if (k == "UnaryOp") {
      const Node& op = *n.child("op");
      std::string o = op_text(op, "op");
      if (op.is_hole()) return o + " " + expr(*n.child("operand"), kPrimary, "operand");
      if (op.kind == "Not") return o + " " + expr(*n.child("operand"), kNot, "operand");
      return o + expr(*n.child("operand"), kUnary, "operand");
    }
    if (k == "BoolOp") {
      int p = prec_of(n);
      int req = n.child("op")->is_hole() ? kPrimary : p + 1;
      std::string o;
      std::string s;
      bool first = true;
      for (const auto& c : n.children) {
        if (c.relation == "op") {
          o = op_text(c.node, "op");
          continue;
        }
        if (c.relation != "values") continue;
        if (!first) s += " " + o + " ";
        s += expr(c.node, req, "values");
        first = false;
      }
      return s;
    }
    if (k == "Compare") {
      std::string s;
      for (const auto& c : n.children) {
        if (c.relation == "left" || c.relation == "comparators") {
          s += expr(c.node, kBitOr, c.relation);
        } else if (c.relation == "ops") {
          s += " " + op_text(c.node, "ops") + " ";
        }
      }
      return s;
    }
    if (k == "IfExp") {
      std::string b = expr(*n.child("body"), kOr, "body");
      std::string t = expr(*n.child("test"), kOr, "test");
      std::string e = expr(*n.child("orelse"), kIfExp, "orelse");
      return b + " if " + t + " else " + e;
    }
    if (k == "Lambda") {
      std::string a = arguments(*n.child("args"), false);
      std::string b = expr(*n.child("body"), kLambda, "body");
      return a.empty() ? "lambda: " + b : "lambda " + a + ": " + b;
    }
    if (k == "NamedExpr") {
      return "(" + expr(*n.child("target"), kAtom, "target") + " := " +
             expr(*n.child("value"), kLambda, "value") + ")";
    }
    if (k == "Await") return "await " + expr(*n.child("value"), kPrimary, "value");
    if (k == "Yield") {
      const Node* v = n.child("value");
      return v ? "yield " + expr(*v, kTuple, "value") : std::string("yield");
    }
    if (k == "YieldFrom") return "yield from " + expr(*n.child("value"), kLambda, "value");
    if (k == "Starred") return "*" + expr(*n.child("value"), kBitOr, "value");
    if (k == "Tuple") {
      if (n.children.size() == 1) return "(" + tuple_elts(n) + ")";
      return n.children.empty() ? std::string("()") : tuple_elts(n);
    }
    if (k == "List") return "[" + join_exprs(n, "elts", kLambda) + "]";
    if (k == "Set") return "{" + join_exprs(n, "elts", kLambda) + "}";
    if (k == "Dict") {
      std::string s;
      std::string pending_key;
      for (const auto& c : n.children) {
        if (c.relation == "keys") {
          pending_key = expr(c.node, kLambda, "keys");
          continue;
        }
        if (!s.empty()) s += ", ";
        if (c.relation == "values") {
          s += pending_key + ": " + expr(c.node, kLambda, "values");
        } else if (c.relation == "unpack") {
          s += "**" + expr(c.node, kBitOr, "unpack");
        }
      }
      return "{" + s + "}";
    }
    if (k == "ListComp") return "[" + comp_body(n) + "]";
    if (k == "SetComp") return "{" + comp_body(n) + "}";
    if (k == "GeneratorExp") return "(" + comp_body(n) + ")";
    if (k == "DictComp") {
      std::string key = expr(*n.child("key"), kLambda, "key");
      std::string value = expr(*n.child("value"), kLambda, "value");
      return "{" + key + ": " + value + generators(n) + "}";
    }
    if (k == "Group" || k == "Context") {
      std::string s;
      for (const auto& c : n.children) {
        if (!s.empty()) s += ", ";
        s += expr(c.node, kLambda, c.relation);
      }
      return s;
    }
    throw UnparseError("cannot render " + k + " as an expression");
  }

  std::string comp_body(const Node& n) { return expr(*n.child("elt"), kLambda, "elt") + generators(n); }

  std::string generators(const Node& n) {
    std::string s;
    for (const auto& c : n.children) {
      if (c.relation != "generators") continue;
      const Node& g = c.node;
      if (opts_.focus == &g) focus_hit_ = true;
      if (g.is_hole()) {
        s += " " + hole(g, "generators");
        continue;
      }
      require(g);
      std::string prefix = val(g, "generators");
      s += prefix.empty() ? " for " : " " + prefix + " for ";
      s += expr(*g.child("target"), kTuple, "target");
      s += " in " + expr(*g.child("iter"), kOr, "iter");
      for (const auto& f : g.children) {
        if (f.relation == "ifs") s += " if " + expr(f.node, kOr, "ifs");
      }
    }
    return s;
  }

  std::string call_args(const Node& n, std::string_view positional) {
    std::size_t positional_count = 0;
    std::size_t total = 0;
    for (const auto& c : n.children) {
      if (c.relation == positional || c.relation == "keywords") ++total;
      if (c.relation == positional) ++positional_count;
    }
    std::string s;
    for (const auto& c : n.children) {
      if (c.relation == positional) {
        if (!s.empty()) s += ", ";
        const Node& a = c.node;
        if (a.kind == "GeneratorExp" && !a.is_hole() && total == 1) {
          if (opts_.focus == &a) focus_hit_ = true;
          require(a);
          s += comp_body(a);
        } else {
          s += expr(a, kLambda, c.relation);
        }
      } else if (c.relation == "keywords") {
        if (!s.empty()) s += ", ";
        s += keyword(c.node);
      }
    }
    (void)positional_count;
    return s;
  }

  std::string keyword(const Node& kw) {
    if (opts_.focus == &kw) focus_hit_ = true;
    if (kw.hole == HoleKind::Subtree) return hole(kw, "keywords");
    require(kw);
    std::string name = val(kw, "keywords");
    std::string v = expr(*kw.child("value"), kLambda, "value");
    return name.empty() ? "**" + v : name + "=" + v;
  }

  std::string call(const Node& n) {
    std::string f = expr(*n.child("func"), kPrimary, "func");
    return f + "(" + call_args(n, "args") + ")";
  }

  std::string arg(const Node& a, std::string_view relation, bool annotations) {
    if (opts_.focus == &a) focus_hit_ = true;
    if (a.hole == HoleKind::Subtree) return hole(a, relation);
    std::string s = val(a, relation);
    const Node* ann = annotations ? a.child("annotation") : nullptr;
    if (ann) s += ": " + expr(*ann, kLambda, "annotation");
    if (const Node* d = a.child("default")) {
      s += ann ? " = " : "=";
      s += expr(*d, kLambda, "default");
    }
    return s;
  }

  std::string arguments(const Node& args, bool annotations) {
    if (opts_.focus == &args) focus_hit_ = true;
    if (args.hole == HoleKind::Subtree) return hole(args, "args");
    std::size_t last_posonly = args.children.size();
    for (std::size_t i = 0; i < args.children.size(); ++i) {
      if (args.children[i].relation == "posonlyargs") last_posonly = i;
    }
    std::vector<std::string> parts;
    for (std::size_t i = 0; i < args.children.size(); ++i) {
      const Child& c = args.children[i];
      if (c.relation == "vararg") {
        parts.push_back("*" + arg(c.node, c.relation, annotations));
      } else if (c.relation == "kwarg") {
        parts.push_back("**" + arg(c.node, c.relation, annotations));
      } else if (c.relation == "kwonly_marker") {
        parts.push_back(c.node.is_hole() ? hole(c.node, c.relation) : "*");
      } else {
        parts.push_back(arg(c.node, c.relation, annotations));
      }
      if (i == last_posonly) parts.push_back("/");
    }
    std::string s;
    for (const auto& p : parts) s += (s.empty() ? "" : ", ") + p;
    return s;
  }

  // ---- statements ----------------------------------------------------------

  void line(int indent, const std::string& text) {
    out_.append(static_cast<std::size_t>(indent) * 4, ' ');
    out_ += text;
    out_ += '\n';
  }

  void block_items(const Node& n, std::string_view relation, int indent, bool allow_empty) {
    bool any = false;
    for (const auto& c : n.children) {
      if (c.relation != relation) continue;
      stmt(c.node, indent);
      any = true;
    }
    if (!any && !allow_empty) line(indent, "pass");
  }

  void block(const Node& n, std::string_view relation, int indent) {
    block_items(n, relation, indent, false);
  }

  // Emits a header line and records focus if an expression in it was the
  // focus node.
  void header(int indent, const std::string& text, bool hit) {
    int start = current_line();
    line(indent, text);
    if (hit && !result_.focus_lines) result_.focus_lines = SourceSpan(start, current_line() - 1);
  }

  void stmt(const Node& n, int indent) {
    int start = current_line();
    bool saved = focus_hit_;
    focus_hit_ = false;
    stmt_inner(n, indent);
    focus_hit_ = saved;
    if (opts_.focus == &n && current_line() > start) {
      result_.focus_lines = SourceSpan(start, current_line() - 1);
    }
  }

  std::string header_expr(const Node& n, std::string_view rel, int req = kTuple) {
    return expr(n, req, rel);
  }

  void stmt_inner(const Node& n, int indent) {
    if (n.hole == HoleKind::Subtree) {
      std::string h = hole(n, "body");
      header(indent, h, false);
      return;
    }
    require(n);
    const std::string& k = n.kind;
    if (k == "Group" || k == "Context" || k == "Module") {
      for (const auto& c : n.children) stmt(c.node, indent);
      return;
    }
    std::string async_prefix;
    std::string base = k;
    if (k.rfind("Async", 0) == 0) {
      async_prefix = "async ";
      base = k.substr(5);
    }
    if (base == "FunctionDef" || k == "ClassDef") {
      for (const auto& c : n.children) {
        if (c.relation != "decorator_list") continue;
        focus_hit_ = false;
        std::string d = "@" + expr(c.node, kLambda, "decorator_list");
        header(indent, d, focus_hit_);
      }
      focus_hit_ = false;
      std::string h;
      if (k == "ClassDef") {
        std::string bases;
        for (const auto& c : n.children) {
          if (c.relation == "bases") {
            bases += (bases.empty() ? "" : ", ") + expr(c.node, kLambda, "bases");
          } else if (c.relation == "keywords") {
            bases += (bases.empty() ? "" : ", ") + keyword(c.node);
          }
        }
        h = "class " + val(n, "body");
        if (!bases.empty()) h += "(" + bases + ")";
      } else {
        h = async_prefix + "def " + val(n, "body") + "(" + arguments(*n.child("args"), true) + ")";
        if (const Node* r = n.child("returns")) h += " -> " + expr(*r, kLambda, "returns");
      }
      header(indent, h + ":", focus_hit_);
      block(n, "body", indent + 1);
      return;
    }
    if (k == "If") {
      if_chain(n, indent, "if ");
      return;
    }
    if (k == "While") {
      std::string t = header_expr(*n.child("test"), "test", kLambda);
      header(indent, "while " + t + ":", focus_hit_);
      block(n, "body", indent + 1);
      else_block(n, indent);
      return;
    }
    if (base == "For") {
      std::string t = header_expr(*n.child("target"), "target");
      std::string it = header_expr(*n.child("iter"), "iter");
      header(indent, async_prefix + "for " + t + " in " + it + ":", focus_hit_);
      block(n, "body", indent + 1);
      else_block(n, indent);
      return;
    }
    if (base == "With") {
      std::string items;
      for (const auto& c : n.children) {
        if (c.relation != "items") continue;
        const Node& item = c.node;
        if (opts_.focus == &item) focus_hit_ = true;
        std::string s;
        if (item.is_hole()) {
          s = hole(item, "items");
        } else {
          require(item);
          s = expr(*item.child("context_expr"), kLambda, "context_expr");
          if (const Node* v = item.child("optional_vars")) s += " as " + expr(*v, kAtom - 1, "optional_vars");
        }
        items += (items.empty() ? "" : ", ") + s;
      }
      header(indent, async_prefix + "with " + items + ":", focus_hit_);
      block(n, "body", indent + 1);
      return;
    }
    if (k == "Try") {
      header(indent, "try:", false);
      block(n, "body", indent + 1);
      for (const auto& c : n.children) {
        if (c.relation != "handlers") continue;
        const Node& h = c.node;
        int hstart = current_line();
        focus_hit_ = false;
        if (h.is_hole()) {
          header(indent, hole(h, "handlers"), false);
          continue;
        }
        std::string s = "except";
        if (const Node* t = h.child("type")) s += " " + expr(*t, kLambda, "type");
        std::string name = val(h, "handlers");
        if (!name.empty()) s += " as " + name;
        header(indent, s + ":", focus_hit_);
        block(h, "body", indent + 1);
        if (opts_.focus == &h) result_.focus_lines = SourceSpan(hstart, current_line() - 1);
      }
      if (n.count("orelse") > 0) {
        header(indent, "else:", false);
        block(n, "orelse", indent + 1);
      }
      if (n.count("finalbody") > 0) {
        header(indent, "finally:", false);
        block(n, "finalbody", indent + 1);
      }
      return;
    }
    // Simple statements.
    focus_hit_ = false;
    std::string text = simple(n);
    header(indent, text, focus_hit_);
  }

  void if_chain(const Node& n, int indent, const std::string& keyword_text) {
    std::string t = header_expr(*n.child("test"), "test", kLambda);
    header(indent, keyword_text + t + ":", focus_hit_);
    block(n, "body", indent + 1);
    auto orelse = n.children_of("orelse");
    if (orelse.size() == 1 && orelse[0]->kind == "If" && !orelse[0]->is_hole()) {
      const Node& e = *orelse[0];
      int start = current_line();
      focus_hit_ = false;
      require(e);
      if_chain(e, indent, "elif ");
      if (opts_.focus == &e) result_.focus_lines = SourceSpan(start, current_line() - 1);
      return;
    }
    else_block(n, indent);
  }

  void else_block(const Node& n, int indent) {
    if (n.count("orelse") == 0) return;
    header(indent, "else:", false);
    block(n, "orelse", indent + 1);
  }

  std::string simple(const Node& n) {
    const std::string& k = n.kind;
    if (k == "Pass") return "pass";
    if (k == "Break") return "break";
    if (k == "Continue") return "continue";
    if (k == "Expr") return expr(*n.child("value"), kYield, "value");
    if (k == "Return") {
      const Node* v = n.child("value");
      return v ? "return " + expr(*v, kTuple, "value") : std::string("return");
    }
    if (k == "Assign") {
      std::string s;
      for (const auto& c : n.children) {
        if (c.relation == "targets") s += expr(c.node, kTuple, "targets") + " = ";
      }
      return s + expr(*n.child("value"), kYield, "value");
    }
    if (k == "AugAssign") {
      std::string t = expr(*n.child("target"), kAtom - 1, "target");
      std::string o = op_text(*n.child("op"), "op");
      return t + " " + o + "= " + expr(*n.child("value"), kYield, "value");
    }
    if (k == "AnnAssign") {
      std::string s = expr(*n.child("target"), kAtom - 1, "target") + ": " +
                      expr(*n.child("annotation"), kLambda, "annotation");
      if (const Node* v = n.child("value")) s += " = " + expr(*v, kYield, "value");
      return s;
    }
    if (k == "Raise") {
      std::string s = "raise";
      if (const Node* e = n.child("exc")) s += " " + expr(*e, kLambda, "exc");
      if (const Node* c = n.child("cause")) s += " from " + expr(*c, kLambda, "cause");
      return s;
    }
    if (k == "Delete") return "del " + join_exprs(n, "targets", kLambda);
    if (k == "Assert") {
      std::string s = "assert " + expr(*n.child("test"), kLambda, "test");
      if (const Node* m = n.child("msg")) s += ", " + expr(*m, kLambda, "msg");
      return s;
    }
    if (k == "Global" || k == "Nonlocal") {
      std::string s = k == "Global" ? "global " : "nonlocal ";
      return s + join_exprs(n, "names", kAtom);
    }
    if (k == "Import" || k == "ImportFrom") {
      std::string names;
      for (const auto& c : n.children) {
        if (c.relation != "names") continue;
        std::string a = c.node.hole == HoleKind::Subtree ? hole(c.node, "names") : val(c.node, "names");
        names += (names.empty() ? "" : ", ") + a;
      }
      if (k == "Import") return "import " + names;
      return "from " + val(n, "body") + " import " + names;
    }
    throw UnparseError("cannot render " + k + " as a statement");
  }

  const UnparseOptions& opts_;
  std::string out_;
  UnparseResult result_;
  bool focus_hit_ = false;
};

}  // namespace

UnparseResult unparse_with(const Node& tree, const UnparseOptions& options) {
  return Unparser(options).run(tree);
}

std::string unparse(const Node& tree) { return unparse_with(tree, {}).text; }

std::string normalize(std::string_view text) { return unparse(parse_source(text)); }

}  // namespace tyfix::syntax
