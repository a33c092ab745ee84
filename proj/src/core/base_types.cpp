#include "json.hpp"

#include "tyfix/template.hpp"

namespace tyfix {
namespace {

using nlohmann::json;

// Built-in callables that are not type constructors.
const char* const kBuiltinNames[] = {
    "abs",      "aiter",    "all",      "anext",      "any",          "ascii",    "bin",
    "breakpoint", "callable", "chr",    "classmethod", "compile",     "delattr",  "dir",
    "divmod",   "enumerate", "eval",    "exec",       "exit",         "filter",   "format",
    "getattr",  "globals",  "hasattr",  "hash",       "help",         "hex",      "id",
    "input",    "isinstance", "issubclass", "iter",   "len",          "locals",   "map",
    "max",      "memoryview", "min",    "next",       "oct",          "open",     "ord",
    "pow",      "print",    "property", "quit",       "range",        "repr",     "reversed",
    "round",    "setattr",  "slice",    "sorted",     "staticmethod", "sum",      "super",
    "vars",     "zip",      "unicode",  "basestring", "long",         "xrange",   "raw_input"};

const char* const kTypeNames[] = {"int",   "str",       "bytes",     "float", "bool",
                                  "list",  "dict",      "set",       "tuple", "frozenset",
                                  "bytearray", "complex", "type",    "object"};

const char* const kAnnotationRelations[] = {"annotation", "returns"};

}  // namespace

const BaseTypeTable& BaseTypeTable::defaults() {
  static const BaseTypeTable table = [] {
    BaseTypeTable t;
    for (const auto& k : syntax::all_node_kinds()) {
      if (syntax::is_statement_kind(k)) {
        t.kinds_[k] = BaseType::Stmt;
      } else if (syntax::is_operator_kind(k)) {
        t.kinds_[k] = BaseType::Op;
      }
    }
    t.kinds_["Module"] = BaseType::Stmt;
    t.kinds_["ExceptHandler"] = BaseType::Stmt;
    t.kinds_["Constant"] = BaseType::Literal;
    t.kinds_["JoinedStr"] = BaseType::Literal;
    t.kinds_["Attribute"] = BaseType::Attribute;
    t.kinds_["arg"] = BaseType::Variable;
    t.kinds_[std::string(kContextKind)] = BaseType::Stmt;
    for (const char* n : kBuiltinNames) t.builtins_.insert(n);
    for (const char* n : kTypeNames) t.type_names_.insert(n);
    for (const char* r : kAnnotationRelations) t.annotation_relations_.insert(r);
    return t;
  }();
  return table;
}

BaseType BaseTypeTable::classify(std::string_view kind, std::string_view relation,
                                 std::string_view value) const {
  if (kind == "Name") {
    if (annotation_relations_.count(relation)) return BaseType::Type;
    if (type_names_.count(value)) return BaseType::Type;
    if (builtins_.count(value)) return BaseType::Builtin;
    return name_default_;
  }
  auto it = kinds_.find(kind);
  return it == kinds_.end() ? fallback_ : it->second;
}

std::string BaseTypeTable::to_json() const {
  json j;
  json kinds = json::object();
  for (const auto& [k, bt] : kinds_) kinds[k] = std::string(to_string(bt));
  j["kinds"] = kinds;
  j["builtins"] = std::vector<std::string>(builtins_.begin(), builtins_.end());
  j["type_names"] = std::vector<std::string>(type_names_.begin(), type_names_.end());
  j["annotation_relations"] =
      std::vector<std::string>(annotation_relations_.begin(), annotation_relations_.end());
  j["name_default"] = std::string(to_string(name_default_));
  j["fallback"] = std::string(to_string(fallback_));
  return j.dump(2) + "\n";
}

BaseTypeTable BaseTypeTable::from_json(std::string_view text) {
  json j = json::parse(text);
  auto bt_of = [](const json& v) {
    auto bt = parse_base_type(v.get<std::string>());
    if (!bt) throw std::invalid_argument("unknown base type " + v.get<std::string>());
    return *bt;
  };
  BaseTypeTable t;
  for (const auto& [k, v] : j.at("kinds").items()) t.kinds_[k] = bt_of(v);
  for (const auto& n : j.at("builtins")) t.builtins_.insert(n.get<std::string>());
  for (const auto& n : j.at("type_names")) t.type_names_.insert(n.get<std::string>());
  for (const auto& n : j.at("annotation_relations")) t.annotation_relations_.insert(n.get<std::string>());
  if (j.contains("name_default")) t.name_default_ = bt_of(j["name_default"]);
  if (j.contains("fallback")) t.fallback_ = bt_of(j["fallback"]);
  return t;
}

BaseType classify_base_type(std::string_view kind, std::string_view relation, std::string_view value) {
  return BaseTypeTable::defaults().classify(kind, relation, value);
}

}  // namespace tyfix
