#include "tyfix/serialize.hpp"

#include <functional>

namespace tyfix {

using nlohmann::json;

namespace {

constexpr std::string_view kHole = "ABS";

const json& field(const json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) throw SchemaError(std::string("missing field '") + name + "'");
  return j.at(name);
}

template <typename T>
T get(const json& j, const char* name) {
  try {
    return field(j, name).get<T>();
  } catch (const json::exception& e) {
    throw SchemaError(std::string("bad field '") + name + "': " + e.what());
  }
}

std::string_view position_name(Anchor::Position p) {
  switch (p) {
    case Anchor::Position::Before: return "before";
    case Anchor::Position::After: return "after";
    case Anchor::Position::None: break;
  }
  return "none";
}

Anchor::Position parse_position(const std::string& s) {
  if (s == "before") return Anchor::Position::Before;
  if (s == "after") return Anchor::Position::After;
  if (s == "none") return Anchor::Position::None;
  throw SchemaError("unknown anchor position '" + s + "'");
}

}  // namespace

// A literal "ABS" is written as "\ABS"; any value starting with a backslash
// gets one more backslash, so decoding strips exactly one.
std::string encode_value(const std::optional<std::string>& v) {
  if (!v) return std::string(kHole);
  if (*v == kHole || (!v->empty() && (*v)[0] == '\\')) return "\\" + *v;
  return *v;
}

std::optional<std::string> decode_value(const std::string& s) {
  if (s == kHole) return std::nullopt;
  if (!s.empty() && s[0] == '\\') return s.substr(1);
  return s;
}

json tree_to_json(const TemplateTree& t) {
  if (t.empty()) return nullptr;
  json nodes = json::array();
  for (std::size_t i = 0; i < t.size(); ++i) {
    const TNode& n = t.node(static_cast<int>(i));
    nodes.push_back({{"id", i},
                     {"bt", n.label.bt ? std::string(to_string(*n.label.bt)) : std::string(kHole)},
                     {"t", encode_value(n.label.t)},
                     {"v", encode_value(n.label.v)},
                     {"parent", n.parent},
                     {"rel", n.rel}});
  }
  return {{"rt", 0}, {"nodes", nodes}};
}

TemplateTree tree_from_json(const json& j) {
  if (j.is_null()) return {};
  if (get<int>(j, "rt") != 0) throw SchemaError("root id must be 0");
  const json& nodes = field(j, "nodes");
  if (!nodes.is_array() || nodes.empty()) throw SchemaError("'nodes' must be a non-empty array");
  // Rebuild through make() so the arena invariants are re-established.
  std::vector<std::pair<Label, std::pair<int, std::string>>> flat;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const json& n = nodes[i];
    if (get<std::size_t>(n, "id") != i) throw SchemaError("node ids must be preorder indices");
    Label l;
    std::string bt = get<std::string>(n, "bt");
    if (bt != kHole) {
      l.bt = parse_base_type(bt);
      if (!l.bt) throw SchemaError("unknown base type '" + bt + "'");
    }
    l.t = decode_value(get<std::string>(n, "t"));
    l.v = decode_value(get<std::string>(n, "v"));
    int parent = get<int>(n, "parent");
    if ((i == 0) != (parent == -1) || parent >= static_cast<int>(i)) {
      throw SchemaError("bad parent for node " + std::to_string(i));
    }
    flat.push_back({l, {parent, get<std::string>(n, "rel")}});
  }
  std::function<TemplateTree(int)> build = [&](int id) {
    std::vector<std::pair<std::string, TemplateTree>> kids;
    for (std::size_t k = 0; k < flat.size(); ++k) {
      if (flat[k].second.first == id) kids.emplace_back(flat[k].second.second, build(static_cast<int>(k)));
    }
    return TemplateTree::make(flat[static_cast<std::size_t>(id)].first, std::move(kids));
  };
  TemplateTree t = build(0).with_root_relation(flat[0].second.second);
  // Children must appear in preorder for ids to round-trip.
  if (t.size() != flat.size()) throw SchemaError("tree is not connected");
  for (std::size_t i = 0; i < flat.size(); ++i) {
    if (t.node(static_cast<int>(i)).parent != flat[i].second.first) {
      throw SchemaError("node ids are not in preorder");
    }
  }
  return t;
}

namespace {

json template_body(const FixTemplate& t) {
  json anchor = {{"position", position_name(t.pattern.anchor.position)}};
  anchor["index"] = t.pattern.anchor.index ? json(*t.pattern.anchor.index) : json(nullptr);
  anchor["embed"] = t.pattern.anchor.embed ? json(*t.pattern.anchor.embed) : json(nullptr);
  json rn = json::array();
  for (const auto& [id, rels] : t.ic.rn) rn.push_back({{"node", id}, {"br", rels.first}, {"ar", rels.second}});
  return {{"schema_version", kSchemaVersion},
          {"id", t.id},
          {"category", std::string(to_string(t.category))},
          {"pattern",
           {{"before", tree_to_json(t.pattern.before)},
            {"after", tree_to_json(t.pattern.after)},
            {"anchor", anchor}}},
          {"internal_context", {{"tree", tree_to_json(t.ic.tree)}, {"rn", rn}}},
          {"external_context", {{"before", tree_to_json(t.ec.before)}, {"after", tree_to_json(t.ec.after)}}},
          {"instance_count", t.instance_count},
          {"instance_ids", json(std::vector<std::string>(t.instance_ids.begin(), t.instance_ids.end()))}};
}

void check_version(const json& j) {
  int v = get<int>(j, "schema_version");
  if (v != kSchemaVersion) throw SchemaError("unsupported schema_version " + std::to_string(v));
}

}  // namespace

json template_to_json(const FixTemplate& t) {
  json j = template_body(t);
  j["children"] = json::array();
  return j;
}

FixTemplate template_from_json(const json& j) {
  check_version(j);
  FixTemplate t;
  t.id = get<std::string>(j, "id");
  std::string cat = get<std::string>(j, "category");
  auto c = parse_category(cat);
  if (!c) throw SchemaError("unknown category '" + cat + "'");
  t.category = *c;
  const json& p = field(j, "pattern");
  t.pattern.before = tree_from_json(field(p, "before"));
  t.pattern.after = tree_from_json(field(p, "after"));
  if (p.contains("anchor")) {
    const json& a = p.at("anchor");
    t.pattern.anchor.position = parse_position(get<std::string>(a, "position"));
    if (a.contains("index") && !a.at("index").is_null()) t.pattern.anchor.index = a.at("index").get<int>();
    if (a.contains("embed") && !a.at("embed").is_null()) {
      t.pattern.anchor.embed = a.at("embed").get<std::vector<std::size_t>>();
    }
  }
  const json& ic = field(j, "internal_context");
  t.ic.tree = tree_from_json(field(ic, "tree"));
  for (const auto& e : field(ic, "rn")) {
    int node = get<int>(e, "node");
    if (node < 0 || node >= static_cast<int>(t.ic.tree.size())) throw SchemaError("rn key is not an IC node");
    t.ic.rn[node] = {get<std::string>(e, "br"), get<std::string>(e, "ar")};
  }
  const json& ec = field(j, "external_context");
  t.ec.before = tree_from_json(field(ec, "before"));
  t.ec.after = tree_from_json(field(ec, "after"));
  t.instance_count = get<std::size_t>(j, "instance_count");
  for (const auto& id : field(j, "instance_ids")) t.instance_ids.insert(id.get<std::string>());
  return t;
}

json clustering_tree_to_json(const ClusteringTree& ct) {
  std::function<json(int)> render = [&](int i) {
    json j = template_body(ct.templates.at(static_cast<std::size_t>(i)));
    json kids = json::array();
    for (int c : ct.children_of(i)) kids.push_back(render(c));
    j["children"] = kids;
    return j;
  };
  return render(ct.root);
}

ClusteringTree clustering_tree_from_json(const json& j) {
  ClusteringTree ct;
  std::function<void(const json&, int)> walk = [&](const json& node, int parent) {
    int id = static_cast<int>(ct.templates.size());
    ct.templates.push_back(template_from_json(node));
    ct.parent.push_back(parent);
    for (const auto& c : field(node, "children")) walk(c, id);
  };
  walk(j, -1);
  ct.root = 0;
  return ct;
}

std::string forest_to_string(const Forest& f) {
  json trees = json::array();
  for (const auto& t : f) trees.push_back(clustering_tree_to_json(t));
  json doc = {{"schema_version", kSchemaVersion}, {"trees", trees}};
  return doc.dump(1) + "\n";
}

Forest forest_from_string(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
  check_version(doc);
  Forest f;
  for (const auto& t : field(doc, "trees")) f.push_back(clustering_tree_from_json(t));
  return f;
}

}  // namespace tyfix
