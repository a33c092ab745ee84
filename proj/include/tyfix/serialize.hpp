#pragma once

// JSON persistence for template trees, fix templates and clustering forests.
// The schema is documented in docs/schema.md.

#include <stdexcept>
#include <string>
#include <string_view>

#include "json.hpp"
#include "tyfix/template.hpp"

namespace tyfix {

inline constexpr int kSchemaVersion = 1;

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

nlohmann::json tree_to_json(const TemplateTree& t);
TemplateTree tree_from_json(const nlohmann::json& j);

nlohmann::json template_to_json(const FixTemplate& t);
FixTemplate template_from_json(const nlohmann::json& j);

/// A clustering tree nests templates through "children".
nlohmann::json clustering_tree_to_json(const ClusteringTree& t);
ClusteringTree clustering_tree_from_json(const nlohmann::json& j);

/// {schema_version, trees: [...]}
std::string forest_to_string(const Forest& f);
Forest forest_from_string(std::string_view text);

/// Escaping for values that collide with the hole marker.
std::string encode_value(const std::optional<std::string>& v);
std::optional<std::string> decode_value(const std::string& s);

}  // namespace tyfix
