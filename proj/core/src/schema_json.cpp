#include <nlohmann/json.hpp>

#include "grammarforge/schema.hpp"

namespace grammarforge {

using nlohmann::json;

namespace {

Cardinality cardinality_from(const std::string& s) {
  if (s == "One") return Cardinality::One;
  if (s == "Optional") return Cardinality::Optional;
  if (s == "List") return Cardinality::List;
  throw Error(ErrorCode::SyntaxError, "unknown cardinality '" + s + "'");
}

TypeKind kind_from(const std::string& s) {
  if (s == "Concrete") return TypeKind::Concrete;
  if (s == "Interface") return TypeKind::Interface;
  if (s == "ExternalSlot") return TypeKind::ExternalSlot;
  throw Error(ErrorCode::SyntaxError, "unknown type kind '" + s + "'");
}

ValueType value_type_from(const std::string& s) {
  auto vt = value_type_from_name(s);
  if (!vt) throw Error(ErrorCode::SyntaxError, "unknown value type '" + s + "'");
  return *vt;
}

}  // namespace

std::string schema_to_json(const Schema& schema, int indent) {
  json types = json::object();
  for (const auto& [qname, t] : schema.types) {
    json attrs = json::array();
    for (const auto& a : t.attributes) {
      attrs.push_back({{"name", a.name},
                       {"valueType", to_string(a.valueType)},
                       {"cardinality", to_string(a.cardinality)},
                       {"atLeastOne", a.atLeastOne}});
    }
    json comps = json::array();
    for (const auto& c : t.compositions) {
      comps.push_back({{"name", c.name},
                       {"target", c.target},
                       {"cardinality", to_string(c.cardinality)},
                       {"atLeastOne", c.atLeastOne}});
    }
    json defining = nullptr;
    if (t.definingProduction) {
      defining = {{"grammar", t.definingProduction->grammar}, {"production", t.definingProduction->production}};
    }
    types[qname] = {{"kind", to_string(t.kind)},         {"name", t.name},
                    {"package", t.package},              {"attributes", std::move(attrs)},
                    {"compositions", std::move(comps)},  {"supertypes", t.supertypes},
                    {"interfaces", t.interfaces},        {"definingProduction", std::move(defining)}};
  }
  json root = {{"rootGrammar", schema.rootGrammar}, {"types", std::move(types)}};
  return root.dump(indent < 0 ? -1 : indent);
}

Schema schema_from_json(std::string_view text) {
  try {
    auto root = json::parse(text);
    Schema schema;
    schema.rootGrammar = root.at("rootGrammar").get<std::string>();
    for (const auto& [qname, jt] : root.at("types").items()) {
      NodeType t;
      t.name = jt.at("name").get<std::string>();
      t.package = jt.at("package").get<std::string>();
      t.kind = kind_from(jt.at("kind").get<std::string>());
      for (const auto& ja : jt.at("attributes")) {
        t.attributes.push_back({ja.at("name").get<std::string>(), value_type_from(ja.at("valueType").get<std::string>()),
                                cardinality_from(ja.at("cardinality").get<std::string>()),
                                ja.at("atLeastOne").get<bool>()});
      }
      for (const auto& jc : jt.at("compositions")) {
        t.compositions.push_back({jc.at("name").get<std::string>(), jc.at("target").get<std::string>(),
                                  cardinality_from(jc.at("cardinality").get<std::string>()),
                                  jc.at("atLeastOne").get<bool>()});
      }
      t.supertypes = jt.at("supertypes").get<std::vector<std::string>>();
      t.interfaces = jt.at("interfaces").get<std::vector<std::string>>();
      const auto& jd = jt.at("definingProduction");
      if (!jd.is_null()) {
        t.definingProduction = ProductionRef{jd.at("grammar").get<std::string>(), jd.at("production").get<std::string>()};
      }
      schema.types.emplace(qname, std::move(t));
    }
    return schema;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SyntaxError, std::string("malformed schema JSON: ") + e.what());
  }
}

}  // namespace grammarforge
