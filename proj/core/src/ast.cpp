#include "grammarforge/ast.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>

namespace grammarforge {

using nlohmann::json;

bool ChildSlot::operator==(const ChildSlot& other) const {
  return name == other.name && cardinality == other.cardinality && nodes == other.nodes;
}

const AttributeSlot* AstNode::attribute(std::string_view n) const {
  for (const auto& a : attributes) {
    if (a.name == n) return &a;
  }
  return nullptr;
}

const ChildSlot* AstNode::child(std::string_view n) const {
  for (const auto& c : children) {
    if (c.name == n) return &c;
  }
  return nullptr;
}

AttributeSlot* AstNode::attribute(std::string_view n) {
  return const_cast<AttributeSlot*>(std::as_const(*this).attribute(n));
}

ChildSlot* AstNode::child(std::string_view n) { return const_cast<ChildSlot*>(std::as_const(*this).child(n)); }

const Value* AstNode::value(std::string_view n) const {
  const auto* a = attribute(n);
  return a && !a->values.empty() ? &a->values.front() : nullptr;
}

std::size_t AstNode::subtree_size() const {
  std::size_t n = 1;
  for (const auto& c : children) {
    for (const auto& node : c.nodes) n += node.subtree_size();
  }
  return n;
}

AstNode make_node(const NodeType& type) {
  AstNode node;
  node.type = type.qualified_name();
  for (const auto& a : type.attributes) node.attributes.push_back({a.name, a.cardinality, {}});
  for (const auto& c : type.compositions) node.children.push_back({c.name, c.cardinality, {}});
  return node;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

json value_json(const Value& v) {
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  return std::get<std::int64_t>(v);
}

template <typename T, typename F>
json slot_json(Cardinality card, const std::vector<T>& items, F&& convert) {
  if (card == Cardinality::List) {
    json arr = json::array();
    for (const auto& item : items) arr.push_back(convert(item));
    return arr;
  }
  if (items.empty()) return nullptr;
  return convert(items.front());
}

json node_json(const AstNode& node) {
  json attrs = json::object();
  for (const auto& a : node.attributes) attrs[a.name] = slot_json(a.cardinality, a.values, value_json);
  json children = json::object();
  for (const auto& c : node.children) children[c.name] = slot_json(c.cardinality, c.nodes, node_json);
  return {{"type", node.type},
          {"attributes", std::move(attrs)},
          {"children", std::move(children)},
          {"span", json::array({node.span.start, node.span.end})}};
}

[[noreturn]] void invalid(const std::string& message) { throw Error(ErrorCode::InvalidAst, message); }

Value value_from(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return j.get<std::int64_t>();
  invalid("attribute values must be strings or integers, got " + j.dump());
}

Cardinality guess_cardinality(const json& j) {
  if (j.is_array()) return Cardinality::List;
  if (j.is_null()) return Cardinality::Optional;
  return Cardinality::One;
}

AstNode node_from(const json& j, const Schema* schema) {
  if (!j.is_object()) invalid("node must be an object");
  for (const char* key : {"type", "attributes", "children", "span"}) {
    if (!j.contains(key)) invalid(std::string("node lacks '") + key + "'");
  }
  AstNode node;
  node.type = j.at("type").get<std::string>();
  const auto& span = j.at("span");
  if (!span.is_array() || span.size() != 2) invalid("span must be [start, end]");
  node.span = {span[0].get<std::size_t>(), span[1].get<std::size_t>()};

  const auto& attrs = j.at("attributes");
  const auto& children = j.at("children");
  if (!attrs.is_object() || !children.is_object()) invalid("attributes and children must be objects");

  const NodeType* type = schema ? schema->find(node.type) : nullptr;
  if (schema && !type) invalid("unknown node type '" + node.type + "'");

  auto read_values = [&](const json& jv, Cardinality card, const std::string& name) {
    std::vector<Value> out;
    if (card == Cardinality::List) {
      if (!jv.is_array()) invalid("attribute '" + name + "' of " + node.type + " must be a list");
      for (const auto& x : jv) out.push_back(value_from(x));
    } else if (!jv.is_null()) {
      out.push_back(value_from(jv));
    }
    return out;
  };
  auto read_nodes = [&](const json& jv, Cardinality card, const std::string& name) {
    std::vector<AstNode> out;
    if (card == Cardinality::List) {
      if (!jv.is_array()) invalid("child '" + name + "' of " + node.type + " must be a list");
      for (const auto& x : jv) out.push_back(node_from(x, schema));
    } else if (!jv.is_null()) {
      out.push_back(node_from(jv, schema));
    }
    return out;
  };

  if (type) {
    for (const auto& a : type->attributes) {
      if (!attrs.contains(a.name)) invalid(node.type + " lacks attribute '" + a.name + "'");
      node.attributes.push_back({a.name, a.cardinality, read_values(attrs.at(a.name), a.cardinality, a.name)});
    }
    for (const auto& c : type->compositions) {
      if (!children.contains(c.name)) invalid(node.type + " lacks child '" + c.name + "'");
      node.children.push_back({c.name, c.cardinality, read_nodes(children.at(c.name), c.cardinality, c.name)});
    }
    for (const auto& [k, v] : attrs.items()) {
      if (!type->find_attribute(k)) invalid(node.type + " has no attribute '" + k + "'");
    }
    for (const auto& [k, v] : children.items()) {
      if (!type->find_composition(k)) invalid(node.type + " has no child '" + k + "'");
    }
  } else {
    for (const auto& [k, v] : attrs.items()) {
      auto card = guess_cardinality(v);
      node.attributes.push_back({k, card, read_values(v, card, k)});
    }
    for (const auto& [k, v] : children.items()) {
      auto card = guess_cardinality(v);
      node.children.push_back({k, card, read_nodes(v, card, k)});
    }
  }
  return node;
}

}  // namespace

std::string ast_to_json(const AstNode& node, int indent) { return node_json(node).dump(indent < 0 ? -1 : indent); }

AstNode ast_from_json(std::string_view text, const Schema* schema) {
  try {
    return node_from(json::parse(text), schema);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidAst, std::string("malformed AST JSON: ") + e.what());
  }
}

bool structurally_equal(const AstNode& a, const AstNode& b) {
  if (a.type != b.type || a.attributes.size() != b.attributes.size() || a.children.size() != b.children.size()) {
    return false;
  }
  for (const auto& slot : a.attributes) {
    const auto* other = b.attribute(slot.name);
    if (!other || other->values != slot.values) return false;
  }
  for (const auto& slot : a.children) {
    const auto* other = b.child(slot.name);
    if (!other || other->nodes.size() != slot.nodes.size()) return false;
    for (std::size_t i = 0; i < slot.nodes.size(); ++i) {
      if (!structurally_equal(slot.nodes[i], other->nodes[i])) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Conformance

namespace {

bool value_has_type(const Value& v, ValueType t) {
  return t == ValueType::Int ? std::holds_alternative<std::int64_t>(v) : std::holds_alternative<std::string>(v);
}

bool count_ok(std::size_t n, Cardinality card, bool atLeastOne) {
  switch (card) {
    case Cardinality::One: return n == 1;
    case Cardinality::Optional: return n <= 1;
    case Cardinality::List: return !atLeastOne || n >= 1;
  }
  return false;
}

bool fits_target(const Schema& schema, const AstNode& child, const std::string& target) {
  if (target == kAnyNode || schema.is_subtype(child.type, target)) return true;
  const auto* iface = schema.find(target);
  if (!iface || iface->kind != TypeKind::Interface) return false;
  // Handwritten interfaces are satisfied structurally.
  auto attrs = schema.all_attributes(child.type);
  return std::all_of(iface->attributes.begin(), iface->attributes.end(), [&](const AttributeSpec& req) {
    return std::any_of(attrs.begin(), attrs.end(),
                       [&](const AttributeSpec& a) { return a.name == req.name && a.valueType == req.valueType; });
  });
}

void check(const AstNode& node, const Schema& schema, std::vector<std::string>& out) {
  const auto* type = schema.find(node.type);
  if (!type) {
    out.push_back("unknown node type '" + node.type + "'");
    return;
  }
  if (type->kind != TypeKind::Concrete) out.push_back("'" + node.type + "' is not a concrete type");
  if (node.span.start > node.span.end) out.push_back("'" + node.type + "' has an inverted span");

  for (const auto& slot : node.attributes) {
    if (!type->find_attribute(slot.name)) out.push_back(node.type + " has undeclared attribute '" + slot.name + "'");
  }
  for (const auto& spec : type->attributes) {
    const auto* slot = node.attribute(spec.name);
    if (!slot) {
      out.push_back(node.type + " lacks attribute '" + spec.name + "'");
      continue;
    }
    if (!count_ok(slot->values.size(), spec.cardinality, spec.atLeastOne)) {
      out.push_back(node.type + "." + spec.name + " has " + std::to_string(slot->values.size()) +
                    " values, cardinality " + std::string(to_string(spec.cardinality)));
    }
    for (const auto& v : slot->values) {
      if (!value_has_type(v, spec.valueType)) out.push_back(node.type + "." + spec.name + " holds a value of the wrong type");
    }
  }

  for (const auto& slot : node.children) {
    if (!type->find_composition(slot.name)) out.push_back(node.type + " has undeclared child '" + slot.name + "'");
  }
  for (const auto& spec : type->compositions) {
    const auto* slot = node.child(spec.name);
    if (!slot) {
      out.push_back(node.type + " lacks child '" + spec.name + "'");
      continue;
    }
    if (!count_ok(slot->nodes.size(), spec.cardinality, spec.atLeastOne)) {
      out.push_back(node.type + "." + spec.name + " has " + std::to_string(slot->nodes.size()) +
                    " children, cardinality " + std::string(to_string(spec.cardinality)));
    }
    for (const auto& child : slot->nodes) {
      if (!fits_target(schema, child, spec.target)) {
        out.push_back(node.type + "." + spec.name + " holds a " + child.type + ", expected " + spec.target);
      }
      if (child.span.start < node.span.start || child.span.end > node.span.end) {
        out.push_back("span of " + child.type + " is not nested in its parent " + node.type);
      }
      check(child, schema, out);
    }
  }
}

}  // namespace

std::vector<std::string> validate_ast(const AstNode& node, const Schema& schema) {
  std::vector<std::string> out;
  check(node, schema, out);
  return out;
}

}  // namespace grammarforge
