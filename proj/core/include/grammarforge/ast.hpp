#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "grammarforge/lexer.hpp"
#include "grammarforge/schema.hpp"

namespace grammarforge {

struct Span {
  std::size_t start = 0;
  std::size_t end = 0;
  bool operator==(const Span&) const = default;
};

struct AttributeSlot {
  std::string name;
  Cardinality cardinality = Cardinality::One;
  std::vector<Value> values;

  bool operator==(const AttributeSlot&) const = default;
};

struct AstNode;

struct ChildSlot {
  std::string name;
  Cardinality cardinality = Cardinality::One;
  std::vector<AstNode> nodes;

  bool operator==(const ChildSlot&) const;
};

/// A node typed by a schema NodeType. Slots appear in declaration order.
struct AstNode {
  std::string type;
  std::vector<AttributeSlot> attributes;
  std::vector<ChildSlot> children;
  Span span;

  bool operator==(const AstNode&) const = default;

  const AttributeSlot* attribute(std::string_view name) const;
  const ChildSlot* child(std::string_view name) const;
  AttributeSlot* attribute(std::string_view name);
  ChildSlot* child(std::string_view name);

  /// Single value of a One/Optional attribute, or null.
  const Value* value(std::string_view name) const;
  /// Every node of the subtree, preorder.
  std::size_t subtree_size() const;
};

/// Empty node with one slot per attribute and composition of `type`.
AstNode make_node(const NodeType& type);

/// Canonical JSON: sorted keys, One as a value, Optional as value or null,
/// List as an array. `indent < 0` yields compact output.
std::string ast_to_json(const AstNode& node, int indent = 2);

/// With a schema, slot cardinalities and declaration order come from the
/// node types; without one they are guessed from the JSON shape.
/// Throws Error{InvalidAst}.
AstNode ast_from_json(std::string_view json, const Schema* schema = nullptr);

/// Equality ignoring spans.
bool structurally_equal(const AstNode& a, const AstNode& b);

/// Conformance problems of a node tree against a schema; empty when valid.
std::vector<std::string> validate_ast(const AstNode& node, const Schema& schema);

}  // namespace grammarforge
