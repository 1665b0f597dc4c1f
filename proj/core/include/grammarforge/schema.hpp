#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "grammarforge/grammar.hpp"
#include "grammarforge/grammar_set.hpp"

namespace grammarforge {

/// Three-valued cardinality lattice: One < Optional < List.
enum class Cardinality { One, Optional, List };
enum class TypeKind { Concrete, Interface, ExternalSlot };

std::string_view to_string(Cardinality c) noexcept;
std::string_view to_string(TypeKind k) noexcept;

/// Target of compositions into external slots without a declared interface.
inline constexpr std::string_view kAnyNode = "AnyNode";

struct AttributeSpec {
  std::string name;
  ValueType valueType = ValueType::Text;
  Cardinality cardinality = Cardinality::One;
  bool atLeastOne = false;  // List that came from a Plus (every derivation has one)

  bool operator==(const AttributeSpec&) const = default;
};

struct CompositionSpec {
  std::string name;
  std::string target;  // qualified type name or AnyNode
  Cardinality cardinality = Cardinality::One;
  bool atLeastOne = false;

  bool operator==(const CompositionSpec&) const = default;
};

struct ProductionRef {
  std::string grammar;
  std::string production;

  bool operator==(const ProductionRef&) const = default;
};

struct NodeType {
  std::string name;
  std::string package;  // qualified name of the declaring grammar
  TypeKind kind = TypeKind::Concrete;
  std::vector<AttributeSpec> attributes;
  std::vector<CompositionSpec> compositions;
  std::vector<std::string> supertypes;
  std::vector<std::string> interfaces;
  std::optional<ProductionRef> definingProduction;

  bool operator==(const NodeType&) const = default;

  std::string qualified_name() const { return package.empty() ? name : package + "." + name; }
  const AttributeSpec* find_attribute(std::string_view n) const;
  const CompositionSpec* find_composition(std::string_view n) const;
};

struct Schema {
  std::map<std::string, NodeType, std::less<>> types;
  std::string rootGrammar;

  bool operator==(const Schema&) const = default;

  const NodeType* find(std::string_view qname) const;
  /// Reflexive, transitive over supertypes and declared interfaces.
  bool is_subtype(std::string_view type, std::string_view ancestor) const;
  /// Attributes of the type followed by those of its supertypes (first wins).
  std::vector<AttributeSpec> all_attributes(std::string_view type) const;
};

/// Occurrence count range of one reference name over all derivations of a
/// right-hand side. `max` saturates at 2 ("many").
struct OccurrenceBounds {
  int min = 0;
  int max = 0;
  bool operator==(const OccurrenceBounds&) const = default;
};

OccurrenceBounds occurrence_bounds(const Block& rhs, std::string_view referenceName);
Cardinality infer_cardinality(const ProductionDef& production, std::string_view referenceName);

/// Throws Error{MissingInterfaceAttribute | UnresolvedType | AttributeTypeChange | NameClash}.
Schema derive_schema(const GrammarDef& grammar, const GrammarSet& grammarSet);

/// Deterministic: keys sorted, arrays in declaration order.
std::string schema_to_json(const Schema& schema, int indent = 2);
Schema schema_from_json(std::string_view json);

}  // namespace grammarforge
