#include "grammarforge/schema.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>

namespace grammarforge {

std::string_view to_string(Cardinality c) noexcept {
  switch (c) {
    case Cardinality::One: return "One";
    case Cardinality::Optional: return "Optional";
    case Cardinality::List: return "List";
  }
  return "One";
}

std::string_view to_string(TypeKind k) noexcept {
  switch (k) {
    case TypeKind::Concrete: return "Concrete";
    case TypeKind::Interface: return "Interface";
    case TypeKind::ExternalSlot: return "ExternalSlot";
  }
  return "Concrete";
}

const AttributeSpec* NodeType::find_attribute(std::string_view n) const {
  for (const auto& a : attributes) {
    if (a.name == n) return &a;
  }
  return nullptr;
}

const CompositionSpec* NodeType::find_composition(std::string_view n) const {
  for (const auto& c : compositions) {
    if (c.name == n) return &c;
  }
  return nullptr;
}

const NodeType* Schema::find(std::string_view qname) const {
  auto it = types.find(qname);
  return it == types.end() ? nullptr : &it->second;
}

bool Schema::is_subtype(std::string_view type, std::string_view ancestor) const {
  if (type == ancestor) return true;
  std::deque<std::string> todo{std::string(type)};
  std::set<std::string, std::less<>> seen;
  while (!todo.empty()) {
    auto current = std::move(todo.front());
    todo.pop_front();
    if (!seen.insert(current).second) continue;
    if (current == ancestor) return true;
    if (const auto* t = find(current)) {
      for (const auto& s : t->supertypes) todo.push_back(s);
      for (const auto& i : t->interfaces) todo.push_back(i);
    }
  }
  return false;
}

std::vector<AttributeSpec> Schema::all_attributes(std::string_view type) const {
  std::vector<AttributeSpec> out;
  std::set<std::string, std::less<>> seenTypes;
  std::function<void(std::string_view)> collect = [&](std::string_view name) {
    if (!seenTypes.insert(std::string(name)).second) return;
    const auto* t = find(name);
    if (!t) return;
    for (const auto& a : t->attributes) {
      bool known = std::any_of(out.begin(), out.end(), [&](const AttributeSpec& x) { return x.name == a.name; });
      if (!known) out.push_back(a);
    }
    for (const auto& s : t->supertypes) collect(s);
  };
  collect(type);
  return out;
}

// ---------------------------------------------------------------------------
// Cardinalities

namespace {

OccurrenceBounds seq_bounds(const Sequence& seq, std::string_view name);

OccurrenceBounds block_bounds(const Block& block, std::string_view name) {
  OccurrenceBounds b{2, 0};
  for (const auto& alt : block.alternatives) {
    auto a = seq_bounds(alt, name);
    b.min = std::min(b.min, a.min);
    b.max = std::max(b.max, a.max);
  }
  switch (block.repetition) {
    case Repetition::One: break;
    case Repetition::Optional: b.min = 0; break;
    case Repetition::Star:
      b.min = 0;
      b.max = b.max > 0 ? 2 : 0;
      break;
    case Repetition::Plus: b.max = b.max > 0 ? 2 : 0; break;
  }
  return b;
}

OccurrenceBounds seq_bounds(const Sequence& seq, std::string_view name) {
  OccurrenceBounds b;
  for (const auto& node : seq) {
    OccurrenceBounds n;
    if (const auto* lex = std::get_if<LexerRef>(&node.value)) {
      if (slot_name(*lex) == name) n = {1, 1};
    } else if (const auto* ref = std::get_if<NonterminalRef>(&node.value)) {
      if (slot_name(*ref) == name) n = {1, 1};
    } else if (const auto* block = std::get_if<Block>(&node.value)) {
      n = block_bounds(*block, name);
    }
    b.min = std::min(2, b.min + n.min);
    b.max = std::min(2, b.max + n.max);
  }
  return b;
}

Cardinality cardinality_of(OccurrenceBounds b) {
  if (b.max >= 2) return Cardinality::List;
  if (b.min == 0) return Cardinality::Optional;
  return Cardinality::One;
}

}  // namespace

OccurrenceBounds occurrence_bounds(const Block& rhs, std::string_view referenceName) {
  return block_bounds(rhs, referenceName);
}

Cardinality infer_cardinality(const ProductionDef& production, std::string_view referenceName) {
  return cardinality_of(occurrence_bounds(production.rhs, referenceName));
}

// ---------------------------------------------------------------------------
// Derivation

namespace {

SourcePos pos_of(SourceLoc loc) { return SourcePos{0, loc.line, loc.column}; }

std::string where(const GrammarDef& g) { return g.sourcePath.empty() ? g.qualified_name() : g.sourcePath; }

class TypeBuilder {
 public:
  TypeBuilder(const GrammarDef& grammar, const GrammarSet& set) : g_(grammar), set_(set) {}

  void add_own_types(Schema& schema) {
    const auto pkg = g_.qualified_name();
    for (const auto& p : g_.productions) {
      auto t = production_type(p);
      schema.types[t.qualified_name()] = std::move(t);
    }
    for (const auto& iface : g_.interfaces) {
      NodeType t;
      t.name = iface.name;
      t.package = pkg;
      t.kind = TypeKind::Interface;
      for (const auto& req : iface.requiredAttributes) {
        t.attributes.push_back({req.name, req.valueType, Cardinality::One, false});
      }
      schema.types[t.qualified_name()] = std::move(t);
    }
    for (const auto& ext : g_.externals) {
      NodeType t;
      t.name = ext.name;
      t.package = pkg;
      t.kind = TypeKind::ExternalSlot;
      if (ext.requiredInterface) t.interfaces.push_back(*ext.requiredInterface);
      schema.types[t.qualified_name()] = std::move(t);
    }
  }

 private:
  NodeType production_type(const ProductionDef& p) {
    NodeType t;
    t.name = p.name;
    t.package = g_.qualified_name();
    t.kind = TypeKind::Concrete;
    t.definingProduction = ProductionRef{t.package, p.name};

    for_each_node(p.rhs, [&](const RhsNode& node) {
      if (const auto* lex = std::get_if<LexerRef>(&node.value)) {
        add_attribute(t, p, node, slot_name(*lex), token_type(lex->rule));
      } else if (const auto* ref = std::get_if<NonterminalRef>(&node.value)) {
        add_composition(t, p, node, slot_name(*ref), target_of(*ref, node));
      }
    });

    for (const auto& super : g_.extendsList) {
      const auto& sg = set_.at(super);
      auto sym = set_.resolve(sg, p.name);
      if (sym.kind != SymbolKind::Production) continue;
      auto name = sym.qualified_name(p.name);
      if (std::find(t.supertypes.begin(), t.supertypes.end(), name) == t.supertypes.end()) {
        t.supertypes.push_back(std::move(name));
      }
    }
    for (const auto& iface : p.implementsList) {
      auto sym = set_.resolve(g_, iface);
      if (sym.kind != SymbolKind::Interface) {
        throw Error(ErrorCode::UnresolvedType, where(g_) + ": unknown interface '" + iface + "'", pos_of(p.loc));
      }
      t.interfaces.push_back(sym.qualified_name(iface));
    }
    return t;
  }

  ValueType token_type(const std::string& rule) {
    auto sym = set_.resolve(g_, rule);
    if (sym.kind != SymbolKind::LexerRule) {
      throw Error(ErrorCode::UnresolvedType, where(g_) + ": unknown lexer rule '" + rule + "'");
    }
    return sym.lexerRule ? sym.lexerRule->mappedValueType : ValueType::Text;
  }

  std::string target_of(const NonterminalRef& ref, const RhsNode& node) {
    auto sym = set_.resolve(g_, ref.rule);
    switch (sym.kind) {
      case SymbolKind::Production:
      case SymbolKind::Interface: return sym.qualified_name(ref.rule);
      case SymbolKind::External:
        return sym.external->requiredInterface ? *sym.external->requiredInterface : std::string(kAnyNode);
      default:
        throw Error(ErrorCode::UnresolvedType, where(g_) + ": '" + ref.rule + "' does not name a type",
                    pos_of(node.loc));
    }
  }

  void add_attribute(NodeType& t, const ProductionDef& p, const RhsNode& node, const std::string& name,
                     ValueType type) {
    if (t.find_composition(name)) clash(p, node, name);
    if (const auto* existing = t.find_attribute(name)) {
      if (existing->valueType != type) {
        throw Error(ErrorCode::NameClash,
                    where(g_) + ": attribute '" + name + "' of '" + p.name + "' is bound to both Text and Int tokens",
                    pos_of(node.loc));
      }
      return;
    }
    auto bounds = occurrence_bounds(p.rhs, name);
    t.attributes.push_back({name, type, cardinality_of(bounds), bounds.max >= 2 && bounds.min >= 1});
  }

  void add_composition(NodeType& t, const ProductionDef& p, const RhsNode& node, const std::string& name,
                       std::string target) {
    if (t.find_attribute(name)) clash(p, node, name);
    for (auto& c : t.compositions) {
      if (c.name != name) continue;
      if (c.target != target) c.target = std::string(kAnyNode);
      return;
    }
    auto bounds = occurrence_bounds(p.rhs, name);
    t.compositions.push_back({name, std::move(target), cardinality_of(bounds), bounds.max >= 2 && bounds.min >= 1});
  }

  [[noreturn]] void clash(const ProductionDef& p, const RhsNode& node, const std::string& name) {
    throw Error(ErrorCode::NameClash,
                where(g_) + ": '" + name + "' of '" + p.name + "' names both an attribute and a composition",
                pos_of(node.loc));
  }

  const GrammarDef& g_;
  const GrammarSet& set_;
};

std::pair<std::string, std::string> split_qname(const std::string& qname) {
  auto dot = qname.rfind('.');
  if (dot == std::string::npos) return {"", qname};
  return {qname.substr(0, dot), qname.substr(dot + 1)};
}

}  // namespace

Schema derive_schema(const GrammarDef& grammar, const GrammarSet& grammarSet) {
  Schema schema;
  schema.rootGrammar = grammar.qualified_name();
  const auto hierarchy = grammarSet.linearize(grammar);
  for (const auto* g : hierarchy) TypeBuilder(*g, grammarSet).add_own_types(schema);

  // Drop types that lost a collision between supergrammars: no reference in
  // this grammar reaches them. Overridden types stay as supertypes.
  std::set<std::string> keep;
  std::vector<std::string> work;
  for (const auto& [qname, type] : schema.types) {
    auto sym = grammarSet.resolve(grammar, type.name);
    if (sym && sym.owner && sym.owner->qualified_name() == type.package) work.push_back(qname);
  }
  while (!work.empty()) {
    auto qname = std::move(work.back());
    work.pop_back();
    if (!keep.insert(qname).second) continue;
    const auto* t = schema.find(qname);
    if (!t) continue;
    for (const auto& s : t->supertypes) work.push_back(s);
    for (const auto& i : t->interfaces) work.push_back(i);
    for (const auto& c : t->compositions) work.push_back(c.target);
  }
  std::erase_if(schema.types, [&](const auto& entry) { return !keep.count(entry.first); });

  // Handwritten interfaces live outside any grammar: keep a placeholder so
  // that slot compositions resolve. Their attributes come from composition.
  for (const auto* g : hierarchy) {
    for (const auto& ext : g->externals) {
      if (!ext.requiredInterface || schema.find(*ext.requiredInterface)) continue;
      NodeType t;
      std::tie(t.package, t.name) = split_qname(*ext.requiredInterface);
      t.kind = TypeKind::Interface;
      schema.types[*ext.requiredInterface] = std::move(t);
    }
  }

  for (const auto& [qname, type] : schema.types) {
    for (const auto& c : type.compositions) {
      if (c.target != kAnyNode && !schema.find(c.target)) {
        throw Error(ErrorCode::UnresolvedType, "composition '" + c.name + "' of '" + qname +
                                                   "' targets unknown type '" + c.target + "'");
      }
    }
    for (const auto& s : type.supertypes) {
      if (!schema.find(s)) throw Error(ErrorCode::UnresolvedType, "unknown supertype '" + s + "' of '" + qname + "'");
    }
    if (type.kind != TypeKind::Concrete) continue;

    for (const auto& s : type.supertypes) {
      for (const auto& inherited : schema.all_attributes(s)) {
        const auto* own = type.find_attribute(inherited.name);
        if (own && own->valueType != inherited.valueType) {
          throw Error(ErrorCode::AttributeTypeChange, "'" + qname + "' changes the type of inherited attribute '" +
                                                          inherited.name + "' from " +
                                                          std::string(to_string(inherited.valueType)) + " to " +
                                                          std::string(to_string(own->valueType)));
        }
      }
    }

    const auto attrs = schema.all_attributes(qname);
    for (const auto& [ifaceName, iface] : schema.types) {
      if (iface.kind != TypeKind::Interface || !schema.is_subtype(qname, ifaceName)) continue;
      for (const auto& req : iface.attributes) {
        auto it = std::find_if(attrs.begin(), attrs.end(), [&](const AttributeSpec& a) { return a.name == req.name; });
        if (it == attrs.end() || it->valueType != req.valueType) {
          throw Error(ErrorCode::MissingInterfaceAttribute,
                      "'" + qname + "' implements '" + ifaceName + "' but lacks attribute " + req.name + ":" +
                          std::string(to_string(req.valueType)));
        }
      }
    }
  }
  return schema;
}

}  // namespace grammarforge
