#include <functional>
#include <unordered_map>

#include "grammarforge/traversal.hpp"

namespace grammarforge {

namespace {

bool has_refs(const Block& b) {
  bool found = false;
  for_each_node(b, [&](const RhsNode& node) {
    if (std::holds_alternative<LexerRef>(node.value) || std::holds_alternative<NonterminalRef>(node.value)) found = true;
  });
  return found;
}

// Reconstructs text by searching for a derivation of the defining production
// that uses every value and child of the node exactly once, in order.
class Printer {
 public:
  Printer(const Schema& schema, const GrammarSet& set) : schema_(schema), set_(set) {}

  const std::string& print(const AstNode& node) {
    auto memo = memo_.find(&node);
    if (memo != memo_.end()) return memo->second;

    const auto* type = schema_.find(node.type);
    if (!type || !type->definingProduction) {
      throw Error(ErrorCode::UnprintableNode, "'" + node.type + "' has no defining production");
    }
    const auto* grammar = set_.find(type->definingProduction->grammar);
    const auto* production = grammar ? grammar->find_production(type->definingProduction->production) : nullptr;
    if (!production) throw Error(ErrorCode::UnprintableNode, "defining production of '" + node.type + "' is not loaded");

    State st{&node, grammar, std::vector<std::size_t>(node.attributes.size(), 0),
             std::vector<std::size_t>(node.children.size(), 0), {}, 0};
    bool ok = block(st, production->rhs, [&] { return complete(st); });
    if (!ok) {
      throw Error(ErrorCode::UnprintableNode,
                  "no alternative of " + production->name + " reproduces the slots of this " + node.type + " node");
    }
    std::string text;
    for (const auto& piece : st.out) {
      if (piece.empty()) continue;
      if (!text.empty()) text += ' ';
      text += piece;
    }
    return memo_.emplace(&node, std::move(text)).first->second;
  }

 private:
  using Cont = std::function<bool()>;

  struct State {
    const AstNode* node;
    const GrammarDef* grammar;
    std::vector<std::size_t> attrPos;
    std::vector<std::size_t> childPos;
    std::vector<std::string> out;
    std::size_t used;
  };

  static bool complete(const State& st) {
    for (std::size_t i = 0; i < st.attrPos.size(); ++i) {
      if (st.attrPos[i] != st.node->attributes[i].values.size()) return false;
    }
    for (std::size_t i = 0; i < st.childPos.size(); ++i) {
      if (st.childPos[i] != st.node->children[i].nodes.size()) return false;
    }
    return true;
  }

  bool alternatives(State& st, const Block& b, const Cont& k) {
    for (const auto& alt : b.alternatives) {
      if (seq(st, alt, 0, k)) return true;
    }
    return false;
  }

  bool repeat(State& st, const Block& b, const Cont& k) {
    const auto before = st.used;
    if (alternatives(st, b, [&] { return st.used > before && repeat(st, b, k); })) return true;
    return k();
  }

  bool block(State& st, const Block& b, const Cont& k) {
    const bool refs = has_refs(b);
    switch (b.repetition) {
      case Repetition::One: return alternatives(st, b, k);
      case Repetition::Optional:
        if (!refs) return k();
        return alternatives(st, b, k) || k();
      case Repetition::Star:
        if (!refs) return k();
        return repeat(st, b, k);
      case Repetition::Plus:
        if (!refs) return alternatives(st, b, k);
        return alternatives(st, b, [&] { return repeat(st, b, k); });
    }
    return false;
  }

  bool emit(State& st, std::string text, const Cont& k) {
    st.out.push_back(std::move(text));
    if (k()) return true;
    st.out.pop_back();
    return false;
  }

  std::string format_value(const State& st, const LexerRef& ref, const Value& v) {
    if (const auto* s = std::get_if<std::string>(&v)) {
      auto sym = set_.resolve(*st.grammar, ref.rule);
      if (sym.kind == SymbolKind::LexerRule && !sym.lexerRule && ref.rule == kStringRule) return quote(*s);
      return *s;
    }
    return std::to_string(std::get<std::int64_t>(v));
  }

  bool fits(const State& st, const NonterminalRef& ref, const AstNode& child) {
    auto sym = set_.resolve(*st.grammar, ref.rule);
    switch (sym.kind) {
      case SymbolKind::Production:
      case SymbolKind::Interface: return schema_.is_subtype(child.type, sym.qualified_name(ref.rule));
      case SymbolKind::External: return true;
      default: return false;
    }
  }

  bool seq(State& st, const Sequence& s, std::size_t i, const Cont& k) {
    if (i == s.size()) return k();
    const auto& node = s[i];
    const Cont next = [&, i] { return seq(st, s, i + 1, k); };

    if (const auto* kw = std::get_if<Keyword>(&node.value)) return emit(st, kw->text, next);
    if (const auto* lex = std::get_if<LexerRef>(&node.value)) {
      const auto name = slot_name(*lex);
      for (std::size_t a = 0; a < st.node->attributes.size(); ++a) {
        const auto& slot = st.node->attributes[a];
        if (slot.name != name) continue;
        if (st.attrPos[a] >= slot.values.size()) return false;
        const auto& v = slot.values[st.attrPos[a]];
        ++st.attrPos[a];
        ++st.used;
        bool ok = emit(st, format_value(st, *lex, v), next);
        --st.used;
        --st.attrPos[a];
        return ok;
      }
      return false;
    }
    if (const auto* ref = std::get_if<NonterminalRef>(&node.value)) {
      const auto name = slot_name(*ref);
      for (std::size_t c = 0; c < st.node->children.size(); ++c) {
        const auto& slot = st.node->children[c];
        if (slot.name != name) continue;
        if (st.childPos[c] >= slot.nodes.size()) return false;
        const auto& child = slot.nodes[st.childPos[c]];
        if (!fits(st, *ref, child)) return false;
        ++st.childPos[c];
        ++st.used;
        bool ok = emit(st, print(child), next);
        --st.used;
        --st.childPos[c];
        return ok;
      }
      return false;
    }
    if (const auto* b = std::get_if<Block>(&node.value)) return block(st, *b, next);
    return next();  // scripts print nothing
  }

  const Schema& schema_;
  const GrammarSet& set_;
  std::unordered_map<const AstNode*, std::string> memo_;
};

}  // namespace

std::string pretty_print(const AstNode& node, const Schema& schema, const GrammarSet& grammarSet) {
  Printer printer(schema, grammarSet);
  return printer.print(node);
}

std::string pretty_print(const AstNode& node, const ComposedLanguage& language) {
  return pretty_print(node, language.mergedSchema, *language.grammarSet);
}

}  // namespace grammarforge
