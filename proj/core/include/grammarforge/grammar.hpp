#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace grammarforge {

enum class ValueType { Text, Int };
enum class Repetition { One, Optional, Star, Plus };

std::string_view to_string(ValueType type) noexcept;
std::string_view to_string(Repetition rep) noexcept;

/// Maps an attribute type name (`Text`, `STRING`, `IDENT`, `Int`, `int`) to a value type.
std::optional<ValueType> value_type_from_name(std::string_view name) noexcept;

/// Where something was written. Locations are metadata: they never take part
/// in structural equality of the model.
struct SourceLoc {
  int line = 0;
  int column = 0;

  friend constexpr bool operator==(const SourceLoc&, const SourceLoc&) noexcept { return true; }
};

// ---------------------------------------------------------------------------
// Lexer rule patterns: 'c', 'a'..'z', grouping, |, ?, *, +

struct RegexNode {
  enum class Kind { Range, Sequence, Alternation, Optional, Star, Plus };

  Kind kind = Kind::Range;
  unsigned char lo = 0;
  unsigned char hi = 0;
  std::vector<RegexNode> children;

  static RegexNode range(unsigned char lo, unsigned char hi);
  static RegexNode literal(unsigned char c) { return range(c, c); }

  bool operator==(const RegexNode&) const = default;
};

/// True when the pattern denotes at least one non-empty string.
bool matches_nonempty(const RegexNode& pattern);

struct LexerRuleDef {
  std::string name;
  RegexNode pattern;
  ValueType mappedValueType = ValueType::Text;
  SourceLoc loc;

  bool operator==(const LexerRuleDef&) const = default;
};

// ---------------------------------------------------------------------------
// Right-hand sides

struct RhsNode;
using Sequence = std::vector<RhsNode>;

struct Keyword {
  std::string text;
  bool operator==(const Keyword&) const = default;
};

struct LexerRef {
  std::string rule;
  std::optional<std::string> label;
  bool operator==(const LexerRef&) const = default;
};

struct EmbedSelector {
  enum class Kind { GlobalVariable, LocalAttribute };
  Kind kind = Kind::LocalAttribute;
  std::string name;
  bool operator==(const EmbedSelector&) const = default;
};

struct NonterminalRef {
  std::string rule;
  std::optional<std::string> label;
  std::optional<EmbedSelector> selector;
  bool operator==(const NonterminalRef&) const = default;
};

struct Block {
  std::vector<Sequence> alternatives;
  Repetition repetition = Repetition::One;
  bool operator==(const Block&) const;
};

struct AstScriptAction {
  std::string targetVariable;
  std::string sourceAttribute;
  bool operator==(const AstScriptAction&) const = default;
};

struct Script {
  AstScriptAction action;
  bool operator==(const Script&) const = default;
};

struct RhsNode {
  std::variant<Keyword, LexerRef, NonterminalRef, Block, Script> value;
  SourceLoc loc;

  bool operator==(const RhsNode&) const = default;
};

/// Name of the attribute or composition a reference fills: its label, or the
/// referenced rule name with the first character lower-cased.
std::string slot_name(std::string_view rule, const std::optional<std::string>& label);
std::string slot_name(const LexerRef& ref);
std::string slot_name(const NonterminalRef& ref);

// ---------------------------------------------------------------------------
// Grammar-level declarations

struct ProductionDef {
  std::string name;
  Block rhs;  // top-level alternatives, repetition One
  std::vector<std::string> implementsList;
  SourceLoc loc;

  bool operator==(const ProductionDef&) const = default;

  /// astscript actions in left-to-right order.
  std::vector<AstScriptAction> scripts() const;
};

struct ExternalDecl {
  std::string name;
  std::optional<std::string> requiredInterface;
  bool handwritten = false;
  SourceLoc loc;

  bool operator==(const ExternalDecl&) const = default;
};

struct AttributeRequirement {
  std::string name;
  ValueType valueType = ValueType::Text;
  bool operator==(const AttributeRequirement&) const = default;
};

struct InterfaceDecl {
  std::string name;
  std::vector<AttributeRequirement> requiredAttributes;
  SourceLoc loc;

  bool operator==(const InterfaceDecl&) const = default;
};

struct GrammarDef {
  std::vector<std::string> packagePath;
  std::string name;
  std::vector<std::string> extendsList;
  std::vector<LexerRuleDef> lexerRules;
  std::vector<ProductionDef> productions;
  std::vector<ExternalDecl> externals;
  std::vector<InterfaceDecl> interfaces;
  std::string sourcePath;

  bool operator==(const GrammarDef&) const = default;

  std::string qualified_name() const;
  std::string package_name() const;

  const ProductionDef* find_production(std::string_view n) const;
  const LexerRuleDef* find_lexer_rule(std::string_view n) const;
  const ExternalDecl* find_external(std::string_view n) const;
  const InterfaceDecl* find_interface(std::string_view n) const;
};

/// Parses one grammar file. Throws Error{SyntaxError | DuplicateName}.
GrammarDef parse_grammar(std::string_view text, std::string sourcePath = {});

/// Debug serializer; its output parses back to an equal GrammarDef.
std::string render_grammar(const GrammarDef& grammar);
std::string render_regex(const RegexNode& pattern);
std::string render_sequence(const Sequence& seq);

/// Quotes a string the way grammar files and the STRING token expect it.
std::string quote(std::string_view text);

/// Visits every RhsNode of a sequence tree in left-to-right order.
template <typename F>
void for_each_node(const Sequence& seq, F&& fn) {
  for (const auto& node : seq) {
    fn(node);
    if (const auto* block = std::get_if<Block>(&node.value)) {
      for (const auto& alt : block->alternatives) for_each_node(alt, fn);
    }
  }
}

template <typename F>
void for_each_node(const Block& block, F&& fn) {
  for (const auto& alt : block.alternatives) for_each_node(alt, fn);
}

inline constexpr std::string_view kIdentRule = "IDENT";
inline constexpr std::string_view kStringRule = "STRING";

bool is_builtin_rule(std::string_view name) noexcept;

}  // namespace grammarforge
