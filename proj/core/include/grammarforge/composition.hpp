#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "grammarforge/analysis.hpp"
#include "grammarforge/grammar_set.hpp"
#include "grammarforge/lexer.hpp"
#include "grammarforge/schema.hpp"

namespace grammarforge {

/// `grammar.qname.Production`
struct QualifiedProduction {
  std::string grammar;
  std::string production;

  std::string str() const { return grammar + "." + production; }
  bool operator==(const QualifiedProduction&) const = default;
};

QualifiedProduction split_qualified_production(std::string_view qprod);

struct StartDecl {
  QualifiedProduction production;
  std::string alias;
  SourceLoc loc;
  bool operator==(const StartDecl&) const = default;
};

struct EmbeddingDecl {
  QualifiedProduction source;
  std::string alias;
  std::string targetAlias;
  std::string targetExternal;
  std::optional<std::string> key;
  SourceLoc loc;
  bool operator==(const EmbeddingDecl&) const = default;
};

struct HandwrittenInterfaceDef {
  std::string name;
  std::vector<AttributeRequirement> requiredAttributes;
  SourceLoc loc;
  bool operator==(const HandwrittenInterfaceDef&) const = default;
};

struct CompositionConfig {
  std::optional<StartDecl> start;
  std::vector<EmbeddingDecl> embeddings;
  std::vector<HandwrittenInterfaceDef> interfaces;
  std::string sourcePath;

  bool operator==(const CompositionConfig&) const = default;
  const HandwrittenInterfaceDef* find_interface(std::string_view name) const;
};

/// Throws Error{SyntaxError | DuplicateAlias}.
CompositionConfig parse_config(std::string_view text, std::string sourcePath = {});

/// One bound grammar instance, addressed by its alias.
struct FragmentInstance {
  std::string alias;
  std::shared_ptr<const GrammarDef> grammar;
  const ProductionDef* start = nullptr;
  std::string startType;
  bool embedded = false;
  std::shared_ptr<const LexerInstance> lexer;
  std::shared_ptr<const Schema> schema;
  std::shared_ptr<const GrammarAnalysis> analysis;
};

struct BindingKey {
  std::string alias;
  std::string external;
  std::optional<std::string> key;

  auto operator<=>(const BindingKey&) const = default;
  bool operator==(const BindingKey&) const = default;
};

/// Grammars, start production and embeddings bound into something the parse
/// engine can run. Immutable and shareable between parse sessions.
struct ComposedLanguage {
  std::shared_ptr<const GrammarSet> grammarSet;
  std::map<std::string, FragmentInstance, std::less<>> fragments;
  std::string startAlias;
  std::map<BindingKey, std::string> bindingTable;  // -> fragment alias
  Schema mergedSchema;
  std::vector<HandwrittenInterfaceDef> interfaces;
  std::vector<Diagnostic> warnings;

  const FragmentInstance& start() const { return fragments.at(startAlias); }
  const FragmentInstance* fragment(std::string_view alias) const;
  /// Fragment bound to `external` of `alias` under `key` (nullopt = default).
  const FragmentInstance* lookup(const std::string& alias, const std::string& external,
                                 const std::optional<std::string>& key) const;
};

/// Builds lexers, schemas and analyses once per grammar and hands out shared
/// instances, so languages bound from the same library reuse them.
/// Not thread-safe; the languages it produces are.
class LanguageLibrary {
 public:
  explicit LanguageLibrary(GrammarSet grammarSet);

  const GrammarSet& grammar_set() const { return *set_; }
  std::shared_ptr<const GrammarSet> shared_set() const { return set_; }

  std::shared_ptr<const LexerInstance> lexer(std::string_view grammar);
  std::shared_ptr<const Schema> schema(std::string_view grammar);
  std::shared_ptr<const GrammarAnalysis> analysis(std::string_view grammar, const std::string& start, bool embedded);

  /// Throws Error{UnresolvedBinding | InterfaceNotSatisfied | MissingStart | MixedBinding}.
  ComposedLanguage bind(const CompositionConfig& config);
  /// A language made of one grammar and a start production, no embeddings.
  ComposedLanguage single(std::string_view grammar, std::string_view production);

 private:
  std::shared_ptr<const GrammarSet> set_;
  std::map<std::string, std::shared_ptr<const LexerInstance>, std::less<>> lexers_;
  std::map<std::string, std::shared_ptr<const Schema>, std::less<>> schemas_;
  std::map<std::tuple<std::string, std::string, bool>, std::shared_ptr<const GrammarAnalysis>> analyses_;
};

ComposedLanguage bind(const CompositionConfig& config, const GrammarSet& grammarSet);

/// Does `type` provide every attribute (name and value type) of `required`?
bool satisfies_attributes(const Schema& schema, std::string_view type,
                          const std::vector<AttributeRequirement>& required, std::string* missing = nullptr);

}  // namespace grammarforge
