#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "grammarforge/error.hpp"
#include "grammarforge/grammar.hpp"

namespace grammarforge {

enum class SymbolKind { None, Production, LexerRule, External, Interface };

/// Result of looking a name up in a grammar and its supergrammars.
/// `owner` is null for the predefined IDENT and STRING rules.
struct Symbol {
  SymbolKind kind = SymbolKind::None;
  const GrammarDef* owner = nullptr;
  const ProductionDef* production = nullptr;
  const LexerRuleDef* lexerRule = nullptr;
  const ExternalDecl* external = nullptr;
  const InterfaceDecl* iface = nullptr;

  explicit operator bool() const noexcept { return kind != SymbolKind::None; }
  /// `grammar.Name` of the declaring grammar.
  std::string qualified_name(std::string_view name) const;
};

struct ResolvedProduction {
  const GrammarDef* owner = nullptr;
  const ProductionDef* production = nullptr;

  std::string type_name() const { return owner->qualified_name() + "." + production->name; }
};

/// An immutable, closed set of grammars: every supergrammar resolves and the
/// extends graph is acyclic.
class GrammarSet {
 public:
  using GrammarPtr = std::shared_ptr<const GrammarDef>;

  GrammarSet() = default;

  /// Checks closure and acyclicity, classifies references to inherited lexer
  /// rules, then freezes the grammars.
  /// Throws Error{DuplicateName | UnresolvedSupergrammar | CyclicInheritance}.
  static GrammarSet build(std::vector<GrammarDef> grammars);

  const GrammarDef* find(std::string_view qname) const;
  const GrammarDef& at(std::string_view qname) const;
  GrammarPtr share(std::string_view qname) const;
  const std::map<std::string, GrammarPtr, std::less<>>& grammars() const { return grammars_; }
  std::size_t size() const { return grammars_.size(); }

  /// The grammar followed by its supergrammars, depth-first in extends order,
  /// each grammar listed once. This is the name lookup order.
  std::vector<const GrammarDef*> linearize(const GrammarDef& grammar) const;

  Symbol resolve(const GrammarDef& language, std::string_view name) const;

  /// Productions visible in `language` with overrides and collisions applied,
  /// ordered supergrammars first (extends order), then own declarations.
  std::vector<ResolvedProduction> effective_productions(const GrammarDef& language) const;

  /// Keyword terminals of the grammar and all supergrammars.
  std::vector<std::string> keywords(const GrammarDef& language) const;

  bool operator==(const GrammarSet& other) const;

 private:
  std::map<std::string, GrammarPtr, std::less<>> grammars_;
};

/// Parses every file in `rootPaths`; missing supergrammars are looked up in
/// `searchDirs`, first by package path (`a/b/Name.mc`), then by scanning for
/// `*.mc` files.
GrammarSet load_grammar_set(std::span<const std::filesystem::path> rootPaths,
                            std::span<const std::filesystem::path> searchDirs = {});

/// Looks every grammar up in `searchDirs` by qualified name, plus their
/// supergrammars. Throws Error{IoError} for names that cannot be found.
GrammarSet load_grammars_by_name(std::span<const std::string> qualifiedNames,
                                 std::span<const std::filesystem::path> searchDirs);

/// Grammar-set-aware checks that do not abort on the first problem.
std::vector<Diagnostic> validate_grammar(const GrammarDef& grammar, const GrammarSet& grammarSet);

std::string read_file(const std::filesystem::path& path);

}  // namespace grammarforge
