#include "grammarforge/grammar_set.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace grammarforge {

std::string Symbol::qualified_name(std::string_view name) const {
  return owner ? owner->qualified_name() + "." + std::string(name) : std::string(name);
}

namespace {

using Lookup = std::function<const GrammarDef*(std::string_view)>;

std::vector<const GrammarDef*> linearize_with(const GrammarDef& root, const Lookup& lookup) {
  std::vector<const GrammarDef*> order;
  std::set<const GrammarDef*> seen;
  std::function<void(const GrammarDef&)> visit = [&](const GrammarDef& g) {
    if (!seen.insert(&g).second) return;
    order.push_back(&g);
    for (const auto& super : g.extendsList) {
      if (const auto* s = lookup(super)) visit(*s);
    }
  };
  visit(root);
  return order;
}

Symbol resolve_with(const GrammarDef& language, std::string_view name, const Lookup& lookup) {
  Symbol sym;
  for (const auto* g : linearize_with(language, lookup)) {
    sym.owner = g;
    if ((sym.production = g->find_production(name))) {
      sym.kind = SymbolKind::Production;
      return sym;
    }
    if ((sym.iface = g->find_interface(name))) {
      sym.kind = SymbolKind::Interface;
      return sym;
    }
    if ((sym.external = g->find_external(name))) {
      sym.kind = SymbolKind::External;
      return sym;
    }
    if ((sym.lexerRule = g->find_lexer_rule(name))) {
      sym.kind = SymbolKind::LexerRule;
      return sym;
    }
  }
  sym = Symbol{};
  if (is_builtin_rule(name)) sym.kind = SymbolKind::LexerRule;
  return sym;
}

void classify_inherited(Sequence& seq, const GrammarDef& language, const Lookup& lookup) {
  for (auto& node : seq) {
    if (auto* block = std::get_if<Block>(&node.value)) {
      for (auto& alt : block->alternatives) classify_inherited(alt, language, lookup);
      continue;
    }
    auto* ref = std::get_if<NonterminalRef>(&node.value);
    if (!ref || ref->selector) continue;
    if (resolve_with(language, ref->rule, lookup).kind == SymbolKind::LexerRule) {
      node.value = LexerRef{ref->rule, ref->label};
    }
  }
}

}  // namespace

GrammarSet GrammarSet::build(std::vector<GrammarDef> grammars) {
  std::map<std::string, GrammarDef, std::less<>> byName;
  for (auto& g : grammars) {
    auto qname = g.qualified_name();
    if (byName.count(qname)) {
      throw Error(ErrorCode::DuplicateName, "grammar '" + qname + "' is defined more than once");
    }
    byName.emplace(std::move(qname), std::move(g));
  }
  Lookup lookup = [&](std::string_view qname) -> const GrammarDef* {
    auto it = byName.find(qname);
    return it == byName.end() ? nullptr : &it->second;
  };

  for (const auto& [qname, g] : byName) {
    for (const auto& super : g.extendsList) {
      if (!lookup(super)) {
        throw Error(ErrorCode::UnresolvedSupergrammar,
                    "grammar '" + qname + "' extends unknown grammar '" + super + "'");
      }
    }
  }

  // Extends graph must be acyclic.
  enum class Mark { White, Grey, Black };
  std::map<std::string, Mark, std::less<>> marks;
  std::vector<std::string> stack;
  std::function<void(const std::string&)> dfs = [&](const std::string& qname) {
    auto& m = marks[qname];
    if (m == Mark::Black) return;
    if (m == Mark::Grey) {
      auto cycleStart = std::find(stack.begin(), stack.end(), qname);
      std::string cycle;
      for (auto it = cycleStart; it != stack.end(); ++it) cycle += *it + " -> ";
      throw Error(ErrorCode::CyclicInheritance, "cyclic grammar inheritance: " + cycle + qname);
    }
    m = Mark::Grey;
    stack.push_back(qname);
    for (const auto& super : byName.at(qname).extendsList) dfs(super);
    stack.pop_back();
    marks[qname] = Mark::Black;
  };
  for (const auto& entry : byName) dfs(entry.first);

  for (auto& [qname, g] : byName) {
    for (auto& p : g.productions) {
      for (auto& alt : p.rhs.alternatives) classify_inherited(alt, g, lookup);
    }
  }

  GrammarSet set;
  for (auto& [qname, g] : byName) {
    set.grammars_.emplace(qname, std::make_shared<const GrammarDef>(std::move(g)));
  }
  return set;
}

const GrammarDef* GrammarSet::find(std::string_view qname) const {
  auto it = grammars_.find(qname);
  return it == grammars_.end() ? nullptr : it->second.get();
}

const GrammarDef& GrammarSet::at(std::string_view qname) const {
  if (const auto* g = find(qname)) return *g;
  throw Error(ErrorCode::UnresolvedSupergrammar, "unknown grammar '" + std::string(qname) + "'");
}

GrammarSet::GrammarPtr GrammarSet::share(std::string_view qname) const {
  auto it = grammars_.find(qname);
  return it == grammars_.end() ? nullptr : it->second;
}

std::vector<const GrammarDef*> GrammarSet::linearize(const GrammarDef& grammar) const {
  return linearize_with(grammar, [this](std::string_view q) { return find(q); });
}

Symbol GrammarSet::resolve(const GrammarDef& language, std::string_view name) const {
  return resolve_with(language, name, [this](std::string_view q) { return find(q); });
}

std::vector<ResolvedProduction> GrammarSet::effective_productions(const GrammarDef& language) const {
  std::vector<std::string> names;
  std::set<std::string, std::less<>> seenNames;
  std::set<const GrammarDef*> seen;
  std::function<void(const GrammarDef&)> visit = [&](const GrammarDef& g) {
    if (!seen.insert(&g).second) return;
    for (const auto& super : g.extendsList) {
      if (const auto* s = find(super)) visit(*s);
    }
    for (const auto& p : g.productions) {
      if (seenNames.insert(p.name).second) names.push_back(p.name);
    }
  };
  visit(language);

  std::vector<ResolvedProduction> out;
  for (const auto& n : names) {
    auto sym = resolve(language, n);
    if (sym.kind == SymbolKind::Production) out.push_back({sym.owner, sym.production});
  }
  return out;
}

std::vector<std::string> GrammarSet::keywords(const GrammarDef& language) const {
  std::set<std::string> kws;
  for (const auto* g : linearize(language)) {
    for (const auto& p : g->productions) {
      for_each_node(p.rhs, [&](const RhsNode& node) {
        if (const auto* k = std::get_if<Keyword>(&node.value)) kws.insert(k->text);
      });
    }
  }
  return {kws.begin(), kws.end()};
}

bool GrammarSet::operator==(const GrammarSet& other) const {
  if (grammars_.size() != other.grammars_.size()) return false;
  return std::equal(grammars_.begin(), grammars_.end(), other.grammars_.begin(),
                    [](const auto& a, const auto& b) { return a.first == b.first && *a.second == *b.second; });
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

std::optional<GrammarDef> search_grammar(std::string_view qname, std::span<const std::filesystem::path> dirs) {
  namespace fs = std::filesystem;
  fs::path relative;
  std::size_t start = 0;
  for (;;) {
    auto dot = qname.find('.', start);
    if (dot == std::string_view::npos) {
      relative /= std::string(qname.substr(start)) + ".mc";
      break;
    }
    relative /= std::string(qname.substr(start, dot - start));
    start = dot + 1;
  }
  for (const auto& dir : dirs) {
    auto candidate = dir / relative;
    if (fs::is_regular_file(candidate)) {
      auto g = parse_grammar(read_file(candidate), candidate.string());
      if (g.qualified_name() == qname) return g;
    }
  }
  // File location need not mirror the package: scan.
  for (const auto& dir : dirs) {
    if (!fs::is_directory(dir)) continue;
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".mc") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
      try {
        auto g = parse_grammar(read_file(file), file.string());
        if (g.qualified_name() == qname) return g;
      } catch (const Error&) {
        // unrelated broken files do not block resolution
      }
    }
  }
  return std::nullopt;
}

}  // namespace

namespace {

GrammarSet close_over_supergrammars(std::vector<GrammarDef> grammars, std::set<std::string, std::less<>> loaded,
                                    std::span<const std::filesystem::path> searchDirs) {
  for (std::size_t i = 0; i < grammars.size(); ++i) {
    const auto supers = grammars[i].extendsList;
    for (const auto& super : supers) {
      if (loaded.count(super)) continue;
      if (auto found = search_grammar(super, searchDirs)) {
        loaded.insert(super);
        grammars.push_back(std::move(*found));
      }
    }
  }
  return GrammarSet::build(std::move(grammars));
}

}  // namespace

GrammarSet load_grammar_set(std::span<const std::filesystem::path> rootPaths,
                            std::span<const std::filesystem::path> searchDirs) {
  std::vector<GrammarDef> grammars;
  std::set<std::string, std::less<>> loaded;
  for (const auto& path : rootPaths) {
    auto g = parse_grammar(read_file(path), path.string());
    auto qname = g.qualified_name();
    if (!loaded.insert(qname).second) {
      throw Error(ErrorCode::DuplicateName, "grammar '" + qname + "' is defined more than once");
    }
    grammars.push_back(std::move(g));
  }
  return close_over_supergrammars(std::move(grammars), std::move(loaded), searchDirs);
}

GrammarSet load_grammars_by_name(std::span<const std::string> qualifiedNames,
                                 std::span<const std::filesystem::path> searchDirs) {
  std::vector<GrammarDef> grammars;
  std::set<std::string, std::less<>> loaded;
  for (const auto& qname : qualifiedNames) {
    if (loaded.count(qname)) continue;
    auto g = search_grammar(qname, searchDirs);
    if (!g) throw Error(ErrorCode::IoError, "grammar '" + qname + "' not found in the search path");
    loaded.insert(qname);
    grammars.push_back(std::move(*g));
  }
  return close_over_supergrammars(std::move(grammars), std::move(loaded), searchDirs);
}

}  // namespace grammarforge
