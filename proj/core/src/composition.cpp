#include "grammarforge/composition.hpp"

#include <algorithm>
#include <set>

#include "scanner.hpp"

namespace grammarforge {

QualifiedProduction split_qualified_production(std::string_view qprod) {
  auto dot = qprod.rfind('.');
  if (dot == std::string_view::npos || dot == 0 || dot + 1 == qprod.size()) {
    throw Error(ErrorCode::SyntaxError, "'" + std::string(qprod) + "' is not of the form grammar.Production");
  }
  return {std::string(qprod.substr(0, dot)), std::string(qprod.substr(dot + 1))};
}

const HandwrittenInterfaceDef* CompositionConfig::find_interface(std::string_view name) const {
  for (const auto& i : interfaces) {
    if (i.name == name) return &i;
  }
  return nullptr;
}

CompositionConfig parse_config(std::string_view text, std::string sourcePath) {
  using detail::Scanner;
  Scanner scan(text);
  CompositionConfig config;
  config.sourcePath = std::move(sourcePath);
  std::set<std::string> aliases;
  std::set<std::tuple<std::string, std::string, std::optional<std::string>>> targets;

  auto claim_alias = [&](const Scanner::Tok& tok, const std::string& alias) {
    if (!aliases.insert(alias).second) {
      throw Error(ErrorCode::DuplicateAlias, "alias '" + alias + "' is declared twice",
                  SourcePos{tok.offset, tok.loc.line, tok.loc.column});
    }
  };

  if (scan.peek().kind == Scanner::Kind::End) scan.fail("empty configuration");
  while (scan.peek().kind != Scanner::Kind::End) {
    const auto head = scan.peek();
    if (scan.accept_word("interface")) {
      HandwrittenInterfaceDef def;
      def.loc = head.loc;
      def.name = scan.expect_qname();
      if (config.find_interface(def.name)) scan.fail_at(head, "interface '" + def.name + "' is defined twice");
      if (scan.accept_punct("=")) {
        do {
          AttributeRequirement attr;
          attr.name = scan.expect_ident();
          scan.expect_punct(":");
          auto typeTok = scan.peek();
          auto vt = value_type_from_name(scan.expect_ident());
          if (!vt) scan.fail_at(typeTok, "unknown attribute type '" + typeTok.text + "'");
          attr.valueType = *vt;
          def.requiredAttributes.push_back(std::move(attr));
        } while (scan.accept_punct(","));
      }
      scan.expect_punct(";");
      config.interfaces.push_back(std::move(def));
      continue;
    }

    auto qprodTok = scan.peek();
    auto qprod = scan.expect_qname();
    if (qprod.find('.') == std::string::npos) scan.fail_at(qprodTok, "expected grammar.Production, found '" + qprod + "'");
    auto source = split_qualified_production(qprod);
    auto aliasTok = scan.peek();
    auto alias = scan.expect_ident();

    if (scan.accept_punct("<<")) {
      scan.expect_word("start");
      scan.expect_punct(">>");
      scan.expect_punct(";");
      if (config.start) scan.fail_at(head, "more than one start production");
      claim_alias(aliasTok, alias);
      config.start = StartDecl{std::move(source), std::move(alias), head.loc};
      continue;
    }

    scan.expect_word("in");
    EmbeddingDecl e;
    e.loc = head.loc;
    e.source = std::move(source);
    e.alias = std::move(alias);
    e.targetAlias = scan.expect_ident();
    scan.expect_punct(".");
    e.targetExternal = scan.expect_ident();
    if (scan.accept_word("when")) e.key = scan.expect_string();
    scan.expect_punct(";");
    claim_alias(aliasTok, e.alias);
    if (!targets.insert({e.targetAlias, e.targetExternal, e.key}).second) {
      throw Error(ErrorCode::DuplicateAlias,
                  e.targetAlias + "." + e.targetExternal + (e.key ? " when \"" + *e.key + "\"" : std::string()) +
                      " is bound twice",
                  SourcePos{head.offset, head.loc.line, head.loc.column});
    }
    config.embeddings.push_back(std::move(e));
  }
  return config;
}

// ---------------------------------------------------------------------------

const FragmentInstance* ComposedLanguage::fragment(std::string_view alias) const {
  auto it = fragments.find(alias);
  return it == fragments.end() ? nullptr : &it->second;
}

const FragmentInstance* ComposedLanguage::lookup(const std::string& alias, const std::string& external,
                                                 const std::optional<std::string>& key) const {
  auto it = bindingTable.find(BindingKey{alias, external, key});
  return it == bindingTable.end() ? nullptr : fragment(it->second);
}

bool satisfies_attributes(const Schema& schema, std::string_view type,
                          const std::vector<AttributeRequirement>& required, std::string* missing) {
  const auto attrs = schema.all_attributes(type);
  for (const auto& req : required) {
    bool ok = std::any_of(attrs.begin(), attrs.end(),
                          [&](const AttributeSpec& a) { return a.name == req.name && a.valueType == req.valueType; });
    if (!ok) {
      if (missing) *missing = req.name + ":" + std::string(to_string(req.valueType));
      return false;
    }
  }
  return true;
}

LanguageLibrary::LanguageLibrary(GrammarSet grammarSet)
    : set_(std::make_shared<const GrammarSet>(std::move(grammarSet))) {}

std::shared_ptr<const LexerInstance> LanguageLibrary::lexer(std::string_view grammar) {
  auto it = lexers_.find(grammar);
  if (it != lexers_.end()) return it->second;
  auto lx = std::make_shared<const LexerInstance>(build_lexer(set_->at(grammar), *set_));
  lexers_.emplace(std::string(grammar), lx);
  return lx;
}

std::shared_ptr<const Schema> LanguageLibrary::schema(std::string_view grammar) {
  auto it = schemas_.find(grammar);
  if (it != schemas_.end()) return it->second;
  auto s = std::make_shared<const Schema>(derive_schema(set_->at(grammar), *set_));
  schemas_.emplace(std::string(grammar), s);
  return s;
}

std::shared_ptr<const GrammarAnalysis> LanguageLibrary::analysis(std::string_view grammar, const std::string& start,
                                                                 bool embedded) {
  auto key = std::make_tuple(std::string(grammar), start, embedded);
  auto it = analyses_.find(key);
  if (it != analyses_.end()) return it->second;
  const auto& g = set_->at(grammar);
  auto sym = set_->resolve(g, start);
  auto a = std::make_shared<const GrammarAnalysis>(g, *set_, lexer(grammar), sym.production, embedded);
  analyses_.emplace(std::move(key), a);
  return a;
}

namespace {

SourcePos pos_of(SourceLoc loc) { return SourcePos{0, loc.line, loc.column}; }

// Externals reachable from the fragment's start, with whether any reference
// to them carries a selector.
std::map<std::string, bool> reachable_externals(const FragmentInstance& f) {
  std::map<std::string, bool> out;
  std::set<const ProductionDef*> seen;
  std::vector<const ProductionDef*> todo{f.start};
  while (!todo.empty()) {
    const auto* p = todo.back();
    todo.pop_back();
    if (!seen.insert(p).second) continue;
    for_each_node(p->rhs, [&](const RhsNode& node) {
      const auto* nt = std::get_if<NonterminalRef>(&node.value);
      if (!nt) return;
      const auto& r = f.analysis->ref(nt->rule);
      switch (r.kind) {
        case ResolvedRef::Kind::Production: todo.push_back(r.production); break;
        case ResolvedRef::Kind::Interface:
          for (const auto* impl : r.implementers) todo.push_back(impl);
          break;
        case ResolvedRef::Kind::External: out[nt->rule] = out[nt->rule] || nt->selector.has_value(); break;
        default: break;
      }
    });
  }
  return out;
}

// Whether any production of the fragment's language uses a selector on `external`.
bool uses_selector(const FragmentInstance& f, const std::string& external) {
  for (const auto* p : f.analysis->productions()) {
    bool found = false;
    for_each_node(p->rhs, [&](const RhsNode& node) {
      const auto* nt = std::get_if<NonterminalRef>(&node.value);
      if (nt && nt->rule == external && nt->selector) found = true;
    });
    if (found) return true;
  }
  return false;
}

}  // namespace

ComposedLanguage LanguageLibrary::bind(const CompositionConfig& config) {
  if (!config.start) throw Error(ErrorCode::MissingStart, "configuration declares no <<start>> production");

  ComposedLanguage lang;
  lang.grammarSet = set_;
  lang.interfaces = config.interfaces;
  lang.startAlias = config.start->alias;

  auto add_fragment = [&](const QualifiedProduction& qp, const std::string& alias, bool embedded, SourceLoc loc) {
    if (lang.fragments.count(alias)) {
      throw Error(ErrorCode::DuplicateAlias, "alias '" + alias + "' is declared twice", pos_of(loc));
    }
    auto grammar = set_->share(qp.grammar);
    if (!grammar) throw Error(ErrorCode::UnresolvedBinding, "unknown grammar '" + qp.grammar + "'", pos_of(loc));
    auto sym = set_->resolve(*grammar, qp.production);
    if (sym.kind != SymbolKind::Production) {
      throw Error(ErrorCode::UnresolvedBinding,
                  "grammar '" + qp.grammar + "' has no production '" + qp.production + "'", pos_of(loc));
    }
    FragmentInstance f;
    f.alias = alias;
    f.grammar = grammar;
    f.start = sym.production;
    f.startType = sym.qualified_name(qp.production);
    f.embedded = embedded;
    f.lexer = lexer(qp.grammar);
    f.schema = schema(qp.grammar);
    f.analysis = analysis(qp.grammar, qp.production, embedded);
    lang.fragments.emplace(alias, std::move(f));
  };

  add_fragment(config.start->production, config.start->alias, false, config.start->loc);
  for (const auto& e : config.embeddings) add_fragment(e.source, e.alias, true, e.loc);

  // alias -> external -> {has default, has keyed}
  std::map<std::pair<std::string, std::string>, std::pair<bool, bool>> kinds;
  for (const auto& e : config.embeddings) {
    const auto* target = lang.fragment(e.targetAlias);
    if (!target) {
      throw Error(ErrorCode::UnresolvedBinding, "binding targets unknown alias '" + e.targetAlias + "'", pos_of(e.loc));
    }
    auto sym = set_->resolve(*target->grammar, e.targetExternal);
    if (sym.kind != SymbolKind::External) {
      throw Error(ErrorCode::UnresolvedBinding,
                  "'" + e.targetExternal + "' is not an external nonterminal of " + target->grammar->qualified_name(),
                  pos_of(e.loc));
    }
    BindingKey key{e.targetAlias, e.targetExternal, e.key};
    if (lang.bindingTable.count(key)) {
      throw Error(ErrorCode::DuplicateAlias, e.targetAlias + "." + e.targetExternal + " is bound twice", pos_of(e.loc));
    }
    lang.bindingTable.emplace(std::move(key), e.alias);
    auto& k = kinds[{e.targetAlias, e.targetExternal}];
    (e.key ? k.second : k.first) = true;

    const auto& source = lang.fragments.at(e.alias);
    if (const auto& iface = sym.external->requiredInterface) {
      std::vector<AttributeRequirement> required;
      if (const auto* def = config.find_interface(*iface)) {
        required = def->requiredAttributes;
      } else {
        lang.warnings.push_back({Severity::Warning, config.sourcePath, e.loc.line, e.loc.column, "UndefinedInterface",
                                 "handwritten interface '" + *iface + "' has no definition; nothing to check"});
      }
      std::string missing;
      if (!satisfies_attributes(*source.schema, source.startType, required, &missing)) {
        throw Error(ErrorCode::InterfaceNotSatisfied,
                    source.startType + " cannot fill " + e.targetExternal + ": interface " + *iface +
                        " requires attribute " + missing,
                    pos_of(e.loc));
      }
    }
  }

  for (const auto& [target, k] : kinds) {
    const auto& f = lang.fragments.at(target.first);
    bool selector = uses_selector(f, target.second);
    if (k.first && k.second) {
      throw Error(ErrorCode::MixedBinding,
                  target.first + "." + target.second + " has both default and keyed bindings");
    }
    if (selector && k.first) {
      throw Error(ErrorCode::MixedBinding,
                  target.first + "." + target.second + " is selected by key and needs `when` bindings");
    }
    if (!selector && k.second) {
      throw Error(ErrorCode::MixedBinding,
                  target.first + "." + target.second + " has no selector, so keyed bindings are never used");
    }
  }

  for (const auto& [alias, f] : lang.fragments) {
    for (const auto& [ext, selector] : reachable_externals(f)) {
      bool bound = std::any_of(lang.bindingTable.begin(), lang.bindingTable.end(), [&, &a = alias, &x = ext](const auto& b) {
        return b.first.alias == a && b.first.external == x;
      });
      if (!bound) {
        lang.warnings.push_back({Severity::Warning, config.sourcePath, 0, 0, "UnboundExternal",
                                 "external '" + ext + "' of " + alias + " is reachable but has no binding"});
      }
    }
  }

  lang.mergedSchema.rootGrammar = lang.start().grammar->qualified_name();
  for (const auto& [alias, f] : lang.fragments) {
    for (const auto& [qname, t] : f.schema->types) lang.mergedSchema.types.emplace(qname, t);
  }
  for (const auto& def : config.interfaces) {
    auto it = lang.mergedSchema.types.find(def.name);
    if (it == lang.mergedSchema.types.end()) {
      NodeType t;
      auto dot = def.name.rfind('.');
      t.name = dot == std::string::npos ? def.name : def.name.substr(dot + 1);
      t.package = dot == std::string::npos ? std::string() : def.name.substr(0, dot);
      t.kind = TypeKind::Interface;
      it = lang.mergedSchema.types.emplace(def.name, std::move(t)).first;
    }
    if (it->second.kind != TypeKind::Interface || it->second.definingProduction) continue;
    it->second.attributes.clear();
    for (const auto& req : def.requiredAttributes) {
      it->second.attributes.push_back({req.name, req.valueType, Cardinality::One, false});
    }
  }
  return lang;
}

ComposedLanguage LanguageLibrary::single(std::string_view grammar, std::string_view production) {
  CompositionConfig config;
  config.start = StartDecl{{std::string(grammar), std::string(production)}, "main", {}};
  return bind(config);
}

ComposedLanguage bind(const CompositionConfig& config, const GrammarSet& grammarSet) {
  LanguageLibrary library(grammarSet);
  return library.bind(config);
}

}  // namespace grammarforge
