#include <algorithm>
#include <cctype>
#include <filesystem>
#include <set>

#include "grammarforge/grammar_set.hpp"

namespace grammarforge {

namespace {

class Validator {
 public:
  Validator(const GrammarDef& g, const GrammarSet& set) : g_(g), set_(set) {
    for (const auto* h : set_.linearize(g_)) {
      for (const auto& p : h->productions) {
        for (const auto& s : p.scripts()) globals_.insert(s.targetVariable);
      }
    }
  }

  std::vector<Diagnostic> run() {
    check_package_path();
    for (const auto& rule : g_.lexerRules) {
      bool upper = std::none_of(rule.name.begin(), rule.name.end(),
                                [](char c) { return std::islower(static_cast<unsigned char>(c)); });
      if (!upper) warn(rule.loc, "LowercaseLexerRule", "lexer rule '" + rule.name + "' should be upper-case");
    }
    for (const auto& p : g_.productions) {
      for (const auto& iface : p.implementsList) {
        if (set_.resolve(g_, iface).kind != SymbolKind::Interface) {
          error(p.loc, "UnknownInterface", "production '" + p.name + "' implements unknown interface '" + iface + "'");
        }
      }
      std::set<std::string> seen;
      check_block(p.rhs, seen);
    }
    return std::move(out_);
  }

 private:
  void check_package_path() {
    if (g_.sourcePath.empty()) return;
    std::filesystem::path path(g_.sourcePath);
    bool ok = path.stem() == g_.name;
    auto dir = path.parent_path();
    for (auto it = g_.packagePath.rbegin(); ok && it != g_.packagePath.rend(); ++it) {
      ok = dir.filename() == *it;
      dir = dir.parent_path();
    }
    if (!ok) {
      warn(SourceLoc{1, 1}, "PackagePathMismatch",
           "file location does not mirror package of '" + g_.qualified_name() + "'");
    }
  }

  void check_block(const Block& block, std::set<std::string>& seen) {
    std::set<std::string> after = seen;
    for (const auto& alt : block.alternatives) {
      std::set<std::string> local = seen;
      check_sequence(alt, local);
      after.insert(local.begin(), local.end());
    }
    seen = std::move(after);
  }

  void check_sequence(const Sequence& seq, std::set<std::string>& seen) {
    for (const auto& node : seq) {
      if (const auto* block = std::get_if<Block>(&node.value)) {
        check_block(*block, seen);
      } else if (const auto* lex = std::get_if<LexerRef>(&node.value)) {
        if (set_.resolve(g_, lex->rule).kind != SymbolKind::LexerRule) {
          error(node.loc, "UnknownNonterminal", "unknown lexer rule '" + lex->rule + "'");
        }
        seen.insert(slot_name(*lex));
      } else if (const auto* ref = std::get_if<NonterminalRef>(&node.value)) {
        check_reference(node, *ref, seen);
        seen.insert(slot_name(*ref));
      } else if (const auto* script = std::get_if<Script>(&node.value)) {
        if (!seen.count(script->action.sourceAttribute)) {
          error(node.loc, "UnknownScriptSource",
                "astscript source '" + script->action.sourceAttribute + "' is not labeled earlier in this alternative");
        }
      }
    }
  }

  void check_reference(const RhsNode& node, const NonterminalRef& ref, const std::set<std::string>& seen) {
    auto sym = set_.resolve(g_, ref.rule);
    if (!sym) {
      error(node.loc, "UnknownNonterminal", "reference to unknown nonterminal '" + ref.rule + "'");
      return;
    }
    if (!ref.selector) return;
    if (sym.kind != SymbolKind::External) {
      error(node.loc, "InvalidSelector", "selector on '" + ref.rule + "', which is not an external nonterminal");
      return;
    }
    const auto& sel = *ref.selector;
    if (sel.kind == EmbedSelector::Kind::LocalAttribute && !seen.count(sel.name)) {
      error(node.loc, "UnresolvedSelector", "selector attribute '" + sel.name + "' is not labeled earlier in this production");
    } else if (sel.kind == EmbedSelector::Kind::GlobalVariable && !globals_.count(sel.name)) {
      warn(node.loc, "UnsetGlobal", "no astscript in this grammar hierarchy sets global '" + sel.name + "'");
    }
  }

  void error(SourceLoc loc, std::string code, std::string message) {
    out_.push_back({Severity::Error, g_.sourcePath, loc.line, loc.column, std::move(code), std::move(message)});
  }
  void warn(SourceLoc loc, std::string code, std::string message) {
    out_.push_back({Severity::Warning, g_.sourcePath, loc.line, loc.column, std::move(code), std::move(message)});
  }

  const GrammarDef& g_;
  const GrammarSet& set_;
  std::set<std::string> globals_;
  std::vector<Diagnostic> out_;
};

}  // namespace

std::vector<Diagnostic> validate_grammar(const GrammarDef& grammar, const GrammarSet& grammarSet) {
  return Validator(grammar, grammarSet).run();
}

}  // namespace grammarforge
