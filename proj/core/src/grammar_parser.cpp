#include <set>

#include "grammarforge/grammar.hpp"
#include "scanner.hpp"

namespace grammarforge {

namespace {

using detail::Scanner;

class GrammarParser {
 public:
  GrammarParser(std::string_view text, std::string sourcePath) : scan_(text) { grammar_.sourcePath = std::move(sourcePath); }

  GrammarDef parse() {
    if (scan_.accept_word("package")) {
      grammar_.packagePath = split(scan_.expect_qname());
      scan_.expect_punct(";");
    }
    scan_.expect_word("grammar");
    grammar_.name = scan_.expect_ident();
    if (scan_.accept_word("extends")) {
      do {
        auto loc = scan_.peek();
        auto qname = scan_.expect_qname();
        for (const auto& e : grammar_.extendsList) {
          if (e == qname) duplicate(loc, "supergrammar '" + qname + "' listed twice");
        }
        grammar_.extendsList.push_back(std::move(qname));
      } while (scan_.accept_punct(","));
    }
    scan_.expect_punct("{");
    while (!scan_.at_punct("}")) {
      if (scan_.peek().kind == Scanner::Kind::End) scan_.fail("expected '}' before end of input");
      parse_item();
    }
    scan_.expect_punct("}");
    if (scan_.peek().kind != Scanner::Kind::End) scan_.fail("unexpected input after grammar body");
    finish();
    return std::move(grammar_);
  }

 private:
  struct PendingAttr {
    std::size_t iface;
    std::size_t attr;
    std::string typeName;
    Scanner::Tok tok;
  };

  static std::vector<std::string> split(const std::string& qname) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (;;) {
      auto dot = qname.find('.', start);
      parts.push_back(qname.substr(start, dot - start));
      if (dot == std::string::npos) break;
      start = dot + 1;
    }
    return parts;
  }

  [[noreturn]] void duplicate(const Scanner::Tok& at, const std::string& message) {
    throw Error(ErrorCode::DuplicateName, message, SourcePos{at.offset, at.loc.line, at.loc.column});
  }

  void claim_name(const Scanner::Tok& at, const std::string& name, std::string_view what) {
    if (!names_.insert(name).second) duplicate(at, std::string(what) + " '" + name + "' collides with an earlier declaration");
  }

  void parse_item() {
    const Scanner::Tok head = scan_.peek();
    if (scan_.accept_word("ident")) {
      parse_lexer_rule(head);
    } else if (scan_.accept_word("external")) {
      ExternalDecl ext;
      ext.loc = head.loc;
      auto nameTok = scan_.peek();
      ext.name = scan_.expect_ident();
      if (scan_.accept_punct("/")) {
        ext.requiredInterface = scan_.expect_qname();
        ext.handwritten = true;
      }
      scan_.expect_punct(";");
      claim_name(nameTok, ext.name, "external");
      grammar_.externals.push_back(std::move(ext));
    } else if (scan_.accept_word("interface")) {
      InterfaceDecl iface;
      iface.loc = head.loc;
      auto nameTok = scan_.peek();
      iface.name = scan_.expect_ident();
      if (scan_.accept_punct("=")) {
        scan_.expect_word("ast");
        do {
          auto attrTok = scan_.peek();
          AttributeRequirement attr;
          attr.name = scan_.expect_ident();
          scan_.expect_punct(":");
          auto typeTok = scan_.peek();
          auto typeName = scan_.expect_ident();
          for (const auto& existing : iface.requiredAttributes) {
            if (existing.name == attr.name) duplicate(attrTok, "attribute '" + attr.name + "' required twice");
          }
          pending_.push_back({grammar_.interfaces.size(), iface.requiredAttributes.size(), typeName, typeTok});
          iface.requiredAttributes.push_back(std::move(attr));
        } while (scan_.accept_punct(","));
      }
      scan_.expect_punct(";");
      claim_name(nameTok, iface.name, "interface");
      grammar_.interfaces.push_back(std::move(iface));
    } else {
      parse_production();
    }
  }

  void parse_lexer_rule(const Scanner::Tok& head) {
    LexerRuleDef rule;
    rule.loc = head.loc;
    auto nameTok = scan_.peek();
    rule.name = scan_.expect_ident();
    auto patternTok = scan_.peek();
    rule.pattern = parse_regex_alt();
    if (scan_.accept_punct(":")) {
      scan_.expect_word("int");
      rule.mappedValueType = ValueType::Int;
    }
    scan_.expect_punct(";");
    if (!matches_nonempty(rule.pattern)) {
      scan_.fail_at(patternTok, "pattern of '" + rule.name + "' matches no non-empty string");
    }
    if (rule.name == "EOF") scan_.fail_at(nameTok, "'EOF' is reserved");
    claim_name(nameTok, rule.name, "lexer rule");
    grammar_.lexerRules.push_back(std::move(rule));
  }

  RegexNode parse_regex_alt() {
    RegexNode first = parse_regex_seq();
    if (!scan_.at_punct("|")) return first;
    RegexNode alt;
    alt.kind = RegexNode::Kind::Alternation;
    alt.children.push_back(std::move(first));
    while (scan_.accept_punct("|")) alt.children.push_back(parse_regex_seq());
    return alt;
  }

  RegexNode parse_regex_seq() {
    RegexNode seq;
    seq.kind = RegexNode::Kind::Sequence;
    while (scan_.peek().kind == Scanner::Kind::Char || scan_.at_punct("(")) {
      seq.children.push_back(parse_regex_postfix());
    }
    if (seq.children.empty()) scan_.fail("expected character literal or '(' in pattern");
    if (seq.children.size() == 1) return std::move(seq.children.front());
    return seq;
  }

  RegexNode parse_regex_postfix() {
    RegexNode atom;
    if (scan_.accept_punct("(")) {
      atom = parse_regex_alt();
      scan_.expect_punct(")");
    } else {
      auto lo = scan_.next();
      unsigned char hi = static_cast<unsigned char>(lo.text[0]);
      if (scan_.accept_punct("..")) {
        if (scan_.peek().kind != Scanner::Kind::Char) scan_.fail("expected character literal after '..'");
        hi = static_cast<unsigned char>(scan_.next().text[0]);
      }
      atom = RegexNode::range(static_cast<unsigned char>(lo.text[0]), hi);
      if (atom.lo > atom.hi) scan_.fail_at(lo, "empty character range");
    }
    for (;;) {
      RegexNode::Kind kind;
      if (scan_.accept_punct("?")) kind = RegexNode::Kind::Optional;
      else if (scan_.accept_punct("*")) kind = RegexNode::Kind::Star;
      else if (scan_.accept_punct("+")) kind = RegexNode::Kind::Plus;
      else break;
      RegexNode wrapped;
      wrapped.kind = kind;
      wrapped.children.push_back(std::move(atom));
      atom = std::move(wrapped);
    }
    return atom;
  }

  void parse_production() {
    ProductionDef p;
    auto nameTok = scan_.peek();
    p.loc = nameTok.loc;
    p.name = scan_.expect_ident();
    if (scan_.accept_word("implements")) {
      do {
        p.implementsList.push_back(scan_.expect_ident());
      } while (scan_.accept_punct(","));
    }
    scan_.expect_punct("=");
    p.rhs.alternatives = parse_alternatives();
    scan_.expect_punct(";");
    claim_name(nameTok, p.name, "production");
    grammar_.productions.push_back(std::move(p));
  }

  std::vector<Sequence> parse_alternatives() {
    std::vector<Sequence> alts;
    alts.push_back(parse_sequence());
    while (scan_.accept_punct("|")) alts.push_back(parse_sequence());
    return alts;
  }

  Sequence parse_sequence() {
    Sequence seq;
    while (!scan_.at_punct("|") && !scan_.at_punct(")") && !scan_.at_punct(";")) {
      if (scan_.peek().kind == Scanner::Kind::End) scan_.fail("unexpected end of input in production");
      seq.push_back(parse_element());
    }
    if (seq.empty()) scan_.fail("empty alternative");
    return seq;
  }

  RhsNode parse_element() {
    RhsNode node;
    const auto tok = scan_.peek();
    node.loc = tok.loc;
    if (tok.kind == Scanner::Kind::String) {
      scan_.next();
      if (tok.text.empty()) scan_.fail_at(tok, "empty keyword");
      node.value = Keyword{tok.text};
      return node;
    }
    if (scan_.accept_punct("(")) {
      Block block;
      block.alternatives = parse_alternatives();
      scan_.expect_punct(")");
      if (scan_.accept_punct("?")) block.repetition = Repetition::Optional;
      else if (scan_.accept_punct("*")) block.repetition = Repetition::Star;
      else if (scan_.accept_punct("+")) block.repetition = Repetition::Plus;
      node.value = std::move(block);
      return node;
    }
    if (scan_.accept_word("astscript")) {
      scan_.expect_punct("{");
      scan_.expect_word("set");
      scan_.expect_punct("(");
      Script script;
      script.action.targetVariable = scan_.expect_ident();
      scan_.expect_punct(",");
      script.action.sourceAttribute = scan_.expect_ident();
      scan_.expect_punct(")");
      scan_.expect_punct(";");
      scan_.expect_punct("}");
      node.value = std::move(script);
      return node;
    }
    NonterminalRef ref;
    ref.rule = scan_.expect_ident();
    if (scan_.accept_punct(":")) {
      ref.label = std::move(ref.rule);
      ref.rule = scan_.expect_ident();
    }
    if (scan_.accept_punct("<")) {
      EmbedSelector sel;
      if (scan_.accept_word("global")) sel.kind = EmbedSelector::Kind::GlobalVariable;
      sel.name = scan_.expect_ident();
      scan_.expect_punct(">");
      ref.selector = std::move(sel);
    }
    node.value = std::move(ref);
    return node;
  }

  // References to lexer rules known locally become LexerRefs here; inherited
  // lexer rules are classified when the grammar set is assembled.
  void classify(Sequence& seq) {
    for (auto& node : seq) {
      if (auto* block = std::get_if<Block>(&node.value)) {
        for (auto& alt : block->alternatives) classify(alt);
        continue;
      }
      auto* ref = std::get_if<NonterminalRef>(&node.value);
      if (!ref) continue;
      bool isToken = grammar_.find_lexer_rule(ref->rule) != nullptr || is_builtin_rule(ref->rule);
      bool shadowed = grammar_.find_production(ref->rule) || grammar_.find_external(ref->rule) ||
                      grammar_.find_interface(ref->rule);
      if (!isToken || shadowed) continue;
      if (ref->selector) {
        throw Error(ErrorCode::SyntaxError, "selector on token reference '" + ref->rule + "'",
                    SourcePos{0, node.loc.line, node.loc.column});
      }
      node.value = LexerRef{ref->rule, ref->label};
    }
  }

  void finish() {
    for (auto& p : grammar_.productions) {
      for (auto& alt : p.rhs.alternatives) classify(alt);
    }
    for (const auto& pa : pending_) {
      auto type = value_type_from_name(pa.typeName);
      if (!type) {
        if (const auto* rule = grammar_.find_lexer_rule(pa.typeName)) type = rule->mappedValueType;
      }
      if (!type) scan_.fail_at(pa.tok, "unknown attribute type '" + pa.typeName + "'");
      grammar_.interfaces[pa.iface].requiredAttributes[pa.attr].valueType = *type;
    }
  }

  Scanner scan_;
  GrammarDef grammar_;
  std::set<std::string> names_;
  std::vector<PendingAttr> pending_;
};

}  // namespace

GrammarDef parse_grammar(std::string_view text, std::string sourcePath) {
  return GrammarParser(text, std::move(sourcePath)).parse();
}

}  // namespace grammarforge
