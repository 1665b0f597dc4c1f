#include "grammarforge/grammar.hpp"

#include <algorithm>
#include <cctype>

namespace grammarforge {

std::string_view to_string(ValueType type) noexcept {
  return type == ValueType::Int ? "Int" : "Text";
}

std::string_view to_string(Repetition rep) noexcept {
  switch (rep) {
    case Repetition::One: return "One";
    case Repetition::Optional: return "Optional";
    case Repetition::Star: return "Star";
    case Repetition::Plus: return "Plus";
  }
  return "One";
}

std::optional<ValueType> value_type_from_name(std::string_view name) noexcept {
  if (name == "Text" || name == "STRING" || name == "IDENT" || name == "String") return ValueType::Text;
  if (name == "Int" || name == "int") return ValueType::Int;
  return std::nullopt;
}

RegexNode RegexNode::range(unsigned char lo, unsigned char hi) {
  RegexNode n;
  n.kind = Kind::Range;
  n.lo = lo;
  n.hi = hi;
  return n;
}

namespace {

// Language of the pattern is non-empty (some string matches).
bool inhabited(const RegexNode& r) {
  using K = RegexNode::Kind;
  switch (r.kind) {
    case K::Range: return r.lo <= r.hi;
    case K::Sequence:
      return std::all_of(r.children.begin(), r.children.end(), inhabited);
    case K::Alternation:
      return std::any_of(r.children.begin(), r.children.end(), inhabited);
    case K::Optional:
    case K::Star: return true;
    case K::Plus: return inhabited(r.children.front());
  }
  return false;
}

}  // namespace

bool matches_nonempty(const RegexNode& r) {
  using K = RegexNode::Kind;
  switch (r.kind) {
    case K::Range: return r.lo <= r.hi;
    case K::Sequence:
      return inhabited(r) && std::any_of(r.children.begin(), r.children.end(), matches_nonempty);
    case K::Alternation:
      return std::any_of(r.children.begin(), r.children.end(), matches_nonempty);
    case K::Optional:
    case K::Star:
    case K::Plus: return matches_nonempty(r.children.front());
  }
  return false;
}

bool Block::operator==(const Block& other) const {
  return repetition == other.repetition && alternatives == other.alternatives;
}

std::string slot_name(std::string_view rule, const std::optional<std::string>& label) {
  if (label) return *label;
  std::string name(rule);
  if (!name.empty()) name[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(name[0])));
  return name;
}

std::string slot_name(const LexerRef& ref) { return slot_name(ref.rule, ref.label); }
std::string slot_name(const NonterminalRef& ref) { return slot_name(ref.rule, ref.label); }

std::vector<AstScriptAction> ProductionDef::scripts() const {
  std::vector<AstScriptAction> out;
  for_each_node(rhs, [&](const RhsNode& node) {
    if (const auto* s = std::get_if<Script>(&node.value)) out.push_back(s->action);
  });
  return out;
}

std::string GrammarDef::package_name() const {
  std::string out;
  for (const auto& part : packagePath) {
    if (!out.empty()) out += '.';
    out += part;
  }
  return out;
}

std::string GrammarDef::qualified_name() const {
  auto pkg = package_name();
  return pkg.empty() ? name : pkg + "." + name;
}

namespace {

template <typename T>
const T* find_named(const std::vector<T>& items, std::string_view n) {
  auto it = std::find_if(items.begin(), items.end(), [&](const T& item) { return item.name == n; });
  return it == items.end() ? nullptr : &*it;
}

}  // namespace

const ProductionDef* GrammarDef::find_production(std::string_view n) const { return find_named(productions, n); }
const LexerRuleDef* GrammarDef::find_lexer_rule(std::string_view n) const { return find_named(lexerRules, n); }
const ExternalDecl* GrammarDef::find_external(std::string_view n) const { return find_named(externals, n); }
const InterfaceDecl* GrammarDef::find_interface(std::string_view n) const { return find_named(interfaces, n); }

bool is_builtin_rule(std::string_view name) noexcept {
  return name == kIdentRule || name == kStringRule;
}

// ---------------------------------------------------------------------------
// Rendering

std::string quote(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

namespace {

std::string char_literal(unsigned char c) {
  switch (c) {
    case '\n': return "'\\n'";
    case '\t': return "'\\t'";
    case '\r': return "'\\r'";
    case '\'': return "'\\''";
    case '\\': return "'\\\\'";
    default: return std::string("'") + static_cast<char>(c) + "'";
  }
}

std::string render_regex_atom(const RegexNode& r) {
  using K = RegexNode::Kind;
  if (r.kind == K::Range) return render_regex(r);
  return "(" + render_regex(r) + ")";
}

std::string render_node(const RhsNode& node);

std::string render_alternatives(const std::vector<Sequence>& alts) {
  std::string out;
  for (std::size_t i = 0; i < alts.size(); ++i) {
    if (i) out += " | ";
    out += render_sequence(alts[i]);
  }
  return out;
}

std::string render_node(const RhsNode& node) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Keyword>) {
          return quote(v.text);
        } else if constexpr (std::is_same_v<T, LexerRef>) {
          return (v.label ? *v.label + ":" : std::string()) + v.rule;
        } else if constexpr (std::is_same_v<T, NonterminalRef>) {
          std::string out = (v.label ? *v.label + ":" : std::string()) + v.rule;
          if (v.selector) {
            out += v.selector->kind == EmbedSelector::Kind::GlobalVariable ? "<global " : "<";
            out += v.selector->name + ">";
          }
          return out;
        } else if constexpr (std::is_same_v<T, Block>) {
          std::string out = "(" + render_alternatives(v.alternatives) + ")";
          switch (v.repetition) {
            case Repetition::One: break;
            case Repetition::Optional: out += "?"; break;
            case Repetition::Star: out += "*"; break;
            case Repetition::Plus: out += "+"; break;
          }
          return out;
        } else {
          return "astscript { set(" + v.action.targetVariable + "," + v.action.sourceAttribute + "); }";
        }
      },
      node.value);
}

}  // namespace

std::string render_regex(const RegexNode& r) {
  using K = RegexNode::Kind;
  switch (r.kind) {
    case K::Range:
      return r.lo == r.hi ? char_literal(r.lo) : char_literal(r.lo) + ".." + char_literal(r.hi);
    case K::Sequence: {
      std::string out;
      for (const auto& c : r.children) {
        if (!out.empty()) out += ' ';
        out += c.kind == K::Alternation ? "(" + render_regex(c) + ")" : render_regex(c);
      }
      return out;
    }
    case K::Alternation: {
      std::string out;
      for (const auto& c : r.children) {
        if (!out.empty()) out += " | ";
        out += render_regex(c);
      }
      return out;
    }
    case K::Optional: return render_regex_atom(r.children.front()) + "?";
    case K::Star: return render_regex_atom(r.children.front()) + "*";
    case K::Plus: return render_regex_atom(r.children.front()) + "+";
  }
  return {};
}

std::string render_sequence(const Sequence& seq) {
  std::string out;
  for (const auto& node : seq) {
    if (!out.empty()) out += ' ';
    out += render_node(node);
  }
  return out;
}

std::string render_grammar(const GrammarDef& g) {
  std::string out;
  if (!g.packagePath.empty()) out += "package " + g.package_name() + ";\n\n";
  out += "grammar " + g.name;
  for (std::size_t i = 0; i < g.extendsList.size(); ++i) {
    out += i == 0 ? " extends " : ", ";
    out += g.extendsList[i];
  }
  out += " {\n";
  for (const auto& rule : g.lexerRules) {
    out += "  ident " + rule.name + " " + render_regex(rule.pattern);
    if (rule.mappedValueType == ValueType::Int) out += " : int";
    out += ";\n";
  }
  for (const auto& ext : g.externals) {
    out += "  external " + ext.name;
    if (ext.requiredInterface) out += " / " + *ext.requiredInterface;
    out += ";\n";
  }
  for (const auto& iface : g.interfaces) {
    out += "  interface " + iface.name;
    for (std::size_t i = 0; i < iface.requiredAttributes.size(); ++i) {
      out += i == 0 ? " = ast " : ", ";
      out += iface.requiredAttributes[i].name + ":" + std::string(to_string(iface.requiredAttributes[i].valueType));
    }
    out += ";\n";
  }
  for (const auto& p : g.productions) {
    out += "  " + p.name;
    for (std::size_t i = 0; i < p.implementsList.size(); ++i) {
      out += i == 0 ? " implements " : ", ";
      out += p.implementsList[i];
    }
    out += " = " + render_alternatives(p.rhs.alternatives) + ";\n";
  }
  out += "}\n";
  return out;
}

}  // namespace grammarforge
