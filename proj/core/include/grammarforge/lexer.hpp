#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "grammarforge/grammar.hpp"
#include "grammarforge/grammar_set.hpp"
#include "grammarforge/regex.hpp"

namespace grammarforge {

using Value = std::variant<std::string, std::int64_t>;

std::string value_text(const Value& v);

inline constexpr std::string_view kEofKind = "EOF";
inline constexpr std::string_view kErrorKind = "<error>";

struct Token {
  int id = 0;  // index into the producing lexer's kind table
  std::string kind;
  std::string text;
  Value value;
  std::size_t start = 0;
  std::size_t end = 0;

  bool operator==(const Token&) const = default;
  bool is_eof() const { return id == 0; }
  bool is_error() const { return id == 1; }
};

class CharQueue;

/// Lexer for one grammar: its own rules, inherited rules and the keyword
/// union of the hierarchy. Immutable once built.
class LexerInstance {
 public:
  static constexpr int kEofId = 0;
  static constexpr int kErrorId = 1;

  const std::string& grammar_name() const { return grammarName_; }
  /// Rule names in match priority order (IDENT and STRING last unless overridden).
  std::vector<std::string> rule_names() const;
  const std::vector<std::string>& keywords() const { return keywords_; }
  bool is_keyword(std::string_view text) const;

  /// Kind table: EOF, <error>, keywords (sorted), then rules.
  std::size_t kind_count() const { return kinds_.size(); }
  const std::string& kind_name(int id) const { return kinds_.at(static_cast<std::size_t>(id)); }
  /// -1 when unknown.
  int kind_id(std::string_view kind) const;

  /// First non-skip offset at or after `pos`. Throws LexError on an
  /// unterminated block comment. Without `lineInfo` the error position
  /// carries only the offset (line/column cost a scan from the start).
  std::size_t skip(std::string_view text, std::size_t pos, bool lineInfo = true) const;

  /// Skips, then returns the longest match. Keywords win ties.
  /// Throws Error{LexError}.
  Token lex(std::string_view text, std::size_t pos, bool lineInfo = true) const;

 private:
  friend LexerInstance build_lexer(const GrammarDef&, const GrammarSet&);

  enum class Matcher { Nfa, Ident, String };
  struct Rule {
    std::string name;
    ValueType type = ValueType::Text;
    Matcher matcher = Matcher::Nfa;
    std::shared_ptr<const Nfa> nfa;
    int id = 0;
  };

  std::size_t match(const Rule& rule, std::string_view text, std::size_t pos) const;

  std::string grammarName_;
  std::vector<Rule> rules_;
  std::vector<std::string> keywords_;
  std::vector<std::string> kinds_;
  std::unordered_map<std::string, int> kindIds_;
};

LexerInstance build_lexer(const GrammarDef& grammar, const GrammarSet& grammarSet);

/// Lexes at `pos` and records the lexed extent in the queue. Does not consume.
Token lex_at(const LexerInstance& lexer, CharQueue& queue, std::size_t pos);

/// Unescapes the contents of a STRING token (without the quotes).
std::string unescape_string(std::string_view body);

}  // namespace grammarforge
