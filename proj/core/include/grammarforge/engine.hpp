#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "grammarforge/ast.hpp"
#include "grammarforge/char_queue.hpp"
#include "grammarforge/composition.hpp"

namespace grammarforge {

struct ConsumedToken {
  std::string alias;  // fragment whose lexer produced the token
  Token token;
};

/// One lexer exchange at an external nonterminal (entering or leaving it).
struct SwitchRecord {
  std::string fromAlias;
  std::string toAlias;
  bool entering = true;
  std::size_t committed = 0;      // queue position the next lexer starts from
  std::size_t frontier = 0;       // furthest character lexed before the reset
  std::size_t lookaheadEnd = 0;   // end of the engine's own lookahead window
  std::size_t firstLexPos = 0;    // where the next lexer actually started
  bool lexedAfter = false;

  /// Characters that were lexed by the old lexer and must be re-lexed.
  std::size_t relexed() const { return frontier - committed; }
  std::size_t window() const { return lookaheadEnd > committed ? lookaheadEnd - committed : 0; }
};

struct ParseTrace {
  std::vector<ConsumedToken> tokens;
  std::vector<SwitchRecord> switches;
};

struct ParseOptions {
  bool trace = false;
  bool logQueue = false;
  std::size_t maxDepth = 2000;
};

/// One parse of one input. Not reusable: construct a new session per input.
class ParseSession {
 public:
  ParseSession(const ComposedLanguage& language, std::string input, ParseOptions options = {});
  ~ParseSession();
  ParseSession(const ParseSession&) = delete;
  ParseSession& operator=(const ParseSession&) = delete;

  /// Parses the whole input from the language's start production.
  /// Throws Error{ParseError | LexError | UnboundExternal | InterfaceNotSatisfied
  /// | EmbeddingInSpeculation | RecursionLimit}.
  AstNode run();

  /// Parses one production of the start fragment's language at the current
  /// position without requiring end of input.
  AstNode run_production(std::string_view production);

  const CharQueue& queue() const;
  const ParseTrace& trace() const;
  const std::map<std::string, std::string>& globals() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

AstNode parse(const ComposedLanguage& language, std::string_view input);

}  // namespace grammarforge
