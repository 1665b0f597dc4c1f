#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace grammarforge {

enum class ErrorCode {
  // grammar files and grammar sets
  SyntaxError,
  DuplicateName,
  UnresolvedSupergrammar,
  CyclicInheritance,
  IoError,
  // schema derivation
  MissingInterfaceAttribute,
  UnresolvedType,
  AttributeTypeChange,
  NameClash,
  // lexing and the shared queue
  LexError,
  ConsumeBehindCommit,
  // parsing
  ParseError,
  NoViableAlternative,
  UnboundExternal,
  InterfaceNotSatisfied,
  EmbeddingInSpeculation,
  RecursionLimit,
  // composition
  DuplicateAlias,
  UnresolvedBinding,
  MissingStart,
  MixedBinding,
  // traversal and printing
  DuplicateFragment,
  InvalidHandler,
  UnprintableNode,
  InvalidAst,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Position inside some source text. Line and column are 1-based; 0 means unknown.
struct SourcePos {
  std::size_t offset = 0;
  int line = 0;
  int column = 0;
};

/// Computes line/column for a byte offset.
SourcePos locate(std::string_view text, std::size_t offset);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, std::optional<SourcePos> pos = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  const std::string& message() const noexcept { return message_; }
  const std::optional<SourcePos>& pos() const noexcept { return pos_; }

  // Only filled in by the parse engine.
  std::set<std::string> expected;
  std::string found;

 private:
  ErrorCode code_;
  std::string message_;
  std::optional<SourcePos> pos_;
};

enum class Severity { Error, Warning };

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string file;
  int line = 0;
  int column = 0;
  std::string code;
  std::string message;

  bool operator==(const Diagnostic&) const = default;
};

/// `LEVEL file:line:col CODE message`
std::string format(const Diagnostic& d);

bool has_errors(const std::vector<Diagnostic>& diagnostics);

}  // namespace grammarforge
