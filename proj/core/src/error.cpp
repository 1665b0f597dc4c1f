#include "grammarforge/error.hpp"

#include <algorithm>

namespace grammarforge {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::DuplicateName: return "DuplicateName";
    case ErrorCode::UnresolvedSupergrammar: return "UnresolvedSupergrammar";
    case ErrorCode::CyclicInheritance: return "CyclicInheritance";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::MissingInterfaceAttribute: return "MissingInterfaceAttribute";
    case ErrorCode::UnresolvedType: return "UnresolvedType";
    case ErrorCode::AttributeTypeChange: return "AttributeTypeChange";
    case ErrorCode::NameClash: return "NameClash";
    case ErrorCode::LexError: return "LexError";
    case ErrorCode::ConsumeBehindCommit: return "ConsumeBehindCommit";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NoViableAlternative: return "NoViableAlternative";
    case ErrorCode::UnboundExternal: return "UnboundExternal";
    case ErrorCode::InterfaceNotSatisfied: return "InterfaceNotSatisfied";
    case ErrorCode::EmbeddingInSpeculation: return "EmbeddingInSpeculation";
    case ErrorCode::RecursionLimit: return "RecursionLimit";
    case ErrorCode::DuplicateAlias: return "DuplicateAlias";
    case ErrorCode::UnresolvedBinding: return "UnresolvedBinding";
    case ErrorCode::MissingStart: return "MissingStart";
    case ErrorCode::MixedBinding: return "MixedBinding";
    case ErrorCode::DuplicateFragment: return "DuplicateFragment";
    case ErrorCode::InvalidHandler: return "InvalidHandler";
    case ErrorCode::UnprintableNode: return "UnprintableNode";
    case ErrorCode::InvalidAst: return "InvalidAst";
  }
  return "Unknown";
}

SourcePos locate(std::string_view text, std::size_t offset) {
  SourcePos pos{offset, 1, 1};
  const auto end = std::min(offset, text.size());
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++pos.line;
      pos.column = 1;
    } else {
      ++pos.column;
    }
  }
  return pos;
}

namespace {

std::string what_text(ErrorCode code, const std::string& message, const std::optional<SourcePos>& pos) {
  std::string out(to_string(code));
  if (pos && pos->line > 0) {
    out += " at " + std::to_string(pos->line) + ":" + std::to_string(pos->column);
  } else if (pos) {
    out += " at offset " + std::to_string(pos->offset);
  }
  out += ": " + message;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, std::string message, std::optional<SourcePos> pos)
    : std::runtime_error(what_text(code, message, pos)),
      code_(code),
      message_(std::move(message)),
      pos_(pos) {}

std::string format(const Diagnostic& d) {
  std::string out = d.severity == Severity::Error ? "ERROR " : "WARNING ";
  out += d.file.empty() ? "<input>" : d.file;
  out += ":" + std::to_string(d.line) + ":" + std::to_string(d.column) + " ";
  out += d.code + " " + d.message;
  return out;
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

}  // namespace grammarforge
