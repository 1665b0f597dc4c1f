#pragma once

#include <string>
#include <string_view>

#include "grammarforge/error.hpp"
#include "grammarforge/grammar.hpp"

namespace grammarforge::detail {

// Tokenizer shared by the grammar-file and composition-config parsers.
// Skips whitespace, `//` line comments and non-nesting `/* */` comments.
class Scanner {
 public:
  enum class Kind { Ident, String, Char, Punct, End };

  struct Tok {
    Kind kind = Kind::End;
    std::string text;  // identifier, unescaped literal value, or punctuation
    SourceLoc loc;
    std::size_t offset = 0;
  };

  explicit Scanner(std::string_view text);

  const Tok& peek() const { return current_; }
  Tok next();

  bool at_punct(std::string_view p) const { return current_.kind == Kind::Punct && current_.text == p; }
  bool at_word(std::string_view w) const { return current_.kind == Kind::Ident && current_.text == w; }

  bool accept_punct(std::string_view p);
  bool accept_word(std::string_view w);
  void expect_punct(std::string_view p);
  void expect_word(std::string_view w);
  std::string expect_ident();
  std::string expect_qname();
  std::string expect_string();

  [[noreturn]] void fail(const std::string& message) const;
  [[noreturn]] void fail_at(const Tok& tok, const std::string& message) const;

 private:
  Tok scan();
  void skip_trivia();
  SourceLoc loc_here() const { return {line_, col_}; }
  char at(std::size_t i) const { return i < text_.size() ? text_[i] : '\0'; }
  void advance(std::size_t n = 1);
  std::string describe(const Tok& tok) const;

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Tok current_;
};

}  // namespace grammarforge::detail
