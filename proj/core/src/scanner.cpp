#include "scanner.hpp"

#include <cctype>

namespace grammarforge::detail {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_part(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

}  // namespace

Scanner::Scanner(std::string_view text) : text_(text) { current_ = scan(); }

Scanner::Tok Scanner::next() {
  Tok tok = std::move(current_);
  current_ = scan();
  return tok;
}

void Scanner::advance(std::size_t n) {
  for (std::size_t i = 0; i < n && pos_ < text_.size(); ++i) {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }
}

void Scanner::skip_trivia() {
  for (;;) {
    char c = at(pos_);
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance();
    } else if (c == '/' && at(pos_ + 1) == '/') {
      while (pos_ < text_.size() && text_[pos_] != '\n') advance();
    } else if (c == '/' && at(pos_ + 1) == '*') {
      Tok start{Kind::End, {}, loc_here(), pos_};
      advance(2);
      while (pos_ < text_.size() && !(text_[pos_] == '*' && at(pos_ + 1) == '/')) advance();
      if (pos_ >= text_.size()) fail_at(start, "unterminated block comment");
      advance(2);
    } else {
      return;
    }
  }
}

Scanner::Tok Scanner::scan() {
  skip_trivia();
  Tok tok;
  tok.loc = loc_here();
  tok.offset = pos_;
  if (pos_ >= text_.size()) {
    tok.kind = Kind::End;
    return tok;
  }
  char c = text_[pos_];
  if (ident_start(c)) {
    std::size_t start = pos_;
    while (ident_part(at(pos_))) advance();
    tok.kind = Kind::Ident;
    tok.text = std::string(text_.substr(start, pos_ - start));
    return tok;
  }
  if (c == '"' || c == '\'') {
    const char delim = c;
    advance();
    std::string value;
    for (;;) {
      char d = at(pos_);
      if (pos_ >= text_.size() || d == '\n') fail_at(tok, "unterminated literal");
      if (d == delim) {
        advance();
        break;
      }
      if (d == '\\') {
        char e = at(pos_ + 1);
        switch (e) {
          case 'n': value += '\n'; break;
          case 't': value += '\t'; break;
          case 'r': value += '\r'; break;
          case '\\': value += '\\'; break;
          case '"': value += '"'; break;
          case '\'': value += '\''; break;
          default: fail_at(tok, std::string("unknown escape \\") + e);
        }
        advance(2);
        continue;
      }
      value += d;
      advance();
    }
    tok.kind = delim == '"' ? Kind::String : Kind::Char;
    tok.text = std::move(value);
    if (tok.kind == Kind::Char && tok.text.size() != 1) fail_at(tok, "character literal must hold exactly one byte");
    return tok;
  }
  for (std::string_view two : {"..", "<<", ">>"}) {
    if (text_.substr(pos_, 2) == two) {
      tok.kind = Kind::Punct;
      tok.text = std::string(two);
      advance(2);
      return tok;
    }
  }
  static constexpr std::string_view singles = ";{}=|()?*+:,./<>";
  if (singles.find(c) != std::string_view::npos) {
    tok.kind = Kind::Punct;
    tok.text = std::string(1, c);
    advance();
    return tok;
  }
  fail_at(tok, std::string("unexpected character '") + c + "'");
}

bool Scanner::accept_punct(std::string_view p) {
  if (!at_punct(p)) return false;
  next();
  return true;
}

bool Scanner::accept_word(std::string_view w) {
  if (!at_word(w)) return false;
  next();
  return true;
}

void Scanner::expect_punct(std::string_view p) {
  if (!accept_punct(p)) fail("expected '" + std::string(p) + "' but found " + describe(current_));
}

void Scanner::expect_word(std::string_view w) {
  if (!accept_word(w)) fail("expected '" + std::string(w) + "' but found " + describe(current_));
}

std::string Scanner::expect_ident() {
  if (current_.kind != Kind::Ident) fail("expected identifier but found " + describe(current_));
  return next().text;
}

std::string Scanner::expect_qname() {
  std::string out = expect_ident();
  while (accept_punct(".")) out += "." + expect_ident();
  return out;
}

std::string Scanner::expect_string() {
  if (current_.kind != Kind::String) fail("expected string literal but found " + describe(current_));
  return next().text;
}

std::string Scanner::describe(const Tok& tok) const {
  switch (tok.kind) {
    case Kind::End: return "end of input";
    case Kind::Ident: return "identifier '" + tok.text + "'";
    case Kind::String: return "string " + quote(tok.text);
    case Kind::Char: return "character literal";
    case Kind::Punct: return "'" + tok.text + "'";
  }
  return "token";
}

void Scanner::fail(const std::string& message) const { fail_at(current_, message); }

void Scanner::fail_at(const Tok& tok, const std::string& message) const {
  throw Error(ErrorCode::SyntaxError, message, SourcePos{tok.offset, tok.loc.line, tok.loc.column});
}

}  // namespace grammarforge::detail
