#include "grammarforge/lexer.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>

#include "grammarforge/char_queue.hpp"

namespace grammarforge {

std::string value_text(const Value& v) {
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  return std::to_string(std::get<std::int64_t>(v));
}

std::string unescape_string(std::string_view body) {
  std::string out;
  out.reserve(body.size());
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (body[i] == '\\' && i + 1 < body.size() && (body[i + 1] == '"' || body[i + 1] == '\\')) ++i;
    out += body[i];
  }
  return out;
}

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_part(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

SourcePos where(std::string_view text, std::size_t pos, bool lineInfo) {
  return lineInfo ? locate(text, pos) : SourcePos{pos, 0, 0};
}

// '"' ( '\' '"' | '\' '\' | ~('"' | '\n') )* '"'
RegexNode string_pattern() {
  using K = RegexNode::Kind;
  auto seq = [](std::vector<RegexNode> parts) {
    RegexNode n;
    n.kind = K::Sequence;
    n.children = std::move(parts);
    return n;
  };
  RegexNode body;
  body.kind = K::Alternation;
  body.children = {seq({RegexNode::literal('\\'), RegexNode::literal('"')}),
                   seq({RegexNode::literal('\\'), RegexNode::literal('\\')}),
                   RegexNode::range(0, '\n' - 1), RegexNode::range('\n' + 1, '"' - 1), RegexNode::range('"' + 1, 255)};
  RegexNode star;
  star.kind = K::Star;
  star.children = {std::move(body)};
  return seq({RegexNode::literal('"'), std::move(star), RegexNode::literal('"')});
}

const std::shared_ptr<const Nfa>& string_nfa() {
  static const auto nfa = std::make_shared<const Nfa>(string_pattern());
  return nfa;
}

}  // namespace

LexerInstance build_lexer(const GrammarDef& grammar, const GrammarSet& grammarSet) {
  LexerInstance lx;
  lx.grammarName_ = grammar.qualified_name();
  std::set<std::string, std::less<>> seen;
  for (const auto* g : grammarSet.linearize(grammar)) {
    for (const auto& rule : g->lexerRules) {
      if (!seen.insert(rule.name).second) continue;
      LexerInstance::Rule r;
      r.name = rule.name;
      r.type = rule.mappedValueType;
      r.nfa = std::make_shared<const Nfa>(rule.pattern);
      lx.rules_.push_back(std::move(r));
    }
  }
  if (!seen.count(kIdentRule)) {
    lx.rules_.push_back({std::string(kIdentRule), ValueType::Text, LexerInstance::Matcher::Ident, nullptr, 0});
  }
  if (!seen.count(kStringRule)) {
    lx.rules_.push_back({std::string(kStringRule), ValueType::Text, LexerInstance::Matcher::String, string_nfa(), 0});
  }
  lx.keywords_ = grammarSet.keywords(grammar);

  lx.kinds_ = {std::string(kEofKind), std::string(kErrorKind)};
  for (const auto& k : lx.keywords_) lx.kinds_.push_back(k);
  for (auto& r : lx.rules_) {
    r.id = static_cast<int>(lx.kinds_.size());
    lx.kinds_.push_back(r.name);
  }
  for (std::size_t i = 0; i < lx.kinds_.size(); ++i) lx.kindIds_.emplace(lx.kinds_[i], static_cast<int>(i));
  return lx;
}

std::vector<std::string> LexerInstance::rule_names() const {
  std::vector<std::string> out;
  for (const auto& r : rules_) out.push_back(r.name);
  return out;
}

bool LexerInstance::is_keyword(std::string_view text) const {
  return std::binary_search(keywords_.begin(), keywords_.end(), text);
}

int LexerInstance::kind_id(std::string_view kind) const {
  auto it = kindIds_.find(std::string(kind));
  return it == kindIds_.end() ? -1 : it->second;
}

std::size_t LexerInstance::skip(std::string_view text, std::size_t pos, bool lineInfo) const {
  while (pos < text.size()) {
    char c = text[pos];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      ++pos;
    } else if (c == '/' && pos + 1 < text.size() && text[pos + 1] == '/') {
      auto nl = text.find('\n', pos);
      pos = nl == std::string_view::npos ? text.size() : nl + 1;
    } else if (c == '/' && pos + 1 < text.size() && text[pos + 1] == '*') {
      auto close = text.find("*/", pos + 2);
      if (close == std::string_view::npos) {
        throw Error(ErrorCode::LexError, "unterminated comment", where(text, pos, lineInfo));
      }
      pos = close + 2;
    } else {
      break;
    }
  }
  return pos;
}

std::size_t LexerInstance::match(const Rule& rule, std::string_view text, std::size_t pos) const {
  switch (rule.matcher) {
    case Matcher::Ident: {
      if (!ident_start(text[pos])) return 0;
      std::size_t end = pos + 1;
      while (end < text.size() && ident_part(text[end])) ++end;
      return end - pos;
    }
    case Matcher::String:
      if (text[pos] != '"') return 0;
      return rule.nfa->longest_match(text, pos);
    case Matcher::Nfa: return rule.nfa->longest_match(text, pos);
  }
  return 0;
}

Token LexerInstance::lex(std::string_view text, std::size_t pos, bool lineInfo) const {
  pos = skip(text, pos, lineInfo);
  Token tok;
  tok.start = tok.end = pos;
  if (pos >= text.size()) {
    tok.id = kEofId;
    tok.kind = kinds_[kEofId];
    return tok;
  }

  const Rule* best = nullptr;
  std::size_t bestLen = 0;
  for (const auto& r : rules_) {
    auto len = match(r, text, pos);
    if (len > bestLen) {
      bestLen = len;
      best = &r;
    }
  }
  const std::string* keyword = nullptr;
  for (const auto& k : keywords_) {
    if (k.size() >= bestLen && (!keyword || k.size() > keyword->size()) && text.compare(pos, k.size(), k) == 0) {
      keyword = &k;
    }
  }

  if (keyword) {
    tok.id = kindIds_.at(*keyword);
    tok.kind = *keyword;
    tok.text = *keyword;
    tok.value = *keyword;
    tok.end = pos + keyword->size();
    return tok;
  }
  if (!best) {
    std::string shown(1, text[pos]);
    throw Error(ErrorCode::LexError, "unexpected character '" + shown + "'", where(text, pos, lineInfo));
  }

  tok.id = best->id;
  tok.kind = best->name;
  tok.text = std::string(text.substr(pos, bestLen));
  tok.end = pos + bestLen;
  if (best->matcher == Matcher::String) {
    tok.value = unescape_string(std::string_view(tok.text).substr(1, tok.text.size() - 2));
  } else if (best->type == ValueType::Int) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), v);
    if (ec != std::errc() || ptr != tok.text.data() + tok.text.size()) {
      throw Error(ErrorCode::LexError, "'" + tok.text + "' is not a valid " + best->name + " integer",
                  where(text, pos, lineInfo));
    }
    tok.value = v;
  } else {
    tok.value = tok.text;
  }
  return tok;
}

Token lex_at(const LexerInstance& lexer, CharQueue& queue, std::size_t pos) {
  try {
    auto tok = lexer.lex(queue.buffer(), pos, false);
    queue.note_lexed(pos, tok.end);
    return tok;
  } catch (const Error& e) {
    auto at = e.pos() ? e.pos()->offset : pos;
    queue.note_lexed(pos, std::min(queue.size(), at + 1));
    throw;
  }
}

}  // namespace grammarforge
