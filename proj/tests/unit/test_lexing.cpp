#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace grammarforge;

namespace {

LexerInstance fixture_lexer(const std::string& grammar) {
  auto set = gf_test::load_fixture_grammars({grammar});
  return build_lexer(set.at(grammar), set);
}

std::vector<Token> lex_all(const LexerInstance& lexer, std::string_view text) {
  std::vector<Token> out;
  std::size_t pos = 0;
  for (;;) {
    auto t = lexer.lex(text, pos);
    out.push_back(t);
    if (t.is_eof()) return out;
    pos = t.end;
  }
}

std::vector<std::string> kinds(const std::vector<Token>& toks) {
  std::vector<std::string> out;
  for (const auto& t : toks) out.push_back(t.kind);
  return out;
}

}  // namespace

TEST(BuildLexer, BookstoreKeywordsAndRules) {
  auto lx = fixture_lexer("mc.examples.bookstore.Bookstore");
  std::vector<std::string> kw = lx.keywords();
  std::sort(kw.begin(), kw.end());
  EXPECT_EQ(kw, (std::vector<std::string>{",", ";", "book", "bookstore", "by", "journal", "{", "}"}));
  EXPECT_EQ(lx.rule_names(), (std::vector<std::string>{"ID", "IDENT", "STRING"}));
  EXPECT_EQ(lx.kind_name(0), "EOF");
  EXPECT_EQ(lx.kind_name(1), "<error>");
}

TEST(BuildLexer, KeywordUnionWithSupergrammar) {
  auto base = fixture_lexer("mc.examples.bookstore.Bookstore");
  auto ext = fixture_lexer("mc.examples.bookstore2.ExtendedBookstore");
  std::vector<std::string> expected = base.keywords();
  expected.push_back("editors");
  std::sort(expected.begin(), expected.end());
  auto got = ext.keywords();
  std::sort(got.begin(), got.end());
  EXPECT_EQ(got, expected);
}

TEST(BuildLexer, SubgrammarRuleShadowsSuper) {
  std::vector<GrammarDef> defs;
  defs.push_back(parse_grammar("package p; grammar S { ident ID ('0'..'9')+ : int; A = ID ; }"));
  defs.push_back(parse_grammar("package p; grammar T extends p.S { ident ID ('a'..'z')+ ; }"));
  auto set = GrammarSet::build(std::move(defs));
  auto lx = build_lexer(set.at("p.T"), set);
  EXPECT_EQ(lx.rule_names(), (std::vector<std::string>{"ID", "IDENT", "STRING"}));
  auto t = lx.lex("abc", 0);
  EXPECT_EQ(t.kind, "ID");
  EXPECT_EQ(std::get<std::string>(t.value), "abc");
  EXPECT_THROW(lx.lex("123", 0), Error);  // super's ID is gone; IDENT rejects digits
}

TEST(LexAt, BookstoreTokens) {
  auto lx = fixture_lexer("mc.examples.bookstore.Bookstore");
  CharQueue q("book 12 \"X\"");
  auto t1 = lex_at(lx, q, 0);
  EXPECT_EQ(t1.kind, "book");
  auto t2 = lex_at(lx, q, t1.end);
  EXPECT_EQ(t2.kind, "ID");
  EXPECT_EQ(std::get<std::int64_t>(t2.value), 12);
  EXPECT_EQ(t2.start, 5u);
  EXPECT_EQ(t2.end, 7u);
  auto t3 = lex_at(lx, q, t2.end);
  EXPECT_EQ(t3.kind, "STRING");
  EXPECT_EQ(std::get<std::string>(t3.value), "X");
  EXPECT_EQ(t3.text, "\"X\"");
  EXPECT_EQ(q.committed(), 0u);  // lexing never commits
  EXPECT_EQ(q.frontier(), 11u);
}

TEST(LexAt, EmptyInputIsEof) {
  auto lx = fixture_lexer("mc.examples.bookstore.Bookstore");
  CharQueue q("");
  auto t = lex_at(lx, q, 0);
  EXPECT_TRUE(t.is_eof());
  EXPECT_EQ(t.kind, "EOF");
  EXPECT_EQ(t.start, 0u);
}

TEST(LexAt, HostKeywordIsIdentForEmbeddedLexer) {
  auto host = fixture_lexer("mc.examples.bookstore.Bookstore");
  auto guest = fixture_lexer("mc.examples.bibtex.Bibtex");
  EXPECT_EQ(host.lex("journal", 0).kind, "journal");
  auto t = guest.lex("journal", 0);
  EXPECT_EQ(t.kind, "IDENT");
  EXPECT_EQ(t.text, "journal");
}

TEST(LexAt, LongestMatchAndKeywords) {
  auto lx = fixture_lexer("mc.examples.bookstore.Bookstore");
  EXPECT_EQ(kinds(lex_all(lx, "bookstore books book")),
            (std::vector<std::string>{"bookstore", "IDENT", "book", "EOF"}));
  EXPECT_EQ(kinds(lex_all(lx, "a1 12")), (std::vector<std::string>{"IDENT", "ID", "EOF"}));
}

TEST(LexAt, SkipsWhitespaceAndComments) {
  auto lx = fixture_lexer("mc.examples.bookstore.Bookstore");
  auto toks = lex_all(lx, " \t\r\n// c\n/* block\n */ book");
  ASSERT_EQ(toks.size(), 2u);
  EXPECT_EQ(toks[0].kind, "book");
  EXPECT_EQ(toks[0].start, 22u);
}

TEST(LexAt, Errors) {
  auto lx = fixture_lexer("mc.examples.bookstore.Bookstore");
  auto code = [&](std::string_view text) {
    try {
      lex_all(lx, text);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidAst;
  };
  EXPECT_EQ(code("book #"), ErrorCode::LexError);
  EXPECT_EQ(code("/* open"), ErrorCode::LexError);
  EXPECT_EQ(code("\"unterminated"), ErrorCode::LexError);
  EXPECT_EQ(code("99999999999999999999999"), ErrorCode::LexError);
  try {
    lx.lex("  #", 0);
  } catch (const Error& e) {
    ASSERT_TRUE(e.pos());
    EXPECT_EQ(e.pos()->offset, 2u);
  }
}

TEST(LexAt, StringEscapes) {
  auto lx = fixture_lexer("mc.examples.bookstore.Bookstore");
  auto t = lx.lex(R"("a \"q\" b\\")", 0);
  EXPECT_EQ(std::get<std::string>(t.value), R"(a "q" b\)");
  EXPECT_EQ(quote(std::get<std::string>(t.value)), t.text);
  EXPECT_EQ(unescape_string(R"(x\ny)"), R"(x\ny)");
}

TEST(LexAt, TokenInvariants) {
  auto lx = fixture_lexer("mc.examples.bookstore.Bookstore");
  std::string text = "bookstore S { book 0042 \"T\" by A B ; }";
  for (const auto& t : lex_all(lx, text)) {
    EXPECT_EQ(t.end - t.start, t.text.size());
    EXPECT_EQ(text.substr(t.start, t.end - t.start), t.text);
    if (t.kind == "ID") EXPECT_EQ(std::get<std::int64_t>(t.value), 42);
  }
}

TEST(CharQueue, ConsumeAdvancesCommitted) {
  auto lx = fixture_lexer("mc.examples.bookstore.Bookstore");
  CharQueue q(" book 12 ;");
  auto t1 = lex_at(lx, q, 0);
  q.consume(t1);
  EXPECT_EQ(q.committed(), 5u);
  auto t2 = lex_at(lx, q, q.cursor());
  q.consume(t2);
  EXPECT_EQ(q.committed(), t2.end);
  EXPECT_THROW(q.consume(t1), Error);
}

TEST(CharQueue, ResetDiscardsLookahead) {
  auto lx = fixture_lexer("mc.examples.bookstore.Bookstore");
  CharQueue q("book 12 \"T\" by");
  auto t1 = lex_at(lx, q, 0);
  auto t2 = lex_at(lx, q, t1.end);
  auto t3 = lex_at(lx, q, t2.end);
  q.consume(t1);
  EXPECT_EQ(q.frontier(), t3.end);
  // the re-lexed region is exactly the characters of tokens 2 and 3
  EXPECT_EQ(q.frontier() - q.committed(), t3.end - t1.end);
  EXPECT_EQ(q.reset_for_embedding(), t1.end);
  EXPECT_EQ(q.frontier(), t1.end);
  EXPECT_EQ(q.high_water(), t3.end);
}

TEST(CharQueue, NoLookaheadMeansNothingToRelex) {
  auto lx = fixture_lexer("mc.examples.bookstore.Bookstore");
  CharQueue q("book 12");
  q.consume(lex_at(lx, q, 0));
  EXPECT_EQ(q.frontier(), q.committed());
  EXPECT_EQ(q.reset_for_embedding(), 4u);
}

TEST(CharQueue, SpeculationCommitsOnlyAtOutermostRelease) {
  auto lx = fixture_lexer("mc.examples.bookstore.Bookstore");
  CharQueue q("book 12 ;");
  q.set_logging(true);
  q.mark();
  q.consume(lex_at(lx, q, 0));
  EXPECT_EQ(q.committed(), 0u);
  EXPECT_EQ(q.cursor(), 4u);
  EXPECT_THROW(q.reset_for_embedding(), Error);
  q.mark();
  q.consume(lex_at(lx, q, q.cursor()));
  q.rewind();
  EXPECT_EQ(q.cursor(), 4u);
  q.release();
  EXPECT_EQ(q.committed(), 4u);
  EXPECT_FALSE(q.speculating());
  std::size_t last = 0;
  for (const auto& e : q.events()) {
    if (e.kind != QueueEventKind::Commit) continue;
    EXPECT_GE(e.from, last);
    last = e.from;
  }
}

TEST(Regex, NfaMatchesBacktrackingOracle) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> len(0, 7), ch(0, 4);
  for (int i = 0; i < 400; ++i) {
    auto re = gf_test::random_regex(rng);
    Nfa nfa(re);
    for (int j = 0; j < 20; ++j) {
      std::string s;
      for (int k = len(rng); k > 0; --k) s += static_cast<char>('a' + ch(rng));
      auto ends = gf_test::regex_match_ends(re, s, 0);
      std::size_t longest = 0;
      for (auto e : ends) longest = std::max(longest, e);
      EXPECT_EQ(nfa.longest_match(s, 0), longest) << render_regex(re) << " on '" << s << "'";
      EXPECT_EQ(nfa.full_match(s), ends.count(s.size()) > 0) << render_regex(re) << " on '" << s << "'";
    }
  }
}

// Same input, same token stream; and every token starts where the previous
// one ended, up to skipped characters.
TEST(LexerProperties, DeterministicAndContiguous) {
  auto lx = fixture_lexer("mc.examples.bookstore2.ExtendedBookstore");
  std::mt19937_64 rng(9);
  const std::vector<std::string> pieces{"book", "journal", "editors", "x1", "42", "\"s\"", ",", ";", "{", "}", " ",
                                        "\n", "// c\n", "/* d */", "bookstores", "by"};
  for (int i = 0; i < 300; ++i) {
    std::string text;
    for (int k = std::uniform_int_distribution<int>(0, 12)(rng); k > 0; --k) {
      text += pieces[std::uniform_int_distribution<std::size_t>(0, pieces.size() - 1)(rng)] + " ";
    }
    auto a = lex_all(lx, text);
    auto b = lex_all(lx, text);
    EXPECT_EQ(a, b);
    std::size_t pos = 0;
    for (const auto& t : a) {
      EXPECT_EQ(lx.skip(text, pos), t.start) << text;
      pos = t.end;
    }
    EXPECT_EQ(a.back().end, text.size());
  }
}
