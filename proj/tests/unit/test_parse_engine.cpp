#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "fixtures.hpp"
#include "random_inputs.hpp"

using namespace grammarforge;

namespace {

const char* const kStore = "mc.examples.bookstore.Bookstore.Bookstore";

ComposedLanguage inline_language(const std::vector<std::string>& grammars, const std::string& config) {
  std::vector<GrammarDef> defs;
  for (const auto& g : grammars) defs.push_back(parse_grammar(g));
  LanguageLibrary lib(GrammarSet::build(std::move(defs)));
  return lib.bind(parse_config(config));
}

Error error_of(const ComposedLanguage& lang, const std::string& input) {
  try {
    parse(lang, input);
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "accepted: " << input;
  return Error(ErrorCode::InvalidAst, "none");
}

std::string text_of(const AstNode& n, std::string_view attr) { return value_text(*n.value(attr)); }

void walk(const AstNode& n, const std::function<void(const AstNode&, const AstNode*)>& fn,
          const AstNode* parent = nullptr) {
  fn(n, parent);
  for (const auto& slot : n.children) {
    for (const auto& c : slot.nodes) walk(c, fn, &n);
  }
}

}  // namespace

TEST(Parse, PersonProduction) {
  auto lang = gf_test::fixture_language(kStore);
  ParseSession s(lang, "Ann Smith");
  auto person = s.run_production("Person");
  EXPECT_EQ(ast_to_json(person, -1),
            R"({"attributes":{"forename":"Ann","lastname":"Smith"},"children":{},"span":[0,9],)"
            R"("type":"mc.examples.bookstore.Bookstore.Person"})");
}

TEST(Parse, BookProduction) {
  auto lang = gf_test::fixture_language(kStore);
  ParseSession s(lang, "book 12 \"DSL Engineering\" by Ann Smith , Bob Lee ;");
  auto book = s.run_production("Book");
  EXPECT_EQ(book.type, "mc.examples.bookstore.Bookstore.Book");
  EXPECT_EQ(std::get<std::int64_t>(*book.value("id")), 12);
  EXPECT_EQ(text_of(book, "title"), "DSL Engineering");
  const auto* authors = book.child("authors");
  ASSERT_NE(authors, nullptr);
  ASSERT_EQ(authors->nodes.size(), 2u);
  EXPECT_EQ(text_of(authors->nodes[1], "forename"), "Bob");
  EXPECT_EQ(authors->nodes[1].span, (Span{41, 48}));
}

TEST(Parse, RunProductionRejectsUnknownNames) {
  auto lang = gf_test::fixture_language(kStore);
  ParseSession s(lang, "x");
  EXPECT_THROW(s.run_production("Nope"), Error);
}

TEST(Parse, EmptyStore) {
  auto root = parse(gf_test::fixture_language(kStore), "bookstore Empty { }");
  EXPECT_EQ(text_of(root, "name"), "Empty");
  EXPECT_TRUE(root.child("book")->nodes.empty());
  EXPECT_TRUE(root.child("journal")->nodes.empty());
  EXPECT_EQ(root.span, (Span{0, 19}));
}

TEST(Parse, SubgrammarInstantiatesOverridingType) {
  auto lang = gf_test::fixture_language("mc.examples.bookstore2.ExtendedBookstore.Bookstore");
  auto root = parse(lang, gf_test::fixture_text("inputs/ext_editors.bs"));
  EXPECT_EQ(root.type, "mc.examples.bookstore.Bookstore.Bookstore");  // not overridden
  const auto& journals = root.child("journal")->nodes;
  ASSERT_EQ(journals.size(), 1u);
  EXPECT_EQ(journals[0].type, "mc.examples.bookstore2.ExtendedBookstore.Journal");
  EXPECT_EQ(journals[0].child("editors")->nodes.size(), 2u);
  EXPECT_TRUE(lang.mergedSchema.is_subtype(journals[0].type, "mc.examples.bookstore.Bookstore.Journal"));
  // the old journal form is no longer part of the language
  EXPECT_EQ(error_of(lang, "bookstore S { journal 7 \"SoSyM\" ; }").code(), ErrorCode::ParseError);
}

TEST(Parse, OrderedChoiceFallsThroughToSecondAlternative) {
  auto root = parse(gf_test::fixture_language("conflicts.Decls.Program"), "a ; int b ;");
  const auto& decls = root.child("decl")->nodes;
  ASSERT_EQ(decls.size(), 2u);
  EXPECT_EQ(decls[0].value("type"), nullptr);
  EXPECT_EQ(text_of(decls[0], "name"), "a");
  EXPECT_EQ(text_of(decls[1], "type"), "int");
  EXPECT_EQ(text_of(decls[1], "name"), "b");
}

TEST(Parse, FirstSupergrammarWins) {
  auto c = parse(gf_test::fixture_language("collision.C.Doc"), "x one x two");
  auto d = parse(gf_test::fixture_language("collision.D.Doc"), "x one x two");
  const auto& cx = c.child("x")->nodes;
  const auto& dx = d.child("x")->nodes;
  ASSERT_EQ(cx.size(), 2u);
  ASSERT_EQ(dx.size(), 2u);
  EXPECT_EQ(cx[0].type, "collision.A.X");
  EXPECT_EQ(text_of(cx[0], "fromA"), "one");
  EXPECT_EQ(dx[0].type, "collision.B.X");
  EXPECT_EQ(text_of(dx[1], "fromB"), "two");
}

TEST(Parse, EmbeddedBibtexEntries) {
  auto lang = gf_test::fixture_config_language("configs/store.cfg");
  auto root = parse(lang, gf_test::fixture_text("inputs/emb_store.bs"));
  const auto& book = root.child("book")->nodes.at(0);
  const auto& entry = book.child("bookentry")->nodes.at(0);
  EXPECT_EQ(entry.type, "mc.examples.bibtex.Bibtex.BibtexBook");
  EXPECT_EQ(text_of(entry, "key"), "voelter2013");
  EXPECT_EQ(entry.child("fields")->nodes.size(), 2u);
  const auto& jentry = root.child("journal")->nodes.at(0).child("journalentry")->nodes.at(0);
  EXPECT_EQ(jentry.type, "mc.examples.bibtex.Bibtex.BibtexJournal");
  EXPECT_EQ(text_of(jentry, "key"), "sosym");
}

TEST(Parse, HostKeywordsInsideEmbeddedRegion) {
  auto lang = gf_test::fixture_config_language("configs/store.cfg");
  const std::string input = gf_test::fixture_text("inputs/emb_keywords.bs");
  ParseSession s(lang, input, ParseOptions{true, false});
  auto root = s.run();
  const auto& entry = root.child("journal")->nodes.at(0).child("journalentry")->nodes.at(0);
  EXPECT_EQ(text_of(entry, "key"), "journal");
  const auto& fields = entry.child("fields")->nodes;
  ASSERT_EQ(fields.size(), 2u);
  EXPECT_EQ(text_of(fields[0], "name"), "book");
  EXPECT_EQ(text_of(fields[0], "word"), "by");
  EXPECT_EQ(text_of(fields[1], "name"), "bookstore");
  for (const auto& ct : s.trace().tokens) {
    if (ct.alias == "bibJrn" && (ct.token.text == "journal" || ct.token.text == "book")) {
      EXPECT_EQ(ct.token.kind, "IDENT");
    }
  }
}

TEST(Parse, KeyedBindingFollowsGlobalAndLocalSelectors) {
  auto lang = gf_test::fixture_config_language("configs/keyed.cfg");
  {
    ParseSession s(lang, gf_test::fixture_text("inputs/keyed_bibtex.bs"));
    auto root = s.run();
    EXPECT_EQ(s.globals().at("bt"), "bibtex");
    EXPECT_EQ(root.child("book")->nodes.at(0).child("bookentry")->nodes.at(0).type,
              "mc.examples.bibtex.Bibtex.BibtexBook");
  }
  auto root = parse(lang, gf_test::fixture_text("inputs/keyed_mixed.bs"));
  EXPECT_EQ(root.child("book")->nodes.at(0).child("bookentry")->nodes.at(0).type, "mc.examples.ris.Ris.RisBook");
  const auto& journals = root.child("journal")->nodes;
  ASSERT_EQ(journals.size(), 2u);
  EXPECT_EQ(journals[0].child("journalentry")->nodes.at(0).type, "mc.examples.bibtex.Bibtex.BibtexJournal");
  EXPECT_EQ(journals[1].child("journalentry")->nodes.at(0).type, "mc.examples.ris.Ris.RisJournal");
}

TEST(Parse, UnknownKeyIsUnboundExternal) {
  auto lang = gf_test::fixture_config_language("configs/keyed.cfg");
  const std::string input = "bookstore S ris { book 1 \"x\" by A B TY BOOK ER ; journal 2 \"y\" endnote X ; }";
  auto e = error_of(lang, input);
  EXPECT_EQ(e.code(), ErrorCode::UnboundExternal);
  ASSERT_TRUE(e.pos());
  EXPECT_EQ(e.pos()->offset, input.find("X ;"));
  EXPECT_NE(e.message().find("endnote"), std::string::npos);
}

TEST(Parse, ParseErrorReportsExpectedAndFound) {
  auto lang = gf_test::fixture_language(kStore);
  auto e = error_of(lang, "bookstore S { magazine 1 \"x\" ; }");
  EXPECT_EQ(e.code(), ErrorCode::ParseError);
  ASSERT_TRUE(e.pos());
  EXPECT_EQ(e.pos()->offset, 14u);
  EXPECT_EQ(e.pos()->line, 1);
  EXPECT_EQ(e.pos()->column, 15);
  EXPECT_EQ(e.found, "magazine");
  EXPECT_EQ(e.expected, (std::set<std::string>{"book", "journal", "}"}));

  auto e2 = error_of(lang, "bookstore S {\n book 1 \"x\" by Ann ;\n}");
  EXPECT_EQ(e2.code(), ErrorCode::ParseError);
  EXPECT_EQ(e2.pos()->line, 2);
  EXPECT_EQ(e2.found, ";");
  EXPECT_TRUE(e2.expected.count("IDENT"));

  auto e3 = error_of(lang, "bookstore S { } extra");
  EXPECT_EQ(e3.code(), ErrorCode::ParseError);
  EXPECT_EQ(e3.pos()->offset, 16u);
  EXPECT_TRUE(e3.expected.count("end of input"));
}

TEST(Parse, LexErrorOffset) {
  auto e = error_of(gf_test::fixture_language(kStore), "bookstore S { # }");
  EXPECT_EQ(e.code(), ErrorCode::LexError);
  ASSERT_TRUE(e.pos());
  EXPECT_EQ(e.pos()->offset, 14u);
}

TEST(Parse, EmbeddingWhileSpeculatingIsAnError) {
  auto lang = inline_language({"package s; grammar H { external E; A = x:IDENT E \";\" | x:IDENT \"k\" ; }",
                               "package s; grammar G { B = \"g\" n:IDENT ; }"},
                              "s.H.A h <<start>>; s.G.B g in h.E;");
  auto e = error_of(lang, "y g z ;");
  EXPECT_EQ(e.code(), ErrorCode::EmbeddingInSpeculation);
  // the last candidate runs committed, so the same external is fine there
  auto lang2 = inline_language({"package s; grammar H { external E; A = x:IDENT \"k\" | x:IDENT E \";\" ; }",
                                "package s; grammar G { B = \"g\" n:IDENT ; }"},
                               "s.H.A h <<start>>; s.G.B g in h.E;");
  auto root = parse(lang2, "y g z ;");
  EXPECT_EQ(root.child("e")->nodes.at(0).type, "s.G.B");
}

TEST(Parse, DeepNestingHitsRecursionLimit) {
  auto lang = inline_language({"grammar N { P = \"(\" P \")\" | \"x\" ; }"}, "N.P n <<start>>;");
  std::string ok = std::string(50, '(') + "x" + std::string(50, ')');
  EXPECT_NO_THROW(parse(lang, ok));
  std::string deep = std::string(5000, '(') + "x" + std::string(5000, ')');
  EXPECT_EQ(error_of(lang, deep).code(), ErrorCode::RecursionLimit);
}

TEST(Parse, TraceListsConsumedTokens) {
  auto lang = gf_test::fixture_language(kStore);
  ParseSession s(lang, "bookstore S { journal 7 \"J\" ; }", ParseOptions{true, false});
  s.run();
  std::vector<std::string> kinds;
  for (const auto& ct : s.trace().tokens) kinds.push_back(ct.token.kind);
  EXPECT_EQ(kinds, (std::vector<std::string>{"bookstore", "IDENT", "{", "journal", "ID", "STRING", ";", "}"}));
  EXPECT_TRUE(s.trace().switches.empty());
}

// ---------------------------------------------------------------------------
// properties over the corpus and random inputs

TEST(ParseProperties, CorpusConformsToSchema) {
  for (const auto& entry : gf_test::load_corpus()) {
    auto lang = gf_test::corpus_language(entry);
    auto root = parse(lang, gf_test::fixture_text(entry.input));
    auto problems = validate_ast(root, lang.mergedSchema);
    EXPECT_TRUE(problems.empty()) << entry.input << ": " << (problems.empty() ? "" : problems[0]);
  }
}

// Spans nest, stay inside the input and siblings of one slot do not overlap.
TEST(ParseProperties, SpansAreSound) {
  for (const auto& entry : gf_test::load_corpus()) {
    auto lang = gf_test::corpus_language(entry);
    const std::string input = gf_test::fixture_text(entry.input);
    auto root = parse(lang, input);
    walk(root, [&](const AstNode& n, const AstNode* parent) {
      EXPECT_LE(n.span.start, n.span.end) << entry.input;
      EXPECT_LE(n.span.end, input.size()) << entry.input;
      if (parent) {
        EXPECT_GE(n.span.start, parent->span.start) << entry.input << " " << n.type;
        EXPECT_LE(n.span.end, parent->span.end) << entry.input << " " << n.type;
      }
      for (const auto& slot : n.children) {
        for (std::size_t i = 1; i < slot.nodes.size(); ++i) {
          EXPECT_LE(slot.nodes[i - 1].span.end, slot.nodes[i].span.start) << entry.input;
        }
      }
      if (n.span.end > n.span.start) {
        EXPECT_NE(input[n.span.start], ' ');
        EXPECT_NE(input[n.span.end - 1], ' ');
      }
    });
  }
}

TEST(ParseProperties, Deterministic) {
  for (const auto& entry : gf_test::load_corpus()) {
    auto lang = gf_test::corpus_language(entry);
    const std::string input = gf_test::fixture_text(entry.input);
    ParseSession a(lang, input, ParseOptions{true, true});
    ParseSession b(lang, input, ParseOptions{true, true});
    EXPECT_EQ(a.run(), b.run());
    EXPECT_EQ(a.queue().events(), b.queue().events());
    EXPECT_EQ(a.trace().tokens.size(), b.trace().tokens.size());
  }
}

TEST(ParseProperties, SubgrammarNeverBuildsOverriddenType) {
  auto lang = gf_test::fixture_language("mc.examples.bookstore2.ExtendedBookstore.Bookstore");
  std::mt19937_64 rng(21);
  for (int i = 0; i < 100; ++i) {
    const auto input = gf_test::random_extended_store(rng);
    auto root = parse(lang, input);
    walk(root, [&](const AstNode& n, const AstNode*) {
      EXPECT_NE(n.type, "mc.examples.bookstore.Bookstore.Journal") << input;
    });
  }
}

// Host nodes are the same whatever the embedded regions contain, as long as
// the embedded text parses.
TEST(ParseProperties, EmbeddedRegionsDoNotDisturbHost) {
  auto lang = gf_test::fixture_config_language("configs/store.cfg");
  std::mt19937_64 rng(22);
  for (int i = 0; i < 100; ++i) {
    const auto input = gf_test::random_embedded_store(rng);
    auto root = parse(lang, input);
    for (const auto* slot : {"book", "journal"}) {
      for (const auto& item : root.child(slot)->nodes) {
        const auto* entry = item.child(std::string(slot) == "book" ? "bookentry" : "journalentry");
        ASSERT_EQ(entry->nodes.size(), 1u) << input;
        const auto& e = entry->nodes[0];
        EXPECT_EQ(e.type.rfind("mc.examples.bibtex.", 0), 0u);
        const auto sub = input.substr(e.span.start, e.span.end - e.span.start);
        EXPECT_EQ(sub.front(), '@') << input;
        EXPECT_EQ(sub.back(), '}') << input;
      }
    }
  }
}

TEST(ParseProperties, RandomKeyedInputsParse) {
  auto lang = gf_test::fixture_config_language("configs/keyed.cfg");
  std::mt19937_64 rng(23);
  for (int i = 0; i < 100; ++i) {
    const auto input = gf_test::random_keyed_store(rng);
    AstNode root;
    ASSERT_NO_THROW(root = parse(lang, input)) << input;
    EXPECT_TRUE(validate_ast(root, lang.mergedSchema).empty()) << input;
  }
}
