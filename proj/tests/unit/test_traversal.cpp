#include <gtest/gtest.h>

#include "fixtures.hpp"

using namespace grammarforge;

namespace {

VisitAction log_as(const std::string& what) {
  return [what](const AstNode& n, VisitContext& ctx) { ctx.log.push_back(what + " " + n.type); };
}

Handler both(const std::string& tag) { return Handler{log_as("pre:" + tag), log_as("post:" + tag)}; }

ErrorCode combine_error(std::vector<VisitorFragment> fragments, const Schema& schema) {
  try {
    combine(std::move(fragments), schema);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "combined";
  return ErrorCode::InvalidAst;
}

}  // namespace

TEST(Traverse, PreAndPostInCompositionOrder) {
  auto lang = gf_test::fixture_language("mc.examples.bookstore.Bookstore.Bookstore");
  auto root = parse(lang, "bookstore S { journal 1 \"J\" ; book 2 \"B\" by A B ; }");
  VisitorFragment f{"mc.examples.bookstore.Bookstore",
                    {{"Bookstore", both("s")}, {"Book", both("b")}, {"Journal", both("j")}, {"Person", both("p")}}};
  auto v = combine({f}, lang.mergedSchema);
  VisitContext ctx;
  traverse(root, v, ctx);
  const std::string p = "mc.examples.bookstore.Bookstore.";
  EXPECT_EQ(ctx.log, (std::vector<std::string>{
                         "pre:s " + p + "Bookstore", "pre:b " + p + "Book", "pre:p " + p + "Person",
                         "post:p " + p + "Person", "post:b " + p + "Book", "pre:j " + p + "Journal",
                         "post:j " + p + "Journal", "post:s " + p + "Bookstore"}));
}

TEST(Traverse, CombinedFragmentsAcrossEmbedding) {
  auto lang = gf_test::fixture_config_language("configs/store.cfg");
  auto root = parse(lang, gf_test::fixture_text("inputs/emb_minimal.bs"));
  VisitorFragment host{"mc.examples.embedding.Bookstore", {{"Book", {log_as("book"), nullptr}}}};
  VisitorFragment guest{"mc.examples.bibtex.Bibtex",
                        {{"mc.examples.bibtex.Bibtex.BibtexBook", {[](const AstNode& n, VisitContext& ctx) {
                            ctx.text += value_text(*n.value("key"));
                          }, nullptr}}}};
  auto v = combine({host, guest}, lang.mergedSchema);
  EXPECT_EQ(v.dispatch("mc.examples.bibtex.Bibtex.BibtexBook").fragment, "mc.examples.bibtex.Bibtex");
  EXPECT_EQ(v.dispatch("mc.examples.embedding.Bookstore.Book").fragment, "mc.examples.embedding.Bookstore");
  EXPECT_EQ(v.dispatch("mc.examples.embedding.Bookstore.Person").handler, nullptr);
  VisitContext ctx;
  traverse(root, v, ctx);
  EXPECT_EQ(ctx.log, std::vector<std::string>{"book mc.examples.embedding.Bookstore.Book"});
  EXPECT_EQ(ctx.text, "k");
}

TEST(Traverse, SupertypeFallback) {
  auto lang = gf_test::fixture_language("mc.examples.bookstore2.ExtendedBookstore.Bookstore");
  VisitorFragment base{"mc.examples.bookstore.Bookstore", {{"Journal", both("j")}}};
  auto v = combine({base}, lang.mergedSchema);
  const auto& r = v.dispatch("mc.examples.bookstore2.ExtendedBookstore.Journal");
  ASSERT_NE(r.handler, nullptr);
  EXPECT_EQ(r.handlerType, "mc.examples.bookstore.Bookstore.Journal");

  // an exact handler in the subgrammar's fragment wins
  VisitorFragment ext{"mc.examples.bookstore2.ExtendedBookstore", {{"Journal", both("x")}}};
  auto v2 = combine({base, ext}, lang.mergedSchema);
  EXPECT_EQ(v2.dispatch("mc.examples.bookstore2.ExtendedBookstore.Journal").fragment,
            "mc.examples.bookstore2.ExtendedBookstore");
  auto root = parse(lang, "bookstore S { journal 1 \"J\" editors A B ; }");
  VisitContext ctx;
  traverse(root, v2, ctx);
  ASSERT_EQ(ctx.log.size(), 2u);
  EXPECT_EQ(ctx.log[0].rfind("pre:x ", 0), 0u);
}

TEST(Traverse, InterfaceFallback) {
  auto lang = gf_test::fixture_language("mc.examples.items.Bookstore.Bookstore");
  VisitorFragment f{"mc.examples.items.Bookstore", {{"Item", both("i")}}};
  auto v = combine({f}, lang.mergedSchema);
  auto root = parse(lang, gf_test::fixture_text("inputs/items_mixed.bs"));
  VisitContext ctx;
  traverse(root, v, ctx);
  EXPECT_EQ(ctx.log.size(), 4u);
}

TEST(Combine, Errors) {
  auto lang = gf_test::fixture_language("mc.examples.bookstore.Bookstore.Bookstore");
  VisitorFragment a{"mc.examples.bookstore.Bookstore", {}};
  EXPECT_EQ(combine_error({a, a}, lang.mergedSchema), ErrorCode::DuplicateFragment);
  VisitorFragment bad{"mc.examples.bookstore.Bookstore", {{"Magazine", both("m")}}};
  EXPECT_EQ(combine_error({bad}, lang.mergedSchema), ErrorCode::InvalidHandler);
  // a type from another grammar cannot be handled by this fragment
  auto ext = gf_test::fixture_language("mc.examples.bookstore2.ExtendedBookstore.Bookstore");
  VisitorFragment foreign{"mc.examples.bookstore2.ExtendedBookstore",
                          {{"mc.examples.bookstore.Bookstore.Person", both("p")}}};
  EXPECT_EQ(combine_error({foreign}, ext.mergedSchema), ErrorCode::InvalidHandler);
}

TEST(Traverse, FragmentsAreIndependent) {
  auto lang = gf_test::fixture_config_language("configs/store.cfg");
  auto root = parse(lang, gf_test::fixture_text("inputs/emb_store.bs"));
  VisitorFragment host{"mc.examples.embedding.Bookstore", {{"Person", both("p")}, {"Journal", both("j")}}};
  VisitorFragment guest{"mc.examples.bibtex.Bibtex", {{"Field", both("f")}}};
  VisitContext hostOnly, guestOnly, together;
  traverse(root, combine({host}, lang.mergedSchema), hostOnly);
  traverse(root, combine({guest}, lang.mergedSchema), guestOnly);
  traverse(root, combine({guest, host}, lang.mergedSchema), together);
  EXPECT_EQ(together.log.size(), hostOnly.log.size() + guestOnly.log.size());
  // the host-only and guest-only logs are subsequences of the combined one
  auto subsequence = [](const std::vector<std::string>& part, const std::vector<std::string>& whole) {
    std::size_t i = 0;
    for (const auto& s : whole) {
      if (i < part.size() && part[i] == s) ++i;
    }
    return i == part.size();
  };
  EXPECT_TRUE(subsequence(hostOnly.log, together.log));
  EXPECT_TRUE(subsequence(guestOnly.log, together.log));
}

// Each node is entered and left exactly once.
TEST(Traverse, VisitCountsMatchSubtreeSize) {
  for (const auto& entry : gf_test::load_corpus()) {
    auto lang = gf_test::corpus_language(entry);
    auto root = parse(lang, gf_test::fixture_text(entry.input));
    std::vector<VisitorFragment> fragments;
    std::set<std::string> grammars;
    for (const auto& [name, type] : lang.mergedSchema.types) {
      if (type.kind == TypeKind::Concrete) grammars.insert(type.package);
    }
    for (const auto& g : grammars) {
      VisitorFragment f{g, {}};
      for (const auto& [name, type] : lang.mergedSchema.types) {
        if (type.package == g && type.kind == TypeKind::Concrete) f.handlers[name] = both("n");
      }
      fragments.push_back(std::move(f));
    }
    auto v = combine(std::move(fragments), lang.mergedSchema);
    VisitContext ctx;
    traverse(root, v, ctx);
    EXPECT_EQ(ctx.log.size(), 2 * root.subtree_size()) << entry.input;
  }
}

TEST(PrettyPrint, Examples) {
  auto store = gf_test::fixture_language("mc.examples.bookstore.Bookstore.Bookstore");
  const std::string storeText = "bookstore Store { book 12 \"DSL Engineering\" by Ann Smith , Bob Lee ; journal 7 \"SoSyM\" ; }";
  EXPECT_EQ(pretty_print(parse(store, storeText), store), storeText);
  EXPECT_EQ(pretty_print(parse(store, "bookstore\n E\n{}"), store), "bookstore E { }");

  auto emb = gf_test::fixture_config_language("configs/store.cfg");
  EXPECT_EQ(pretty_print(parse(emb, gf_test::fixture_text("inputs/emb_minimal.bs")), emb),
            "bookstore M { book 1 \"T\" by A B @book { k } ; }");

  auto decls = gf_test::fixture_language("conflicts.Decls.Program");
  EXPECT_EQ(pretty_print(parse(decls, "a;int b;"), decls), "a ; int b ;");

  auto bib = gf_test::fixture_language("mc.examples.bibtex.Bibtex.BibtexBook");
  EXPECT_EQ(pretty_print(parse(bib, "@book{k,t=\"a \\\"b\\\"\"}"), bib), "@book { k , t = \"a \\\"b\\\"\" }");
}

TEST(PrettyPrint, UnprintableNode) {
  auto store = gf_test::fixture_language("mc.examples.bookstore.Bookstore.Bookstore");
  AstNode n;
  n.type = "no.Such.Type";
  EXPECT_THROW(pretty_print(n, store), Error);
  // a Book without its required authors
  auto book = make_node(*store.mergedSchema.find("mc.examples.bookstore.Bookstore.Book"));
  book.attribute("id")->values.push_back(std::int64_t{1});
  book.attribute("title")->values.push_back(std::string("T"));
  try {
    pretty_print(book, store);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnprintableNode);
  }
}

TEST(PrettyPrint, CorpusRoundTrip) {
  for (const auto& entry : gf_test::load_corpus()) {
    auto lang = gf_test::corpus_language(entry);
    auto first = parse(lang, gf_test::fixture_text(entry.input));
    const auto printed = pretty_print(first, lang);
    auto second = parse(lang, printed);
    EXPECT_TRUE(structurally_equal(first, second)) << entry.input << "\n" << printed;
    EXPECT_EQ(pretty_print(second, lang), printed);
  }
}

TEST(AstJson, RoundTripWithSchema) {
  for (const auto& entry : gf_test::load_corpus()) {
    auto lang = gf_test::corpus_language(entry);
    auto root = parse(lang, gf_test::fixture_text(entry.input));
    EXPECT_EQ(ast_from_json(ast_to_json(root), &lang.mergedSchema), root) << entry.input;
    EXPECT_EQ(ast_to_json(ast_from_json(ast_to_json(root, -1)), -1), ast_to_json(root, -1)) << entry.input;
  }
  EXPECT_THROW(ast_from_json("{\"type\":1}"), Error);
  EXPECT_THROW(ast_from_json("[1,2"), Error);
}
