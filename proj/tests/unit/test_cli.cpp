#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "fixtures.hpp"

using namespace grammarforge;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fx(const std::string& rel) { return (gf_test::fixture_dir() / rel).string(); }
std::string gdir() { return gf_test::grammar_dir().string(); }

fs::path temp_file(const std::string& name, const std::string& content) {
  auto dir = fs::temp_directory_path() / "grammarforge_cli_test";
  fs::create_directories(dir);
  auto p = dir / name;
  std::ofstream(p) << content;
  return p;
}

const char* const kStore = "mc.examples.bookstore.Bookstore.Bookstore";

}  // namespace

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run({}).code, cli::kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"parse", "--bogus", fx("inputs/bookstore_store.bs")}).code, cli::kExitUsage);
  EXPECT_EQ(run({"parse", "--path", gdir(), fx("inputs/bookstore_store.bs")}).code, cli::kExitUsage);
  EXPECT_EQ(run({"parse", "--start", kStore, fx("inputs/does_not_exist.bs")}).code, cli::kExitUsage);
  EXPECT_EQ(run({"tokens", "--path", gdir(), fx("inputs/bookstore_store.bs")}).code, cli::kExitUsage);
}

TEST(Cli, CheckCleanAndBrokenGrammars) {
  auto ok = run({"check", fx("grammars/mc/examples/bookstore/Bookstore.mc")});
  EXPECT_EQ(ok.code, cli::kExitOk);
  EXPECT_EQ(ok.out, "");

  auto bad = temp_file("Bad.mc", "grammar Bad {\n  A = \"a\" Missing ;\n}\n");
  auto r = run({"check", bad.string()});
  EXPECT_EQ(r.code, cli::kExitDomain);
  EXPECT_NE(r.out.find("ERROR"), std::string::npos);
  EXPECT_NE(r.out.find("UnknownNonterminal"), std::string::npos);
  EXPECT_NE(r.out.find(":2:"), std::string::npos);

  auto j = run({"check", "--json-errors", bad.string()});
  EXPECT_EQ(j.code, cli::kExitDomain);
  EXPECT_EQ(j.out.rfind("{", 0), 0u);
  EXPECT_NE(j.out.find("\"diagnostics\""), std::string::npos);

  auto syntax = temp_file("Syntax.mc", "grammar Syntax { A = ( ; }");
  EXPECT_EQ(run({"check", syntax.string()}).code, cli::kExitDomain);
}

TEST(Cli, ParseMatchesGolden) {
  auto r = run({"parse", "--path", gdir(), "--start", kStore, fx("inputs/bookstore_store.bs")});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_EQ(r.out, gf_test::fixture_text("golden/bookstore_store.json"));
  EXPECT_EQ(r.err, "");
}

TEST(Cli, ParseErrorsExitOne) {
  auto bad = temp_file("bad.bs", "bookstore S { magazine 1 \"x\" ; }");
  auto r = run({"parse", "--path", gdir(), "--start", kStore, bad.string()});
  EXPECT_EQ(r.code, cli::kExitDomain);
  EXPECT_EQ(r.out, "");
  EXPECT_NE(r.err.find("ParseError at 1:15"), std::string::npos) << r.err;

  auto j = run({"parse", "--json-errors", "--path", gdir(), "--start", kStore, bad.string()});
  EXPECT_EQ(j.code, cli::kExitDomain);
  EXPECT_NE(j.err.find("\"code\":\"ParseError\""), std::string::npos) << j.err;
  EXPECT_NE(j.err.find("\"offset\":14"), std::string::npos) << j.err;
  EXPECT_NE(j.err.find("\"found\":\"magazine\""), std::string::npos) << j.err;
}

TEST(Cli, ParseWithConfig) {
  auto r = run({"parse", "--compact", "--path", gdir(), "--config", fx("configs/keyed.cfg"),
                fx("inputs/keyed_mixed.bs")});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_NE(r.out.find("mc.examples.ris.Ris.RisJournal"), std::string::npos);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 1);
}

TEST(Cli, TokensTrace) {
  auto r = run({"tokens", "--path", gdir(), "--start", kStore, fx("inputs/bookstore_empty.bs")});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_EQ(r.out, "bookstore \"bookstore\" 0..9\nIDENT \"Empty\" 10..15\n{ \"{\" 16..17\n} \"}\" 18..19\n");

  auto cfg = run({"tokens", "--path", gdir(), "--config", fx("configs/store.cfg"), fx("inputs/emb_keywords.bs")});
  ASSERT_EQ(cfg.code, cli::kExitOk) << cfg.err;
  EXPECT_NE(cfg.out.find("IDENT \"journal\""), std::string::npos);
  EXPECT_NE(cfg.out.find("journal \"journal\""), std::string::npos);
}

TEST(Cli, ParsePrintParse) {
  for (const auto& entry : gf_test::load_corpus()) {
    std::vector<std::string> lang = entry.config.empty()
                                        ? std::vector<std::string>{"--start", entry.grammar}
                                        : std::vector<std::string>{"--config", fx(entry.config)};
    auto with = [&](std::vector<std::string> head, const std::string& file) {
      head.push_back("--path");
      head.push_back(gdir());
      head.insert(head.end(), lang.begin(), lang.end());
      head.push_back(file);
      return run(head);
    };
    auto first = with({"parse"}, fx(entry.input));
    ASSERT_EQ(first.code, cli::kExitOk) << entry.input << first.err;
    auto json = temp_file("ast.json", first.out);
    auto printed = with({"print"}, json.string());
    ASSERT_EQ(printed.code, cli::kExitOk) << entry.input << printed.err;
    auto text = temp_file("printed.txt", printed.out);
    auto second = with({"parse"}, text.string());
    ASSERT_EQ(second.code, cli::kExitOk) << entry.input << second.err;
    EXPECT_TRUE(structurally_equal(ast_from_json(first.out), ast_from_json(second.out))) << entry.input;
  }
}

TEST(Cli, SchemaAndConflicts) {
  auto s = run({"schema", "--path", gdir(), "--grammar", "mc.examples.bookstore.Bookstore"});
  ASSERT_EQ(s.code, cli::kExitOk) << s.err;
  auto schema = schema_from_json(s.out);
  EXPECT_EQ(schema.rootGrammar, "mc.examples.bookstore.Bookstore");
  EXPECT_EQ(schema.types.size(), 4u);

  auto merged = run({"schema", "--path", gdir(), "--config", fx("configs/store.cfg")});
  ASSERT_EQ(merged.code, cli::kExitOk) << merged.err;
  EXPECT_NE(merged.out.find("example.IJournalEntry"), std::string::npos);
  EXPECT_NE(merged.out.find("mc.examples.bibtex.Bibtex.BibtexJournal"), std::string::npos);

  auto c = run({"conflicts", "--path", gdir(), "--grammar", "conflicts.Decls"});
  EXPECT_EQ(c.code, cli::kExitOk);
  EXPECT_EQ(c.out, "Decl: choice 0/1 overlap on {IDENT}\n");
  auto none = run({"conflicts", "--path", gdir(), "--grammar", "mc.examples.bookstore.Bookstore"});
  EXPECT_EQ(none.code, cli::kExitOk);
  EXPECT_EQ(none.out, "");
}

TEST(Cli, MissingGrammarIsDomainError) {
  auto r = run({"schema", "--path", gdir(), "--grammar", "no.such.Grammar"});
  EXPECT_EQ(r.code, cli::kExitDomain);
  EXPECT_NE(r.err.find("error:"), std::string::npos);
}
