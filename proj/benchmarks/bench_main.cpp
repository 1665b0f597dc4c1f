#include <benchmark/benchmark.h>

#include <filesystem>
#include <random>
#include <string>

#include "grammarforge/grammarforge.hpp"

using namespace grammarforge;

namespace {

const std::filesystem::path kGrammars = std::filesystem::path(GF_FIXTURE_DIR) / "grammars";

GrammarSet load(const std::vector<std::string>& names) {
  const std::filesystem::path dirs[] = {kGrammars};
  return load_grammars_by_name(names, dirs);
}

// n books and n journals, optionally with bibtex entries.
std::string store_text(int n, bool embedded) {
  std::mt19937_64 rng(1);
  std::string out = "bookstore Big {\n";
  for (int i = 0; i < n; ++i) {
    out += "  book " + std::to_string(i) + " \"Title " + std::to_string(rng() % 1000) + "\" by Ann Smith , Bob Lee";
    if (embedded) out += " @book{ k" + std::to_string(i) + ", year = 2013, publisher = \"p\" }";
    out += " ;\n  journal " + std::to_string(i) + " \"J\"";
    if (embedded) out += " @article{ j" + std::to_string(i) + ", journal = \"x\" }";
    out += " ;\n";
  }
  return out + "}\n";
}

void BM_Lex(benchmark::State& state) {
  auto set = load({"mc.examples.bookstore.Bookstore"});
  auto lexer = build_lexer(set.at("mc.examples.bookstore.Bookstore"), set);
  const auto text = store_text(static_cast<int>(state.range(0)), false);
  for (auto _ : state) {
    std::size_t pos = 0, count = 0;
    for (;;) {
      auto t = lexer.lex(text, pos);
      ++count;
      if (t.is_eof()) break;
      pos = t.end;
    }
    benchmark::DoNotOptimize(count);
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_Lex)->Arg(10)->Arg(1000);

void BM_ParseBookstore(benchmark::State& state) {
  LanguageLibrary lib(load({"mc.examples.bookstore.Bookstore"}));
  auto lang = lib.single("mc.examples.bookstore.Bookstore", "Bookstore");
  const auto text = store_text(static_cast<int>(state.range(0)), false);
  for (auto _ : state) benchmark::DoNotOptimize(parse(lang, text));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_ParseBookstore)->Arg(10)->Arg(1000);

void BM_ParseComposed(benchmark::State& state) {
  LanguageLibrary lib(load({"mc.examples.embedding.Bookstore", "mc.examples.bibtex.Bibtex"}));
  auto lang = lib.bind(parse_config("mc.examples.embedding.Bookstore.Bookstore bst <<start>>;\n"
                                    "mc.examples.bibtex.Bibtex.BibtexBook bibBook in bst.Bookentry;\n"
                                    "mc.examples.bibtex.Bibtex.BibtexJournal bibJrn in bst.Journalentry;\n"
                                    "interface example.IJournalEntry = key:Text;"));
  const auto text = store_text(static_cast<int>(state.range(0)), true);
  for (auto _ : state) benchmark::DoNotOptimize(parse(lang, text));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_ParseComposed)->Arg(10)->Arg(1000);

void BM_PrettyPrint(benchmark::State& state) {
  LanguageLibrary lib(load({"mc.examples.bookstore.Bookstore"}));
  auto lang = lib.single("mc.examples.bookstore.Bookstore", "Bookstore");
  const auto root = parse(lang, store_text(static_cast<int>(state.range(0)), false));
  for (auto _ : state) benchmark::DoNotOptimize(pretty_print(root, lang));
}
BENCHMARK(BM_PrettyPrint)->Arg(1000);

void BM_BindStore(benchmark::State& state) {
  auto set = load({"mc.examples.embedding.Bookstore", "mc.examples.bibtex.Bibtex"});
  const auto config = parse_config("mc.examples.embedding.Bookstore.Bookstore bst <<start>>;\n"
                                   "mc.examples.bibtex.Bibtex.BibtexBook bibBook in bst.Bookentry;\n"
                                   "mc.examples.bibtex.Bibtex.BibtexJournal bibJrn in bst.Journalentry;");
  for (auto _ : state) benchmark::DoNotOptimize(bind(config, set));
}
BENCHMARK(BM_BindStore);

}  // namespace
BENCHMARK_MAIN();
