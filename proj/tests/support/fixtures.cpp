#include "fixtures.hpp"

#include <fstream>
#include <sstream>

#ifndef GF_FIXTURE_DIR
#error "GF_FIXTURE_DIR must be defined"
#endif

namespace gf_test {

using namespace grammarforge;

std::filesystem::path fixture_dir() { return GF_FIXTURE_DIR; }
std::filesystem::path grammar_dir() { return fixture_dir() / "grammars"; }

std::string fixture_text(const std::string& relative) { return read_file(fixture_dir() / relative); }

GrammarSet load_fixture_grammars(const std::vector<std::string>& qualifiedNames) {
  const std::filesystem::path dirs[] = {grammar_dir()};
  return load_grammars_by_name(qualifiedNames, dirs);
}

ComposedLanguage fixture_language(const std::string& qprod) {
  auto q = split_qualified_production(qprod);
  LanguageLibrary lib(load_fixture_grammars({q.grammar}));
  return lib.single(q.grammar, q.production);
}

ComposedLanguage fixture_config_language(const std::string& configRelative) {
  auto config = parse_config(fixture_text(configRelative), configRelative);
  std::vector<std::string> names;
  if (config.start) names.push_back(config.start->production.grammar);
  for (const auto& e : config.embeddings) names.push_back(e.source.grammar);
  return bind(config, load_fixture_grammars(names));
}

std::vector<CorpusEntry> load_corpus() {
  std::istringstream in(fixture_text("corpus.txt"));
  std::vector<CorpusEntry> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string input, lang;
    fields >> input >> lang;
    CorpusEntry e;
    e.input = input;
    if (lang.rfind("grammar=", 0) == 0) e.grammar = lang.substr(8);
    else if (lang.rfind("config=", 0) == 0) e.config = lang.substr(7);
    out.push_back(std::move(e));
  }
  return out;
}

ComposedLanguage corpus_language(const CorpusEntry& entry) {
  return entry.config.empty() ? fixture_language(entry.grammar) : fixture_config_language(entry.config);
}

}  // namespace gf_test
