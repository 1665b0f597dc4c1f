#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "grammarforge/grammarforge.hpp"

namespace gf_test {

std::filesystem::path fixture_dir();
std::filesystem::path grammar_dir();
std::string fixture_text(const std::string& relative);

grammarforge::GrammarSet load_fixture_grammars(const std::vector<std::string>& qualifiedNames);
grammarforge::ComposedLanguage fixture_language(const std::string& qprod);
grammarforge::ComposedLanguage fixture_config_language(const std::string& configRelative);

// One line of corpus.txt.
struct CorpusEntry {
  std::string input;     // relative to fixture_dir()
  std::string grammar;   // qualified start production, or empty
  std::string config;    // relative config path, or empty
};

std::vector<CorpusEntry> load_corpus();
grammarforge::ComposedLanguage corpus_language(const CorpusEntry& entry);

}  // namespace gf_test
