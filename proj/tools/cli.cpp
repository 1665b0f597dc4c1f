#include "cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <memory>
#include <nlohmann/json.hpp>
#include <optional>
#include <ostream>

#include "grammarforge/grammarforge.hpp"

namespace grammarforge::cli {

namespace fs = std::filesystem;

namespace {

struct Invocation {
  std::string command;
  std::vector<std::string> paths;
  std::string config;
  std::string grammar;
  std::string start;
  bool jsonErrors = false;
  bool compact = false;
  std::string file;

  std::vector<fs::path> search_dirs() const { return {paths.begin(), paths.end()}; }
  int indent() const { return compact ? -1 : 2; }
};

// Thrown for missing option combinations that CLI11 cannot express.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Loaded {
  std::shared_ptr<const GrammarSet> set;
  std::optional<ComposedLanguage> language;
  const GrammarDef* grammar = nullptr;
};

void report(const Invocation& inv, std::ostream& err, const Error& e, const std::string& file) {
  if (inv.jsonErrors) {
    nlohmann::json j{{"code", std::string(to_string(e.code()))}, {"message", e.message()}};
    if (!file.empty()) j["file"] = file;
    if (e.pos()) {
      j["offset"] = e.pos()->offset;
      j["line"] = e.pos()->line;
      j["column"] = e.pos()->column;
    }
    if (!e.expected.empty()) j["expected"] = e.expected;
    if (!e.found.empty()) j["found"] = e.found;
    err << nlohmann::json{{"error", j}}.dump() << "\n";
    return;
  }
  err << "error: " << (file.empty() ? "" : file + ": ") << e.what() << "\n";
}

void print_diagnostics(const Invocation& inv, std::ostream& out, const std::vector<Diagnostic>& diags) {
  if (inv.jsonErrors) {
    auto arr = nlohmann::json::array();
    for (const auto& d : diags) {
      arr.push_back({{"severity", d.severity == Severity::Error ? "error" : "warning"},
                     {"file", d.file},
                     {"line", d.line},
                     {"column", d.column},
                     {"code", d.code},
                     {"message", d.message}});
    }
    out << nlohmann::json{{"diagnostics", arr}}.dump(inv.compact ? -1 : 2) << "\n";
    return;
  }
  for (const auto& d : diags) out << format(d) << "\n";
}

QualifiedProduction start_production(const Invocation& inv) {
  if (inv.start.empty()) throw UsageError("--start is required");
  if (inv.start.find('.') != std::string::npos) {
    auto q = split_qualified_production(inv.start);
    if (!inv.grammar.empty() && q.grammar != inv.grammar) {
      throw UsageError("--start " + inv.start + " does not belong to --grammar " + inv.grammar);
    }
    return q;
  }
  if (inv.grammar.empty()) throw UsageError("--grammar is required when --start is not qualified");
  return {inv.grammar, inv.start};
}

std::vector<fs::path> with_fallback(std::vector<fs::path> dirs, const fs::path& extra) {
  dirs.push_back(extra);
  return dirs;
}

// Grammar named by FILE or --grammar, for the grammar-level commands.
Loaded load_grammar(const Invocation& inv) {
  Loaded l;
  if (!inv.file.empty()) {
    const fs::path file(inv.file);
    auto def = parse_grammar(read_file(file), file.string());
    const fs::path roots[] = {file};
    l.set = std::make_shared<GrammarSet>(
        load_grammar_set(roots, with_fallback(inv.search_dirs(), file.parent_path().empty() ? "." : file.parent_path())));
    l.grammar = l.set->find(def.qualified_name());
    return l;
  }
  if (inv.grammar.empty()) throw UsageError("a grammar FILE or --grammar is required");
  const std::string names[] = {inv.grammar};
  l.set = std::make_shared<GrammarSet>(load_grammars_by_name(names, with_fallback(inv.search_dirs(), ".")));
  l.grammar = l.set->find(inv.grammar);
  return l;
}

// A runnable language from --config, or from --grammar/--start.
Loaded load_language(const Invocation& inv) {
  Loaded l;
  if (!inv.config.empty()) {
    const fs::path cfgPath(inv.config);
    auto config = parse_config(read_file(cfgPath), cfgPath.string());
    std::vector<std::string> names;
    if (config.start) names.push_back(config.start->production.grammar);
    for (const auto& e : config.embeddings) names.push_back(e.source.grammar);
    auto dirs = with_fallback(inv.search_dirs(), cfgPath.parent_path().empty() ? "." : cfgPath.parent_path());
    LanguageLibrary lib(load_grammars_by_name(names, dirs));
    l.set = lib.shared_set();
    l.language = lib.bind(config);
    return l;
  }
  auto q = start_production(inv);
  const std::string names[] = {q.grammar};
  LanguageLibrary lib(load_grammars_by_name(names, with_fallback(inv.search_dirs(), ".")));
  l.set = lib.shared_set();
  l.language = lib.single(q.grammar, q.production);
  return l;
}

void print_warnings(const Invocation& inv, std::ostream& err, const ComposedLanguage& lang) {
  if (inv.jsonErrors) return;
  for (const auto& w : lang.warnings) err << format(w) << "\n";
}

int cmd_check(const Invocation& inv, std::ostream& out) {
  std::vector<Diagnostic> diags;
  try {
    auto l = load_grammar(inv);
    diags = validate_grammar(*l.grammar, *l.set);
    if (!has_errors(diags)) {
      try {
        derive_schema(*l.grammar, *l.set);
      } catch (const Error& e) {
        Diagnostic d;
        d.file = l.grammar->sourcePath;
        if (e.pos()) {
          d.line = e.pos()->line;
          d.column = e.pos()->column;
        }
        d.code = std::string(to_string(e.code()));
        d.message = e.message();
        diags.push_back(std::move(d));
      }
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::IoError) throw;
    Diagnostic d;
    d.file = inv.file;
    if (e.pos()) {
      d.line = e.pos()->line;
      d.column = e.pos()->column;
    }
    d.code = std::string(to_string(e.code()));
    d.message = e.message();
    diags.push_back(std::move(d));
  }
  print_diagnostics(inv, out, diags);
  return has_errors(diags) ? kExitDomain : kExitOk;
}

int cmd_schema(const Invocation& inv, std::ostream& out, std::ostream& err) {
  if (!inv.config.empty()) {
    auto l = load_language(inv);
    print_warnings(inv, err, *l.language);
    out << schema_to_json(l.language->mergedSchema, inv.indent()) << "\n";
    return kExitOk;
  }
  auto l = load_grammar(inv);
  out << schema_to_json(derive_schema(*l.grammar, *l.set), inv.indent()) << "\n";
  return kExitOk;
}

int cmd_conflicts(const Invocation& inv, std::ostream& out) {
  auto l = load_grammar(inv);
  auto reports = analyze_conflicts(*l.grammar, *l.set);
  if (inv.jsonErrors) {
    auto arr = nlohmann::json::array();
    for (const auto& r : reports) {
      arr.push_back({{"production", r.production},
                     {"decision", r.decision},
                     {"alternatives", r.alternatives},
                     {"overlap", r.overlap}});
    }
    out << arr.dump(inv.indent()) << "\n";
  } else {
    for (const auto& r : reports) out << format(r) << "\n";
  }
  return kExitOk;
}

int cmd_parse(const Invocation& inv, std::ostream& out, std::ostream& err) {
  if (inv.file.empty()) throw UsageError("parse needs an input FILE");
  auto l = load_language(inv);
  print_warnings(inv, err, *l.language);
  const auto input = read_file(inv.file);
  try {
    auto ast = parse(*l.language, input);
    out << ast_to_json(ast, inv.indent()) << "\n";
  } catch (const Error& e) {
    report(inv, err, e, inv.file);
    return kExitDomain;
  }
  return kExitOk;
}

int cmd_tokens(const Invocation& inv, std::ostream& out, std::ostream& err) {
  if (inv.file.empty()) throw UsageError("tokens needs an input FILE");
  if (inv.config.empty() && (inv.start.empty() || (inv.grammar.empty() && inv.start.find('.') == std::string::npos))) {
    throw UsageError("tokens needs --grammar and --start");
  }
  auto l = load_language(inv);
  ParseOptions opts;
  opts.trace = true;
  ParseSession session(*l.language, read_file(inv.file), opts);
  int status = kExitOk;
  try {
    session.run();
  } catch (const Error& e) {
    report(inv, err, e, inv.file);
    status = kExitDomain;
  }
  for (const auto& t : session.trace().tokens) {
    out << t.token.kind << " " << quote(t.token.text) << " " << t.token.start << ".." << t.token.end << "\n";
  }
  return status;
}

int cmd_print(const Invocation& inv, std::ostream& out, std::ostream& err) {
  if (inv.file.empty()) throw UsageError("print needs an AST JSON FILE");
  const auto text = read_file(inv.file);
  try {
    if (!inv.config.empty() || !inv.start.empty()) {
      auto l = load_language(inv);
      auto ast = ast_from_json(text, &l.language->mergedSchema);
      out << pretty_print(ast, *l.language) << "\n";
      return kExitOk;
    }
    auto l = load_grammar(Invocation{inv.command, inv.paths, {}, inv.grammar, {}, inv.jsonErrors, inv.compact, {}});
    auto schema = derive_schema(*l.grammar, *l.set);
    auto ast = ast_from_json(text, &schema);
    out << pretty_print(ast, schema, *l.set) << "\n";
  } catch (const Error& e) {
    if (e.code() == ErrorCode::IoError) throw;
    report(inv, err, e, inv.file);
    return kExitDomain;
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Invocation inv;
  CLI::App app{"Grammar inheritance, composition and parsing", "grammarforge"};
  app.require_subcommand(1);

  const std::pair<const char*, const char*> commands[] = {
      {"check", "Validate a grammar and derive its schema"},
      {"schema", "Print the abstract syntax schema as JSON"},
      {"conflicts", "List prediction conflicts of a grammar"},
      {"parse", "Parse an input file and print its AST as JSON"},
      {"tokens", "Dump the tokens consumed while parsing an input file"},
      {"print", "Pretty-print an AST JSON file back to source text"},
  };
  for (const auto& [name, desc] : commands) {
    auto* sub = app.add_subcommand(name, desc);
    sub->add_option("--path", inv.paths, "Grammar search directory")
        ->check(CLI::ExistingDirectory)
        ->allow_extra_args(false);
    sub->add_option("--config", inv.config, "Composition file")->check(CLI::ExistingFile);
    sub->add_option("--grammar", inv.grammar, "Qualified grammar name");
    sub->add_option("--start", inv.start, "Start production (PROD or grammar.PROD)");
    sub->add_flag("--json-errors", inv.jsonErrors, "Report errors as JSON");
    sub->add_flag("--compact", inv.compact, "Single-line JSON output");
    sub->add_option("FILE", inv.file, "Grammar, input or AST file")->check(CLI::ExistingFile);
    sub->callback([&inv, sub] { inv.command = sub->get_name(); });
  }

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (inv.command == "check") return cmd_check(inv, out);
    if (inv.command == "schema") return cmd_schema(inv, out, err);
    if (inv.command == "conflicts") return cmd_conflicts(inv, out);
    if (inv.command == "parse") return cmd_parse(inv, out, err);
    if (inv.command == "tokens") return cmd_tokens(inv, out, err);
    if (inv.command == "print") return cmd_print(inv, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    report(inv, err, e, {});
    return kExitDomain;
  }
  return kExitUsage;
}

}  // namespace grammarforge::cli
