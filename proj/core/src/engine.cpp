#include "grammarforge/engine.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace grammarforge {

namespace {

struct Frame {
  const FragmentInstance* frag = nullptr;
  const ProductionDef* production = nullptr;
  AstNode node;
  std::size_t entry = 0;
  std::optional<std::size_t> lo;
  std::size_t hi = 0;
  // Raw source text of filled slots, for scripts and selectors.
  std::vector<std::pair<std::string, std::string>> raw;

  void cover(std::size_t start, std::size_t end) {
    lo = lo ? std::min(*lo, start) : start;
    hi = std::max(hi, end);
  }
  const std::string* raw_text(const std::string& name) const {
    for (auto it = raw.rbegin(); it != raw.rend(); ++it) {
      if (it->first == name) return &it->second;
    }
    return nullptr;
  }
};

struct Checkpoint {
  std::vector<std::size_t> attrSizes;
  std::vector<std::size_t> childSizes;
  std::optional<std::size_t> lo;
  std::size_t hi = 0;
  std::size_t rawSize = 0;
  std::size_t traceSize = 0;
  std::size_t consumedSize = 0;
  std::map<std::string, std::string> globals;
};

// Outcome of one production at one position, replayed instead of parsed
// again when backtracking comes back to the same spot.
struct MemoKey {
  const FragmentInstance* frag;
  const ProductionDef* production;
  std::size_t pos;
  bool operator==(const MemoKey&) const = default;
};

struct MemoKeyHash {
  std::size_t operator()(const MemoKey& k) const noexcept {
    auto h = std::hash<const void*>()(k.frag);
    h = h * 31 + std::hash<const void*>()(k.production);
    return h * 31 + std::hash<std::size_t>()(k.pos);
  }
};

struct MemoEntry {
  bool ok = false;
  AstNode node;
  std::vector<Token> tokens;
};

struct Failure {
  bool set = false;
  std::size_t pos = 0;
  Token found;
  std::vector<std::pair<const LexerInstance*, KindSet>> expected;
};

}  // namespace

struct ParseSession::Impl {
  const ComposedLanguage& lang;
  ParseOptions options;
  CharQueue queue;
  ParseTrace trace;
  std::map<std::string, std::string> globals;

  // Lookahead cache of the current lexer, keyed by lex start position.
  std::unordered_map<std::size_t, Token> cache;
  std::unordered_map<std::size_t, std::string> lexErrors;
  std::size_t windowEnd = 0;
  std::optional<std::size_t> pendingSwitch;
  const FragmentInstance* lexerOwner = nullptr;

  Failure failure;
  std::size_t depth = 0;
  std::unordered_map<std::string, AstNode> templates;
  std::unordered_map<const RhsNode*, std::string> slotNames;
  std::unordered_map<const ProductionDef*, std::unordered_set<std::string>> rawNames;

  std::vector<Token> consumed;  // tokens of the current derivation path
  std::size_t scriptsRun = 0;
  std::unordered_map<MemoKey, MemoEntry, MemoKeyHash> memo;

  Impl(const ComposedLanguage& l, std::string input, ParseOptions o)
      : lang(l), options(o), queue(std::move(input)) {
    queue.set_logging(options.logQueue);
  }

  // -------------------------------------------------------------------------
  // Tokens

  const Token& peek(const FragmentInstance& frag) {
    if (lexerOwner != &frag) {
      // Same position, different lexer (e.g. an embedded fragment returned
      // without consuming): never reuse the other lexer's tokens.
      cache.clear();
      lexerOwner = &frag;
    }
    const std::size_t pos = queue.cursor();
    auto it = cache.find(pos);
    if (it != cache.end()) return it->second;
    if (pendingSwitch) {
      auto& sw = trace.switches[*pendingSwitch];
      sw.firstLexPos = pos;
      sw.lexedAfter = true;
      pendingSwitch.reset();
    }
    Token tok;
    try {
      tok = lex_at(*frag.lexer, queue, pos);
    } catch (const Error& e) {
      auto at = e.pos() ? e.pos()->offset : pos;
      tok.id = LexerInstance::kErrorId;
      tok.kind = std::string(kErrorKind);
      tok.start = at;
      tok.end = std::min(queue.size(), at + 1);
      tok.text = std::string(queue.buffer().substr(tok.start, tok.end - tok.start));
      lexErrors[at] = e.message();
    }
    windowEnd = std::max(windowEnd, tok.end);
    return cache.emplace(pos, std::move(tok)).first->second;
  }

  void consume(Frame& f, const Token& tok) {
    queue.consume(tok);
    f.cover(tok.start, tok.end);
    consumed.push_back(tok);
    if (options.trace) trace.tokens.push_back({f.frag->alias, tok});
  }

  void expect(const LexerInstance& lexer, const KindSet& set, const Token& tok) {
    if (!failure.set || tok.start > failure.pos) {
      failure.set = true;
      failure.pos = tok.start;
      failure.found = tok;
      failure.expected.clear();
    }
    if (tok.start == failure.pos && failure.expected.size() < 64) failure.expected.emplace_back(&lexer, set);
  }

  void expect_id(const LexerInstance& lexer, int id, const Token& tok) {
    if (failure.set && tok.start < failure.pos) return;
    KindSet s(lexer.kind_count());
    if (id >= 0) s.insert(id);
    expect(lexer, s, tok);
  }

  [[noreturn]] void throw_failure() {
    const auto pos = failure.set ? failure.pos : queue.cursor();
    const auto where = locate(queue.buffer(), pos);
    if (failure.set && failure.found.is_error()) {
      throw Error(ErrorCode::LexError, lexErrors.count(pos) ? lexErrors[pos] : "cannot tokenize input", where);
    }
    std::set<std::string> names;
    for (const auto& [lexer, set] : failure.expected) {
      for (int id : set.ids()) names.insert(id == LexerInstance::kEofId ? "end of input" : lexer->kind_name(id));
      if (set.any()) names.insert("embedded text");
    }
    std::string found = failure.found.is_eof() ? "end of input" : "'" + failure.found.text + "'";
    std::string msg = "unexpected " + found;
    if (!names.empty()) {
      msg += ", expected ";
      std::size_t i = 0;
      for (const auto& n : names) msg += (i++ ? ", " : "") + n;
    }
    Error err(ErrorCode::ParseError, msg, where);
    err.expected = std::move(names);
    err.found = failure.found.is_eof() ? std::string(kEofKind) : failure.found.text;
    throw err;
  }

  // -------------------------------------------------------------------------
  // Frames and speculation

  const std::string& slot_of(const RhsNode& node) {
    auto it = slotNames.find(&node);
    if (it != slotNames.end()) return it->second;
    std::string name;
    if (const auto* l = std::get_if<LexerRef>(&node.value)) name = slot_name(*l);
    if (const auto* n = std::get_if<NonterminalRef>(&node.value)) name = slot_name(*n);
    return slotNames.emplace(&node, std::move(name)).first->second;
  }

  const std::unordered_set<std::string>& raw_names(const ProductionDef* p) {
    auto it = rawNames.find(p);
    if (it != rawNames.end()) return it->second;
    std::unordered_set<std::string> names;
    for_each_node(p->rhs, [&](const RhsNode& node) {
      if (const auto* s = std::get_if<Script>(&node.value)) names.insert(s->action.sourceAttribute);
      if (const auto* n = std::get_if<NonterminalRef>(&node.value)) {
        if (n->selector && n->selector->kind == EmbedSelector::Kind::LocalAttribute) names.insert(n->selector->name);
      }
    });
    return rawNames.emplace(p, std::move(names)).first->second;
  }

  void note_raw(Frame& f, const std::string& name, std::string text) {
    if (raw_names(f.production).count(name)) f.raw.emplace_back(name, std::move(text));
  }

  Checkpoint save(const Frame& f) const {
    Checkpoint cp;
    for (const auto& a : f.node.attributes) cp.attrSizes.push_back(a.values.size());
    for (const auto& c : f.node.children) cp.childSizes.push_back(c.nodes.size());
    cp.lo = f.lo;
    cp.hi = f.hi;
    cp.rawSize = f.raw.size();
    cp.traceSize = trace.tokens.size();
    cp.consumedSize = consumed.size();
    cp.globals = globals;
    return cp;
  }

  void restore(Frame& f, Checkpoint& cp) {
    for (std::size_t i = 0; i < cp.attrSizes.size(); ++i) f.node.attributes[i].values.resize(cp.attrSizes[i]);
    for (std::size_t i = 0; i < cp.childSizes.size(); ++i) {
      f.node.children[i].nodes.erase(f.node.children[i].nodes.begin() + static_cast<std::ptrdiff_t>(cp.childSizes[i]),
                                     f.node.children[i].nodes.end());
    }
    f.lo = cp.lo;
    f.hi = cp.hi;
    f.raw.resize(cp.rawSize);
    trace.tokens.resize(cp.traceSize);
    consumed.resize(cp.consumedSize);
    globals = std::move(cp.globals);
  }

  template <typename Fn>
  bool speculate(Frame& f, Fn&& attempt) {
    auto cp = save(f);
    queue.mark();
    if (attempt()) {
      queue.release();
      return true;
    }
    queue.rewind();
    restore(f, cp);
    return false;
  }

  // Ordered choice with one-token prediction: alternatives that cannot start
  // with the next token are skipped; of the rest, all but the last are tried
  // speculatively.
  template <typename Info, typename Fn>
  bool choose(Frame& f, const std::vector<Info>& infos, Fn&& attempt) {
    const auto& lexer = *f.frag->lexer;
    const Token& t = peek(*f.frag);
    const int id = t.id;
    std::vector<std::size_t> candidates;
    KindSet all(lexer.kind_count());
    for (std::size_t i = 0; i < infos.size(); ++i) {
      all.merge(infos[i].first);
      if (infos[i].first.admits(id) || infos[i].nullable) candidates.push_back(i);
    }
    if (candidates.empty()) {
      expect(lexer, all, t);
      return false;
    }
    for (std::size_t k = 0; k + 1 < candidates.size(); ++k) {
      if (speculate(f, [&] { return attempt(candidates[k]); })) return true;
    }
    return attempt(candidates.back());
  }

  // -------------------------------------------------------------------------
  // Grammar interpretation

  // Memoized unless the production ran scripts or crossed into another
  // fragment: those depend on more than the position.
  bool parse_production(const FragmentInstance& frag, const ProductionDef* p, const std::string& typeName,
                        AstNode& out) {
    const MemoKey key{&frag, p, queue.cursor()};
    // Right after a lexer switch the next lexing position is being recorded,
    // so parse for real.
    if (!pendingSwitch) {
      auto it = memo.find(key);
      if (it != memo.end()) {
        if (!it->second.ok) return false;
        for (const auto& tok : it->second.tokens) {
          queue.consume(tok);
          consumed.push_back(tok);
          if (options.trace) trace.tokens.push_back({frag.alias, tok});
        }
        out = it->second.node;
        return true;
      }
    }
    // Committed parsing never comes back to the same position with progress,
    // so only speculative results are worth keeping.
    const bool record = queue.speculating();
    const auto consumedBefore = consumed.size();
    const auto scriptsBefore = scriptsRun;
    const auto switchesBefore = trace.switches.size();
    bool ok = parse_production_body(frag, p, typeName, out);
    if (record && scriptsRun == scriptsBefore && trace.switches.size() == switchesBefore) {
      MemoEntry e;
      e.ok = ok;
      if (ok) {
        e.node = out;
        e.tokens.assign(consumed.begin() + static_cast<std::ptrdiff_t>(consumedBefore), consumed.end());
      }
      memo.insert_or_assign(key, std::move(e));
    }
    return ok;
  }

  bool parse_production_body(const FragmentInstance& frag, const ProductionDef* p, const std::string& typeName,
                             AstNode& out) {
    if (++depth > options.maxDepth) {
      throw Error(ErrorCode::RecursionLimit,
                  "nesting deeper than " + std::to_string(options.maxDepth) + " productions (left recursion?)",
                  locate(queue.buffer(), queue.cursor()));
    }
    Frame f;
    f.frag = &frag;
    f.production = p;
    f.node = node_template(frag, typeName);
    f.entry = queue.cursor();
    bool ok = parse_choice(f, p->rhs);
    --depth;
    if (!ok) return false;
    f.node.span = f.lo ? Span{*f.lo, f.hi} : Span{f.entry, f.entry};
    out = std::move(f.node);
    return true;
  }

  AstNode node_template(const FragmentInstance& frag, const std::string& typeName) {
    auto it = templates.find(typeName);
    if (it != templates.end()) return it->second;
    const auto* type = frag.schema->find(typeName);
    if (!type) type = lang.mergedSchema.find(typeName);
    if (!type) throw Error(ErrorCode::UnresolvedType, "no node type '" + typeName + "'");
    return templates.emplace(typeName, make_node(*type)).first->second;
  }

  bool parse_choice(Frame& f, const Block& b) {
    const auto& info = f.frag->analysis->block(&b);
    if (b.alternatives.size() == 1) return parse_seq(f, b.alternatives.front());
    return choose(f, info.alternatives, [&](std::size_t i) { return parse_seq(f, b.alternatives[i]); });
  }

  bool parse_seq(Frame& f, const Sequence& seq) {
    for (const auto& node : seq) {
      if (!parse_node(f, node)) return false;
    }
    return true;
  }

  // Decides whether an optional part or another loop iteration is entered.
  // Returns nullopt to skip it, otherwise whether to speculate.
  std::optional<bool> enter(Frame& f, const BlockInfo& info) {
    const Token& t = peek(*f.frag);
    if (!info.first.admits(t.id) && !info.nullable) {
      expect(*f.frag->lexer, info.first, t);
      return std::nullopt;
    }
    // Committed and the token cannot follow the block: a failure of the body
    // would fail the whole parse anyway, so no need to keep a way back.
    return queue.speculating() || info.follow.admits(t.id);
  }

  bool parse_block(Frame& f, const Block& b) {
    const auto& info = f.frag->analysis->block(&b);
    switch (b.repetition) {
      case Repetition::One: return parse_choice(f, b);
      case Repetition::Optional: {
        auto mode = enter(f, info);
        if (!mode) return true;
        if (!*mode) return parse_choice(f, b);
        speculate(f, [&] { return parse_choice(f, b); });
        return true;
      }
      case Repetition::Plus:
        if (!parse_choice(f, b)) return false;
        [[fallthrough]];
      case Repetition::Star:
        for (;;) {
          auto mode = enter(f, info);
          if (!mode) return true;
          const auto before = queue.cursor();
          if (!*mode) {
            auto cp = save(f);
            if (!parse_choice(f, b)) return false;
            if (queue.cursor() == before) {
              restore(f, cp);
              return true;
            }
            continue;
          }
          bool progressed = speculate(f, [&] {
            if (!parse_choice(f, b)) return false;
            return queue.cursor() != before;
          });
          if (!progressed) return true;
        }
    }
    return false;
  }

  bool parse_node(Frame& f, const RhsNode& node) {
    const auto& analysis = *f.frag->analysis;
    const auto& lexer = *f.frag->lexer;
    if (const auto* kw = std::get_if<Keyword>(&node.value)) {
      const int id = lexer.kind_id(kw->text);
      const Token& t = peek(*f.frag);
      if (t.id != id || id < 0) {
        expect_id(lexer, id, t);
        return false;
      }
      consume(f, t);
      return true;
    }
    if (const auto* lex = std::get_if<LexerRef>(&node.value)) {
      const int id = analysis.ref(lex->rule).tokenId;
      const Token& t = peek(*f.frag);
      if (t.id != id || id < 0) {
        expect_id(lexer, id, t);
        return false;
      }
      const Token tok = t;
      consume(f, tok);
      const auto& name = slot_of(node);
      if (auto* slot = f.node.attribute(name)) slot->values.push_back(tok.value);
      note_raw(f, name, tok.text);
      return true;
    }
    if (const auto* nt = std::get_if<NonterminalRef>(&node.value)) return parse_reference(f, node, *nt);
    if (const auto* b = std::get_if<Block>(&node.value)) return parse_block(f, *b);
    if (const auto* s = std::get_if<Script>(&node.value)) {
      ++scriptsRun;
      if (const auto* text = f.raw_text(s->action.sourceAttribute)) globals[s->action.targetVariable] = *text;
      return true;
    }
    return false;
  }

  void add_child(Frame& f, const RhsNode& node, AstNode child) {
    f.cover(child.span.start, child.span.end);
    const auto& name = slot_of(node);
    if (raw_names(f.production).count(name)) {
      note_raw(f, name, std::string(queue.buffer().substr(child.span.start, child.span.end - child.span.start)));
    }
    if (auto* slot = f.node.child(name)) slot->nodes.push_back(std::move(child));
  }

  bool parse_reference(Frame& f, const RhsNode& node, const NonterminalRef& nt) {
    const auto& r = f.frag->analysis->ref(nt.rule);
    switch (r.kind) {
      case ResolvedRef::Kind::Production: {
        AstNode child;
        if (!parse_production(*f.frag, r.production, r.typeName, child)) return false;
        add_child(f, node, std::move(child));
        return true;
      }
      case ResolvedRef::Kind::Interface: {
        const auto& analysis = *f.frag->analysis;
        std::vector<SeqInfo> infos;
        for (const auto* impl : r.implementers) {
          const auto& pi = analysis.production(impl);
          infos.push_back({pi.first, pi.nullable});
        }
        return choose(f, infos, [&](std::size_t i) {
          const auto* impl = r.implementers[i];
          AstNode child;
          if (!parse_production(*f.frag, impl, analysis.production(impl).typeName, child)) return false;
          add_child(f, node, std::move(child));
          return true;
        });
      }
      case ResolvedRef::Kind::External: return invoke_external(f, node, nt, *r.external);
      default:
        throw Error(ErrorCode::UnresolvedType, "'" + nt.rule + "' does not resolve in " + f.frag->grammar->qualified_name(),
                    locate(queue.buffer(), queue.cursor()));
    }
  }

  std::size_t next_text_pos(const FragmentInstance& frag) const {
    try {
      return frag.lexer->skip(queue.buffer(), queue.committed(), false);
    } catch (const Error&) {
      return queue.committed();
    }
  }

  void switch_lexer(const std::string& from, const std::string& to, bool entering) {
    SwitchRecord sw;
    sw.fromAlias = from;
    sw.toAlias = to;
    sw.entering = entering;
    sw.frontier = queue.frontier();
    sw.lookaheadEnd = windowEnd;
    sw.committed = queue.reset_for_embedding();
    sw.firstLexPos = sw.committed;
    cache.clear();
    lexerOwner = nullptr;
    windowEnd = sw.committed;
    trace.switches.push_back(sw);
    pendingSwitch = trace.switches.size() - 1;
  }

  bool invoke_external(Frame& f, const RhsNode& node, const NonterminalRef& nt, const ExternalDecl& ext) {
    std::optional<std::string> key;
    if (nt.selector) {
      const auto& sel = *nt.selector;
      if (sel.kind == EmbedSelector::Kind::GlobalVariable) {
        auto it = globals.find(sel.name);
        if (it == globals.end()) {
          throw Error(ErrorCode::UnboundExternal,
                      "global '" + sel.name + "' selecting " + ext.name + " has not been set",
                      locate(queue.buffer(), next_text_pos(*f.frag)));
        }
        key = it->second;
      } else {
        const auto* text = f.raw_text(sel.name);
        if (!text) {
          throw Error(ErrorCode::UnboundExternal, "attribute '" + sel.name + "' selecting " + ext.name + " is not set",
                      locate(queue.buffer(), next_text_pos(*f.frag)));
        }
        key = *text;
      }
    }
    if (queue.speculating()) {
      throw Error(ErrorCode::EmbeddingInSpeculation,
                  "external '" + ext.name + "' reached while the parser is still deciding between alternatives",
                  locate(queue.buffer(), queue.cursor()));
    }
    const auto* target = lang.lookup(f.frag->alias, ext.name, key);
    if (!target) {
      std::string what = key ? "no language registered under \"" + *key + "\" for " : "no binding for ";
      throw Error(ErrorCode::UnboundExternal, what + f.frag->alias + "." + ext.name,
                  locate(queue.buffer(), next_text_pos(*f.frag)));
    }

    switch_lexer(f.frag->alias, target->alias, true);
    AstNode child;
    if (!parse_production(*target, target->start, target->startType, child)) return false;
    switch_lexer(target->alias, f.frag->alias, false);

    if (ext.requiredInterface) {
      const HandwrittenInterfaceDef* def = nullptr;
      for (const auto& i : lang.interfaces) {
        if (i.name == *ext.requiredInterface) def = &i;
      }
      std::string missing;
      if (def && !satisfies_attributes(lang.mergedSchema, child.type, def->requiredAttributes, &missing)) {
        throw Error(ErrorCode::InterfaceNotSatisfied,
                    child.type + " does not provide " + missing + " required by " + *ext.requiredInterface,
                    locate(queue.buffer(), child.span.start));
      }
    }
    add_child(f, node, std::move(child));
    return true;
  }

  AstNode run_from(const FragmentInstance& frag, const ProductionDef* p, const std::string& typeName, bool toEnd) {
    AstNode root;
    bool ok = parse_production(frag, p, typeName, root);
    if (ok && toEnd) {
      const Token& t = peek(frag);
      if (!t.is_eof()) {
        expect_id(*frag.lexer, LexerInstance::kEofId, t);
        ok = false;
      }
    }
    if (!ok) throw_failure();
    return root;
  }
};

ParseSession::ParseSession(const ComposedLanguage& language, std::string input, ParseOptions options)
    : impl_(std::make_unique<Impl>(language, std::move(input), options)) {}

ParseSession::~ParseSession() = default;

AstNode ParseSession::run() {
  const auto& start = impl_->lang.start();
  return impl_->run_from(start, start.start, start.startType, true);
}

AstNode ParseSession::run_production(std::string_view production) {
  const auto& start = impl_->lang.start();
  const auto& set = *impl_->lang.grammarSet;
  auto sym = set.resolve(*start.grammar, production);
  if (sym.kind != SymbolKind::Production) {
    throw Error(ErrorCode::UnresolvedBinding,
                "'" + std::string(production) + "' is not a production of " + start.grammar->qualified_name());
  }
  return impl_->run_from(start, sym.production, sym.qualified_name(production), false);
}

const CharQueue& ParseSession::queue() const { return impl_->queue; }
const ParseTrace& ParseSession::trace() const { return impl_->trace; }
const std::map<std::string, std::string>& ParseSession::globals() const { return impl_->globals; }

AstNode parse(const ComposedLanguage& language, std::string_view input) {
  ParseSession session(language, std::string(input));
  return session.run();
}

}  // namespace grammarforge
