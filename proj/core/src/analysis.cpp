#include "grammarforge/analysis.hpp"

#include <algorithm>
#include <set>

namespace grammarforge {

bool KindSet::empty() const {
  return !any_ && std::all_of(bits_.begin(), bits_.end(), [](std::uint64_t w) { return w == 0; });
}

bool KindSet::insert(int id) {
  auto i = static_cast<std::size_t>(id);
  if (i / 64 >= bits_.size()) bits_.resize(i / 64 + 1, 0);
  auto before = bits_[i / 64];
  bits_[i / 64] |= std::uint64_t{1} << (i % 64);
  return before != bits_[i / 64];
}

bool KindSet::set_any() {
  bool changed = !any_;
  any_ = true;
  return changed;
}

bool KindSet::merge(const KindSet& other) {
  bool changed = false;
  if (other.bits_.size() > bits_.size()) bits_.resize(other.bits_.size(), 0);
  for (std::size_t i = 0; i < other.bits_.size(); ++i) {
    auto merged = bits_[i] | other.bits_[i];
    if (merged != bits_[i]) {
      bits_[i] = merged;
      changed = true;
    }
  }
  if (other.any_) changed |= set_any();
  return changed;
}

KindSet KindSet::intersection(const KindSet& other) const {
  KindSet out;
  if (any_ && other.any_) {
    out = *this;
    out.merge(other);
    return out;
  }
  if (any_) {
    out = other;
    return out;
  }
  if (other.any_) {
    out = *this;
    return out;
  }
  out.bits_.resize(std::min(bits_.size(), other.bits_.size()), 0);
  for (std::size_t i = 0; i < out.bits_.size(); ++i) out.bits_[i] = bits_[i] & other.bits_[i];
  return out;
}

bool KindSet::intersects(const KindSet& other) const {
  if (empty() || other.empty()) return false;
  return !intersection(other).empty();
}

std::vector<int> KindSet::ids() const {
  std::vector<int> out;
  for (std::size_t w = 0; w < bits_.size(); ++w) {
    for (std::size_t b = 0; b < 64; ++b) {
      if ((bits_[w] >> b) & 1u) out.push_back(static_cast<int>(w * 64 + b));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

GrammarAnalysis::GrammarAnalysis(const GrammarDef& grammar, const GrammarSet& grammarSet,
                                 std::shared_ptr<const LexerInstance> lexer, const ProductionDef* start, bool embedded)
    : grammar_(&grammar), lexer_(std::move(lexer)) {
  resolve_names(grammarSet);
  compute_first();
  compute_follow(start, embedded);
}

const ResolvedRef& GrammarAnalysis::ref(const std::string& name) const {
  static const ResolvedRef none;
  auto it = refs_.find(name);
  return it == refs_.end() ? none : it->second;
}

void GrammarAnalysis::resolve_names(const GrammarSet& set) {
  const auto effective = set.effective_productions(*grammar_);
  const KindSet emptySet(lexer_->kind_count());
  for (const auto& rp : effective) {
    order_.push_back(rp.production);
    productions_[rp.production] = {rp.owner, rp.type_name(), emptySet, false, emptySet};
  }

  auto resolve = [&](const std::string& name, bool token) {
    if (refs_.count(name)) return;
    ResolvedRef r;
    auto sym = set.resolve(*grammar_, name);
    if (token || sym.kind == SymbolKind::LexerRule) {
      r.kind = ResolvedRef::Kind::Token;
      r.tokenId = lexer_->kind_id(name);
      if (r.tokenId < 0) r.kind = ResolvedRef::Kind::None;
    } else if (sym.kind == SymbolKind::Production) {
      r.kind = ResolvedRef::Kind::Production;
      r.owner = sym.owner;
      r.production = sym.production;
      r.typeName = sym.qualified_name(name);
    } else if (sym.kind == SymbolKind::External) {
      r.kind = ResolvedRef::Kind::External;
      r.owner = sym.owner;
      r.external = sym.external;
    } else if (sym.kind == SymbolKind::Interface) {
      r.kind = ResolvedRef::Kind::Interface;
      r.owner = sym.owner;
      r.typeName = sym.qualified_name(name);
      for (const auto& rp : effective) {
        for (const auto& iname : rp.production->implementsList) {
          if (set.resolve(*rp.owner, iname).iface == sym.iface) {
            r.implementers.push_back(rp.production);
            break;
          }
        }
      }
    }
    refs_.emplace(name, std::move(r));
  };

  for (const auto* p : order_) {
    std::vector<const Block*> stack{&p->rhs};
    while (!stack.empty()) {
      const Block* b = stack.back();
      stack.pop_back();
      BlockInfo info;
      info.first = emptySet;
      info.follow = emptySet;
      info.alternatives.assign(b->alternatives.size(), SeqInfo{emptySet, false});
      blocks_[b] = std::move(info);
      for (const auto& alt : b->alternatives) {
        for (const auto& node : alt) {
          if (const auto* nested = std::get_if<Block>(&node.value)) {
            stack.push_back(nested);
          } else if (const auto* lex = std::get_if<LexerRef>(&node.value)) {
            resolve(lex->rule, true);
          } else if (const auto* ref = std::get_if<NonterminalRef>(&node.value)) {
            resolve(ref->rule, false);
          }
        }
      }
    }
  }
}

SeqInfo GrammarAnalysis::first_node(const RhsNode& node) const {
  SeqInfo out{KindSet(lexer_->kind_count()), false};
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Keyword>) {
          auto id = lexer_->kind_id(v.text);
          if (id >= 0) out.first.insert(id);
        } else if constexpr (std::is_same_v<T, LexerRef>) {
          const auto& r = ref(v.rule);
          if (r.tokenId >= 0) out.first.insert(r.tokenId);
        } else if constexpr (std::is_same_v<T, NonterminalRef>) {
          const auto& r = ref(v.rule);
          switch (r.kind) {
            case ResolvedRef::Kind::Production: {
              const auto& info = productions_.at(r.production);
              out.first = info.first;
              out.nullable = info.nullable;
              break;
            }
            case ResolvedRef::Kind::Interface:
              for (const auto* impl : r.implementers) {
                const auto& info = productions_.at(impl);
                out.first.merge(info.first);
                out.nullable = out.nullable || info.nullable;
              }
              break;
            case ResolvedRef::Kind::External: out.first.set_any(); break;
            default: break;
          }
        } else if constexpr (std::is_same_v<T, Block>) {
          const auto& info = blocks_.at(&v);
          out.first = info.first;
          out.nullable = info.nullable || v.repetition == Repetition::Optional || v.repetition == Repetition::Star;
        } else {
          out.nullable = true;  // scripts consume nothing
        }
      },
      node.value);
  return out;
}

SeqInfo GrammarAnalysis::first_seq(const Sequence& seq, std::size_t from) const {
  SeqInfo out{KindSet(lexer_->kind_count()), true};
  for (std::size_t i = from; i < seq.size(); ++i) {
    auto n = first_node(seq[i]);
    out.first.merge(n.first);
    if (!n.nullable) {
      out.nullable = false;
      break;
    }
  }
  return out;
}

bool GrammarAnalysis::first_block(const Block& b) {
  bool changed = false;
  for (const auto& alt : b.alternatives) {
    for (const auto& node : alt) {
      if (const auto* nested = std::get_if<Block>(&node.value)) changed |= first_block(*nested);
    }
  }
  auto& info = blocks_.at(&b);
  for (std::size_t i = 0; i < b.alternatives.size(); ++i) {
    auto s = first_seq(b.alternatives[i], 0);
    changed |= info.alternatives[i].first.merge(s.first);
    if (s.nullable && !info.alternatives[i].nullable) {
      info.alternatives[i].nullable = true;
      changed = true;
    }
    changed |= info.first.merge(s.first);
    if (s.nullable && !info.nullable) {
      info.nullable = true;
      changed = true;
    }
  }
  return changed;
}

void GrammarAnalysis::compute_first() {
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto* p : order_) {
      changed |= first_block(p->rhs);
      auto& info = productions_.at(p);
      const auto& b = blocks_.at(&p->rhs);
      changed |= info.first.merge(b.first);
      if (b.nullable && !info.nullable) {
        info.nullable = true;
        changed = true;
      }
    }
  }
}

bool GrammarAnalysis::follow_seq(const Sequence& seq, const KindSet& after) {
  bool changed = false;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    auto suffix = first_seq(seq, i + 1);
    KindSet f = suffix.first;
    if (suffix.nullable) f.merge(after);
    if (const auto* nested = std::get_if<Block>(&seq[i].value)) {
      changed |= follow_block(*nested, f);
    } else if (const auto* nt = std::get_if<NonterminalRef>(&seq[i].value)) {
      const auto& r = ref(nt->rule);
      if (r.kind == ResolvedRef::Kind::Production) {
        changed |= productions_.at(r.production).follow.merge(f);
      } else if (r.kind == ResolvedRef::Kind::Interface) {
        for (const auto* impl : r.implementers) changed |= productions_.at(impl).follow.merge(f);
      }
    }
  }
  return changed;
}

bool GrammarAnalysis::follow_block(const Block& b, const KindSet& after) {
  auto& info = blocks_.at(&b);
  bool changed = info.follow.merge(after);
  KindSet end = after;
  if (b.repetition == Repetition::Star || b.repetition == Repetition::Plus) end.merge(info.first);
  for (const auto& alt : b.alternatives) changed |= follow_seq(alt, end);
  return changed;
}

void GrammarAnalysis::compute_follow(const ProductionDef* start, bool embedded) {
  if (start && productions_.count(start)) {
    auto& f = productions_.at(start).follow;
    if (embedded) {
      f.set_any();
    } else {
      f.insert(LexerInstance::kEofId);
    }
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto* p : order_) {
      KindSet after = productions_.at(p).follow;
      changed |= follow_block(p->rhs, after);
    }
  }
}

std::string GrammarAnalysis::describe(const KindSet& set) const {
  std::string out;
  for (int id : set.ids()) {
    if (!out.empty()) out += ", ";
    out += lexer_->kind_name(id);
  }
  if (set.any()) out += out.empty() ? "<any>" : ", <any>";
  return out;
}

// ---------------------------------------------------------------------------
// Conflicts

namespace {

std::vector<std::string> kind_names(const GrammarAnalysis& a, const KindSet& set) {
  std::vector<std::string> out;
  for (int id : set.ids()) out.push_back(a.lexer().kind_name(id));
  if (set.any()) out.emplace_back("<any>");
  return out;
}

void block_conflicts(const GrammarAnalysis& a, const std::string& production, const Block& b,
                     std::vector<ConflictReport>& out) {
  const auto& info = a.block(&b);
  for (std::size_t i = 0; i < b.alternatives.size(); ++i) {
    for (std::size_t j = i + 1; j < b.alternatives.size(); ++j) {
      const auto& x = info.alternatives[i].first;
      const auto& y = info.alternatives[j].first;
      if (x.intersects(y)) out.push_back({production, "choice", {i, j}, kind_names(a, x.intersection(y))});
    }
  }
  if (b.repetition != Repetition::One && info.first.intersects(info.follow)) {
    out.push_back({production, b.repetition == Repetition::Optional ? "optional" : "loop", {0, 1},
                   kind_names(a, info.first.intersection(info.follow))});
  }
  for (const auto& alt : b.alternatives) {
    for (const auto& node : alt) {
      if (const auto* nested = std::get_if<Block>(&node.value)) block_conflicts(a, production, *nested, out);
    }
  }
}

}  // namespace

std::vector<ConflictReport> analyze_conflicts(const GrammarAnalysis& analysis) {
  std::vector<ConflictReport> out;
  std::set<std::string> interfaces;
  for (const auto* p : analysis.productions()) {
    block_conflicts(analysis, p->name, p->rhs, out);
    for_each_node(p->rhs, [&](const RhsNode& node) {
      const auto* nt = std::get_if<NonterminalRef>(&node.value);
      if (!nt) return;
      const auto& r = analysis.ref(nt->rule);
      if (r.kind != ResolvedRef::Kind::Interface || !interfaces.insert(nt->rule).second) return;
      for (std::size_t i = 0; i < r.implementers.size(); ++i) {
        for (std::size_t j = i + 1; j < r.implementers.size(); ++j) {
          const auto& x = analysis.production(r.implementers[i]).first;
          const auto& y = analysis.production(r.implementers[j]).first;
          if (x.intersects(y)) out.push_back({nt->rule, "implementers", {i, j}, kind_names(analysis, x.intersection(y))});
        }
      }
    });
  }
  return out;
}

std::vector<ConflictReport> analyze_conflicts(const GrammarDef& grammar, const GrammarSet& grammarSet) {
  auto lexer = std::make_shared<const LexerInstance>(build_lexer(grammar, grammarSet));
  GrammarAnalysis analysis(grammar, grammarSet, lexer);
  return analyze_conflicts(analysis);
}

std::string format(const ConflictReport& report) {
  std::string out = report.production + ": " + report.decision + " ";
  for (std::size_t i = 0; i < report.alternatives.size(); ++i) {
    out += (i ? "/" : "") + std::to_string(report.alternatives[i]);
  }
  out += " overlap on {";
  for (std::size_t i = 0; i < report.overlap.size(); ++i) out += (i ? ", " : "") + report.overlap[i];
  return out + "}";
}

}  // namespace grammarforge
