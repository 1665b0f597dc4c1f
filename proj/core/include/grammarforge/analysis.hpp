#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "grammarforge/grammar_set.hpp"
#include "grammarforge/lexer.hpp"

namespace grammarforge {

/// Set of token kinds of one lexer, plus a wildcard standing for "anything"
/// (an external nonterminal, or the unknown context of an embedded fragment).
class KindSet {
 public:
  KindSet() = default;
  explicit KindSet(std::size_t kinds) : bits_((kinds + 63) / 64, 0) {}

  bool contains(int id) const {
    auto i = static_cast<std::size_t>(id);
    return (bits_[i / 64] >> (i % 64)) & 1u;
  }
  /// True when the kind is in the set or the set has the wildcard.
  bool admits(int id) const { return any_ || contains(id); }
  bool any() const { return any_; }
  bool empty() const;

  bool insert(int id);
  bool set_any();
  /// Returns true when the set grew.
  bool merge(const KindSet& other);
  bool intersects(const KindSet& other) const;
  KindSet intersection(const KindSet& other) const;
  std::vector<int> ids() const;

  bool operator==(const KindSet&) const = default;

 private:
  std::vector<std::uint64_t> bits_;
  bool any_ = false;
};

/// What a reference name denotes inside the analysed language.
struct ResolvedRef {
  enum class Kind { None, Production, Interface, External, Token };
  Kind kind = Kind::None;
  const GrammarDef* owner = nullptr;
  const ProductionDef* production = nullptr;
  const ExternalDecl* external = nullptr;
  std::string typeName;  // qualified NodeType of a production
  std::vector<const ProductionDef*> implementers;  // for interfaces, in effective order
  int tokenId = -1;
};

struct SeqInfo {
  KindSet first;
  bool nullable = false;
};

struct BlockInfo {
  std::vector<SeqInfo> alternatives;
  KindSet first;  // of one pass through the block
  bool nullable = false;
  KindSet follow;  // tokens that may come right after the block
};

struct ProductionInfo {
  const GrammarDef* owner = nullptr;
  std::string typeName;
  KindSet first;
  bool nullable = false;
  KindSet follow;
};

/// FIRST, nullability and FOLLOW sets of a grammar interpreted as language
/// `grammar`: every reference resolves in that grammar, so inherited
/// productions see overrides.
class GrammarAnalysis {
 public:
  /// `start` seeds FOLLOW with EOF, or with the wildcard when `embedded`.
  GrammarAnalysis(const GrammarDef& grammar, const GrammarSet& grammarSet, std::shared_ptr<const LexerInstance> lexer,
                  const ProductionDef* start = nullptr, bool embedded = false);

  const GrammarDef& grammar() const { return *grammar_; }
  const LexerInstance& lexer() const { return *lexer_; }
  const std::shared_ptr<const LexerInstance>& shared_lexer() const { return lexer_; }

  const ResolvedRef& ref(const std::string& name) const;
  const ProductionInfo& production(const ProductionDef* p) const { return productions_.at(p); }
  const BlockInfo& block(const Block* b) const { return blocks_.at(b); }
  const std::vector<const ProductionDef*>& productions() const { return order_; }

  int keyword_id(const std::string& text) const { return lexer_->kind_id(text); }

  std::string describe(const KindSet& set) const;

 private:
  void resolve_names(const GrammarSet& set);
  void compute_first();
  bool first_block(const Block& b);
  SeqInfo first_seq(const Sequence& seq, std::size_t from) const;
  SeqInfo first_node(const RhsNode& node) const;
  void compute_follow(const ProductionDef* start, bool embedded);
  bool follow_block(const Block& b, const KindSet& after);
  bool follow_seq(const Sequence& seq, const KindSet& after);

  const GrammarDef* grammar_;
  std::shared_ptr<const LexerInstance> lexer_;
  std::vector<const ProductionDef*> order_;
  std::unordered_map<std::string, ResolvedRef> refs_;
  std::unordered_map<const ProductionDef*, ProductionInfo> productions_;
  std::unordered_map<const Block*, BlockInfo> blocks_;
};

struct ConflictReport {
  std::string production;
  std::string decision;  // "choice", "optional", "loop" or "implementers"
  std::vector<std::size_t> alternatives;
  std::vector<std::string> overlap;

  bool operator==(const ConflictReport&) const = default;
};

/// Every decision point whose options share a first token. Externals count
/// as a wildcard.
std::vector<ConflictReport> analyze_conflicts(const GrammarDef& grammar, const GrammarSet& grammarSet);
std::vector<ConflictReport> analyze_conflicts(const GrammarAnalysis& analysis);

std::string format(const ConflictReport& report);

}  // namespace grammarforge
