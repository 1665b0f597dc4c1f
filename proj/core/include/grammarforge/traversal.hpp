#pragma once

#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "grammarforge/ast.hpp"
#include "grammarforge/composition.hpp"

namespace grammarforge {

/// Session-local output of a traversal.
struct VisitContext {
  std::vector<std::string> log;
  std::string text;
};

using VisitAction = std::function<void(const AstNode&, VisitContext&)>;

struct Handler {
  VisitAction pre;
  VisitAction post;
};

/// Handlers written for the node types of one grammar. Keys are qualified
/// type names or simple production names of that grammar.
struct VisitorFragment {
  std::string grammarName;
  std::map<std::string, Handler> handlers;
};

class CombinedVisitor {
 public:
  struct Resolution {
    const Handler* handler = nullptr;
    std::string fragment;  // grammar of the fragment the handler comes from
    std::string handlerType;
  };

  /// Handler for a node type: the exact one if its grammar's fragment has
  /// it, else the first found along the supertypes and then the interfaces
  /// (depth-first, declaration order), else none.
  const Resolution& dispatch(std::string_view type) const;
  const std::vector<VisitorFragment>& fragments() const { return fragments_; }

 private:
  friend CombinedVisitor combine(std::vector<VisitorFragment>, const Schema&);

  std::vector<VisitorFragment> fragments_;
  std::map<std::string, Resolution, std::less<>> dispatch_;
};

/// Throws Error{DuplicateFragment | InvalidHandler}.
CombinedVisitor combine(std::vector<VisitorFragment> fragments, const Schema& schema);

/// Depth first: pre, children in composition order, post.
void traverse(const AstNode& node, const CombinedVisitor& visitor, VisitContext& context);

/// Source text for a node, following its defining production. Tokens are
/// separated by single spaces. Throws Error{UnprintableNode}.
std::string pretty_print(const AstNode& node, const ComposedLanguage& language);
std::string pretty_print(const AstNode& node, const Schema& schema, const GrammarSet& grammarSet);

}  // namespace grammarforge
