#include "grammarforge/traversal.hpp"

#include <functional>
#include <set>

namespace grammarforge {

const CombinedVisitor::Resolution& CombinedVisitor::dispatch(std::string_view type) const {
  static const Resolution none;
  auto it = dispatch_.find(type);
  return it == dispatch_.end() ? none : it->second;
}

CombinedVisitor combine(std::vector<VisitorFragment> fragments, const Schema& schema) {
  CombinedVisitor v;
  std::set<std::string> grammars;
  for (auto& f : fragments) {
    if (!grammars.insert(f.grammarName).second) {
      throw Error(ErrorCode::DuplicateFragment, "two visitor fragments for grammar '" + f.grammarName + "'");
    }
    std::map<std::string, Handler> qualified;
    for (auto& [key, handler] : f.handlers) {
      auto name = key.find('.') == std::string::npos ? f.grammarName + "." + key : key;
      const auto* type = schema.find(name);
      if (!type || type->package != f.grammarName) {
        throw Error(ErrorCode::InvalidHandler,
                    "fragment for '" + f.grammarName + "' handles '" + key + "', which that grammar does not define");
      }
      qualified.emplace(std::move(name), std::move(handler));
    }
    f.handlers = std::move(qualified);
  }
  v.fragments_ = std::move(fragments);

  std::map<std::string, std::pair<const VisitorFragment*, const Handler*>, std::less<>> exact;
  for (const auto& f : v.fragments_) {
    for (const auto& [name, handler] : f.handlers) exact.emplace(name, std::make_pair(&f, &handler));
  }

  for (const auto& [qname, type] : schema.types) {
    std::set<std::string> seen;
    std::function<bool(const std::string&)> find = [&](const std::string& name) {
      if (!seen.insert(name).second) return false;
      auto it = exact.find(name);
      if (it != exact.end()) {
        v.dispatch_[qname] = {it->second.second, it->second.first->grammarName, name};
        return true;
      }
      const auto* t = schema.find(name);
      if (!t) return false;
      for (const auto& s : t->supertypes) {
        if (find(s)) return true;
      }
      for (const auto& i : t->interfaces) {
        if (find(i)) return true;
      }
      return false;
    };
    find(qname);
  }
  return v;
}

void traverse(const AstNode& node, const CombinedVisitor& visitor, VisitContext& context) {
  const auto* handler = visitor.dispatch(node.type).handler;
  if (handler && handler->pre) handler->pre(node, context);
  for (const auto& slot : node.children) {
    for (const auto& child : slot.nodes) traverse(child, visitor, context);
  }
  if (handler && handler->post) handler->post(node, context);
}

}  // namespace grammarforge
