#include "grammarforge/regex.hpp"

#include <algorithm>

namespace grammarforge {

Nfa::Nfa(const RegexNode& pattern) {
  auto f = build(pattern);
  start_ = f.start;
  accept_ = f.accept;
}

int Nfa::add_state() {
  states_.emplace_back();
  return static_cast<int>(states_.size()) - 1;
}

Nfa::Fragment Nfa::build(const RegexNode& node) {
  using K = RegexNode::Kind;
  switch (node.kind) {
    case K::Range: {
      int s = add_state();
      int a = add_state();
      states_[s].edges.push_back({node.lo, node.hi, a});
      return {s, a};
    }
    case K::Sequence: {
      if (node.children.empty()) {
        int s = add_state();
        return {s, s};
      }
      auto first = build(node.children.front());
      int accept = first.accept;
      for (std::size_t i = 1; i < node.children.size(); ++i) {
        auto next = build(node.children[i]);
        states_[accept].epsilon.push_back(next.start);
        accept = next.accept;
      }
      return {first.start, accept};
    }
    case K::Alternation: {
      int s = add_state();
      int a = add_state();
      for (const auto& child : node.children) {
        auto f = build(child);
        states_[s].epsilon.push_back(f.start);
        states_[f.accept].epsilon.push_back(a);
      }
      return {s, a};
    }
    case K::Optional:
    case K::Star:
    case K::Plus: {
      int s = add_state();
      int a = add_state();
      auto f = build(node.children.at(0));
      states_[s].epsilon.push_back(f.start);
      states_[f.accept].epsilon.push_back(a);
      if (node.kind != K::Plus) states_[s].epsilon.push_back(a);
      if (node.kind != K::Optional) states_[f.accept].epsilon.push_back(f.start);
      return {s, a};
    }
  }
  int s = add_state();
  return {s, s};
}

void Nfa::closure(std::vector<int>& set, std::vector<char>& member) const {
  for (std::size_t i = 0; i < set.size(); ++i) {
    for (int next : states_[set[i]].epsilon) {
      if (!member[next]) {
        member[next] = 1;
        set.push_back(next);
      }
    }
  }
}

std::size_t Nfa::longest_match(std::string_view text, std::size_t pos) const {
  std::vector<char> member(states_.size(), 0);
  std::vector<int> current{start_};
  member[start_] = 1;
  closure(current, member);

  std::size_t best = 0;
  std::vector<int> next;
  for (std::size_t i = pos; i < text.size() && !current.empty(); ++i) {
    const auto c = static_cast<unsigned char>(text[i]);
    next.clear();
    std::fill(member.begin(), member.end(), 0);
    for (int s : current) {
      for (const auto& e : states_[s].edges) {
        if (c >= e.lo && c <= e.hi && !member[e.to]) {
          member[e.to] = 1;
          next.push_back(e.to);
        }
      }
    }
    closure(next, member);
    current.swap(next);
    if (member[accept_]) best = i + 1 - pos;
  }
  return best;
}

bool Nfa::full_match(std::string_view text) const {
  if (text.empty()) {
    std::vector<char> member(states_.size(), 0);
    std::vector<int> current{start_};
    member[start_] = 1;
    closure(current, member);
    return member[accept_] != 0;
  }
  return longest_match(text, 0) == text.size();
}

}  // namespace grammarforge
