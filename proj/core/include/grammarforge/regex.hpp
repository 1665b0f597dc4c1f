#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "grammarforge/grammar.hpp"

namespace grammarforge {

/// Thompson NFA for a lexer rule pattern.
class Nfa {
 public:
  explicit Nfa(const RegexNode& pattern);

  /// Length of the longest non-empty match of the pattern starting at `pos`,
  /// or 0 when there is none.
  std::size_t longest_match(std::string_view text, std::size_t pos) const;

  bool full_match(std::string_view text) const;

 private:
  struct Edge {
    unsigned char lo;
    unsigned char hi;
    int to;
  };
  struct State {
    std::vector<int> epsilon;
    std::vector<Edge> edges;
  };
  struct Fragment {
    int start;
    int accept;
  };

  int add_state();
  Fragment build(const RegexNode& node);
  void closure(std::vector<int>& set, std::vector<char>& member) const;

  std::vector<State> states_;
  int start_ = 0;
  int accept_ = 0;
};

}  // namespace grammarforge
