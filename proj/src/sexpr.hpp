#pragma once

// Minimal s-expression reader shared by the text formats (formulas,
// derivations, universe / pole / query files). Atoms are runs of characters
// other than whitespace, parentheses and ';'. A ';' starts a comment that
// runs to end of line.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "rz/errors.hpp"

namespace rz::sx {

struct Node {
  bool is_atom = true;
  std::string atom;
  std::vector<Node> items;
  std::size_t offset = 0;
};

inline void skip_ws(std::string_view s, std::size_t& i) {
  while (i < s.size()) {
    if (s[i] == ';') {
      while (i < s.size() && s[i] != '\n') ++i;
    } else if (s[i] == ' ' || s[i] == '\t' || s[i] == '\n' || s[i] == '\r') {
      ++i;
    } else {
      break;
    }
  }
}

inline Node parse_node(std::string_view s, std::size_t& i) {
  skip_ws(s, i);
  if (i >= s.size()) throw ParseError("unexpected end of input at offset " + std::to_string(i));
  Node n;
  n.offset = i;
  if (s[i] == '(') {
    ++i;
    n.is_atom = false;
    for (;;) {
      skip_ws(s, i);
      if (i >= s.size()) throw ParseError("unclosed '(' at offset " + std::to_string(n.offset));
      if (s[i] == ')') {
        ++i;
        return n;
      }
      n.items.push_back(parse_node(s, i));
    }
  }
  if (s[i] == ')') throw ParseError("unmatched ')' at offset " + std::to_string(i));
  std::size_t start = i;
  while (i < s.size() && s[i] != '(' && s[i] != ')' && s[i] != ';' && s[i] != ' ' &&
         s[i] != '\t' && s[i] != '\n' && s[i] != '\r') {
    ++i;
  }
  n.atom.assign(s.substr(start, i - start));
  return n;
}

// Whole input must be a single expression.
inline Node parse_one(std::string_view s) {
  std::size_t i = 0;
  Node n = parse_node(s, i);
  skip_ws(s, i);
  if (i != s.size()) throw ParseError("trailing input at offset " + std::to_string(i));
  return n;
}

// Whole input as a sequence of expressions.
inline std::vector<Node> parse_many(std::string_view s) {
  std::vector<Node> out;
  std::size_t i = 0;
  for (;;) {
    skip_ws(s, i);
    if (i >= s.size()) return out;
    out.push_back(parse_node(s, i));
  }
}

}  // namespace rz::sx
