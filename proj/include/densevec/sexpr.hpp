#pragma once

#include <string>
#include <vector>

namespace densevec::sexpr {

/// Plain s-expression node; atoms may be double-quoted to carry parentheses.
struct Node {
  std::string atom;
  std::vector<Node> kids;
  bool is_atom = false;

  bool is_list(const std::string& head) const {
    return !is_atom && !kids.empty() && kids[0].is_atom && kids[0].atom == head;
  }
  const Node& at(std::size_t i) const;  // ParseError when out of range
};

Node read(const std::string& text);

/// Node back to text (atoms that need it are re-quoted).
std::string to_text(const Node& n);

/// Re-serializes everything after the head symbol, for payloads that go
/// through the language parsers.
std::string payload_text(const Node& n, std::size_t first_kid);

const Node& expect_list(const Node& n, const std::string& head);

}  // namespace densevec::sexpr
