#include "densevec/sexpr.hpp"

#include <cctype>

#include "densevec/errors.hpp"

namespace densevec::sexpr {

namespace {

class Reader {
 public:
  explicit Reader(const std::string& text) : text_(text) {}

  Node read_all() {
    Node n = node();
    ws();
    if (pos_ != text_.size()) throw ParseError("trailing input", 1, 1);
    return n;
  }

 private:
  const std::string& text_;
  std::size_t pos_ = 0;

  void ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  Node node() {
    ws();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", 1, 1);
    if (text_[pos_] == '(') {
      ++pos_;
      Node n;
      while (true) {
        ws();
        if (pos_ >= text_.size()) throw ParseError("unclosed list", 1, 1);
        if (text_[pos_] == ')') {
          ++pos_;
          return n;
        }
        n.kids.push_back(node());
      }
    }
    Node n;
    n.is_atom = true;
    if (text_[pos_] == '"') {
      ++pos_;
      while (pos_ < text_.size() && text_[pos_] != '"') n.atom += text_[pos_++];
      if (pos_ >= text_.size()) throw ParseError("unclosed string", 1, 1);
      ++pos_;
    } else {
      while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
             text_[pos_] != '(' && text_[pos_] != ')')
        n.atom += text_[pos_++];
    }
    return n;
  }
};

bool needs_quotes(const std::string& atom) {
  if (atom.empty()) return true;
  for (char c : atom)
    if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == '"')
      return true;
  return false;
}

}  // namespace

const Node& Node::at(std::size_t i) const {
  if (is_atom || i >= kids.size()) throw ParseError("malformed expression", 1, 1);
  return kids[i];
}

Node read(const std::string& text) { return Reader(text).read_all(); }

std::string to_text(const Node& n) {
  if (n.is_atom) return needs_quotes(n.atom) ? "\"" + n.atom + "\"" : n.atom;
  std::string out = "(";
  for (std::size_t i = 0; i < n.kids.size(); ++i) out += (i ? " " : "") + to_text(n.kids[i]);
  return out + ")";
}

std::string payload_text(const Node& n, std::size_t first_kid) {
  std::string out;
  for (std::size_t i = first_kid; i < n.kids.size(); ++i)
    out += (i > first_kid ? " " : "") + to_text(n.kids[i]);
  return out;
}

const Node& expect_list(const Node& n, const std::string& head) {
  if (!n.is_list(head)) throw ParseError("expected (" + head + " ...)", 1, 1);
  return n;
}

}  // namespace densevec::sexpr
