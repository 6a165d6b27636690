#include <algorithm>
#include <cctype>
#include <cstdlib>

#include "densevec/logic.hpp"

namespace densevec {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_cont(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

class Parser {
 public:
  explicit Parser(const std::string& src) : src_(src) {}

  Parsed parse_any() {
    skip_ws();
    Parsed result = looks_like_formula() ? Parsed(parse_formula()) : Parsed(parse_term());
    expect_end();
    return result;
  }

  FormulaPtr parse_formula_only() {
    skip_ws();
    FormulaPtr f = parse_formula();
    expect_end();
    return alpha_normalize(f);
  }

  TermPtr parse_term_only() {
    skip_ws();
    TermPtr t = parse_term();
    expect_end();
    return t;
  }

  RationalFunction parse_scalar_only() {
    skip_ws();
    RationalFunction q = parse_scalar();
    expect_end();
    return q;
  }

 private:
  const std::string& src_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;

  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, line_, col_); }

  bool at_end() const { return pos_ >= src_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  void advance() {
    if (at_end()) return;
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_ws() {
    while (!at_end()) {
      char c = peek();
      if (c == ';') {  // line comment
        while (!at_end() && peek() != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    advance();
  }

  void expect_end() {
    skip_ws();
    if (!at_end()) fail("trailing input");
  }

  std::string read_symbol() {
    skip_ws();
    std::size_t start = pos_;
    while (!at_end() && !std::isspace(static_cast<unsigned char>(peek())) && peek() != '(' &&
           peek() != ')')
      advance();
    if (pos_ == start) fail("expected a symbol");
    return src_.substr(start, pos_ - start);
  }

  std::string peek_head() const {
    std::size_t p = pos_;
    while (p < src_.size() && std::isspace(static_cast<unsigned char>(src_[p]))) ++p;
    if (p >= src_.size() || src_[p] != '(') return "";
    ++p;
    while (p < src_.size() && std::isspace(static_cast<unsigned char>(src_[p]))) ++p;
    std::size_t start = p;
    while (p < src_.size() && !std::isspace(static_cast<unsigned char>(src_[p])) &&
           src_[p] != '(' && src_[p] != ')')
      ++p;
    return src_.substr(start, p - start);
  }

  bool looks_like_formula() {
    static const std::set<std::string> heads = {"and",    "or", "not", "implies",    "exists",
                                                "forall", "=",  "<",   "exists-inf", "<=",
                                                "!=",     ">",  ">="};
    return heads.count(peek_head()) > 0;
  }

  // --- scalars -------------------------------------------------------------

  Rational read_natural() {
    skip_ws();
    if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected a number");
    std::string digits;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      digits += peek();
      advance();
    }
    return Rational(Int(digits));
  }

  unsigned long read_exponent() {
    Rational n = read_natural();
    return n.get_num().get_ui();
  }

  RationalFunction scalar_pow(const RationalFunction& base, unsigned long e) {
    RationalFunction acc(1);
    for (unsigned long i = 0; i < e; ++i) acc = acc * base;
    return acc;
  }

  bool prefix_scalar_ahead() const {
    // '(' followed by an operator and a delimiter starts a prefix list.
    std::size_t p = pos_ + 1;
    while (p < src_.size() && std::isspace(static_cast<unsigned char>(src_[p]))) ++p;
    if (p >= src_.size()) return false;
    char c = src_[p];
    if (c == '+' || c == '-' || c == '*' || c == '/' || c == '^') {
      char next = p + 1 < src_.size() ? src_[p + 1] : '\0';
      return next == '\0' || std::isspace(static_cast<unsigned char>(next)) || next == '(';
    }
    if (src_.compare(p, 3, "neg") == 0) {
      char next = p + 3 < src_.size() ? src_[p + 3] : '\0';
      return std::isspace(static_cast<unsigned char>(next)) || next == '(';
    }
    return false;
  }

  RationalFunction parse_scalar() {
    skip_ws();
    try {
      if (peek() == '(' && prefix_scalar_ahead()) return parse_scalar_prefix();
      return parse_scalar_sum();
    } catch (const ZeroDenominatorError&) {
      fail("zero denominator in scalar");
    }
  }

  RationalFunction parse_scalar_prefix() {
    expect('(');
    std::string op = read_symbol();
    std::vector<RationalFunction> args;
    skip_ws();
    while (peek() != ')') {
      args.push_back(parse_scalar());
      skip_ws();
    }
    expect(')');
    if (args.empty()) fail("empty scalar operator application");
    RationalFunction acc = args[0];
    if (op == "+") {
      for (std::size_t i = 1; i < args.size(); ++i) acc = acc + args[i];
    } else if (op == "-") {
      if (args.size() == 1) return -acc;
      for (std::size_t i = 1; i < args.size(); ++i) acc = acc - args[i];
    } else if (op == "neg") {
      if (args.size() != 1) fail("neg takes one argument");
      return -acc;
    } else if (op == "*") {
      for (std::size_t i = 1; i < args.size(); ++i) acc = acc * args[i];
    } else if (op == "/") {
      if (args.size() < 2) fail("/ takes at least two arguments");
      for (std::size_t i = 1; i < args.size(); ++i) acc = acc / args[i];
    } else if (op == "^") {
      if (args.size() != 2) fail("^ takes two arguments");
      auto e = args[1].as_constant();
      if (!e || e->get_den() != 1 || *e < 0) fail("exponent must be a nonnegative integer");
      return scalar_pow(acc, e->get_num().get_ui());
    } else {
      fail("unknown scalar operator: " + op);
    }
    return acc;
  }

  RationalFunction parse_scalar_sum() {
    RationalFunction acc = parse_scalar_product();
    while (true) {
      skip_ws();
      if (peek() == '+') {
        advance();
        acc = acc + parse_scalar_product();
      } else if (peek() == '-') {
        advance();
        acc = acc - parse_scalar_product();
      } else {
        return acc;
      }
    }
  }

  RationalFunction parse_scalar_product() {
    RationalFunction acc = parse_scalar_factor();
    while (true) {
      skip_ws();
      if (peek() == '*') {
        advance();
        acc = acc * parse_scalar_factor();
      } else if (peek() == '/') {
        advance();
        acc = acc / parse_scalar_factor();
      } else {
        return acc;
      }
    }
  }

  RationalFunction parse_scalar_factor() {
    skip_ws();
    bool negate = false;
    if (peek() == '-') {
      advance();
      negate = true;
    }
    RationalFunction value = parse_scalar_atom();
    return negate ? -value : value;
  }

  RationalFunction parse_t_power() {
    expect('t');
    if (peek() == '^') {
      advance();
      return scalar_pow(RationalFunction::t(), read_exponent());
    }
    return RationalFunction::t();
  }

  RationalFunction parse_scalar_atom() {
    skip_ws();
    char c = peek();
    if (c == '(') {
      advance();
      RationalFunction inner = parse_scalar_sum();
      skip_ws();
      expect(')');
      if (peek() == '^') {
        advance();
        return scalar_pow(inner, read_exponent());
      }
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      Rational n = read_natural();
      if (peek() == 't') return parse_t_power().scaled(n);  // juxtaposition: 2t^3
      return RationalFunction(n);
    }
    if (c == 't') {
      char next = peek(1);
      if (next == '\0' || !ident_cont(next) || next == '^') return parse_t_power();
    }
    fail("expected a scalar");
  }

  // --- terms ---------------------------------------------------------------

  TermPtr parse_term() {
    skip_ws();
    char c = peek();
    if (c == '(') return parse_term_list();
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '-' && std::isdigit(static_cast<unsigned char>(peek(1)))))
      return term_const(parse_term_number());
    std::string name = read_identifier();
    if (name == "one") return term_one();
    if (name == "t") fail("'t' is the scalar variable, not a term");
    if (is_reserved_name(name)) fail("reserved name used as a variable: " + name);
    return term_var(name);
  }

  RationalFunction parse_term_number() {
    bool negate = peek() == '-';
    if (negate) advance();
    Rational num = read_natural();
    if (peek() == '/') {
      advance();
      Rational den = read_natural();
      if (den == 0) fail("zero denominator in scalar");
      num /= den;
    }
    return RationalFunction(negate ? Rational(-num) : num);
  }

  std::string read_identifier() {
    skip_ws();
    if (!ident_start(peek())) fail("expected an identifier");
    std::string out;
    while (ident_cont(peek())) {
      out += peek();
      advance();
    }
    return out;
  }

  TermPtr parse_term_list() {
    expect('(');
    std::string head = read_symbol();
    TermPtr result;
    if (head == "+") {
      std::vector<TermPtr> args;
      skip_ws();
      while (peek() != ')') {
        args.push_back(parse_term());
        skip_ws();
      }
      if (args.empty()) fail("+ needs at least one argument");
      result = args.size() == 1 ? args[0] : term_add(std::move(args));
    } else if (head == "neg") {
      result = term_neg(parse_term());
      skip_ws();
    } else if (head == "-") {
      TermPtr a = parse_term();
      TermPtr b = parse_term();
      result = term_sub(std::move(a), std::move(b));
      skip_ws();
    } else if (head == "lam") {
      RationalFunction factor = parse_scalar();
      result = term_scale(std::move(factor), parse_term());
      skip_ws();
    } else if (head == "const") {
      result = term_const(parse_scalar());
      skip_ws();
    } else {
      fail("unknown term operator: " + head);
    }
    skip_ws();
    expect(')');
    return result;
  }

  // --- formulas ------------------------------------------------------------

  std::vector<std::string> parse_binder_list() {
    skip_ws();
    expect('(');
    std::vector<std::string> vars;
    skip_ws();
    while (peek() != ')') {
      std::string name = read_identifier();
      if (is_reserved_name(name)) fail("reserved name bound as a variable: " + name);
      if (std::find(vars.begin(), vars.end(), name) != vars.end())
        fail("duplicate bound variable: " + name);
      vars.push_back(std::move(name));
      skip_ws();
    }
    expect(')');
    if (vars.empty()) fail("empty binder list");
    return vars;
  }

  FormulaPtr parse_formula() {
    skip_ws();
    expect('(');
    std::string head = read_symbol();
    FormulaPtr result;
    if (head == "and" || head == "or") {
      std::vector<FormulaPtr> kids;
      skip_ws();
      while (peek() != ')') {
        kids.push_back(parse_formula());
        skip_ws();
      }
      if (kids.empty()) fail(head + " needs at least one argument");
      result = head == "and" ? mk_and(std::move(kids)) : mk_or(std::move(kids));
    } else if (head == "not") {
      result = mk_not(parse_formula());
    } else if (head == "implies") {
      FormulaPtr a = parse_formula();
      FormulaPtr b = parse_formula();
      result = mk_or({mk_not(std::move(a)), std::move(b)});
    } else if (head == "exists" || head == "forall") {
      std::vector<std::string> vars = parse_binder_list();
      FormulaPtr body = parse_formula();
      result = head == "exists" ? mk_exists(std::move(vars), std::move(body))
                                : mk_forall(std::move(vars), std::move(body));
    } else if (head == "exists-inf") {
      std::vector<std::string> vars = parse_binder_list();
      if (vars.size() != 1) fail("exists-inf binds exactly one variable");
      result = mk_exists_inf(vars[0], parse_formula());
    } else if (head == "=" || head == "<" || head == "<=" || head == "!=" || head == ">" ||
               head == ">=") {
      LinearTerm a = normalize_to_linear(parse_term());
      LinearTerm b = normalize_to_linear(parse_term());
      LinearTerm diff = a.minus(b);
      if (head == "=") {
        result = mk_atom(std::move(diff), Rel::Eq);
      } else if (head == "<") {
        result = mk_atom(std::move(diff), Rel::Lt);
      } else if (head == "!=") {
        result = mk_atom(std::move(diff), Rel::Neq);
      } else if (head == ">") {
        result = mk_atom(diff.negated(), Rel::Lt);
      } else if (head == "<=") {  // a <= b compiles to (a < b) or (a = b)
        result = mk_or({mk_atom(diff, Rel::Lt), mk_atom(diff, Rel::Eq)});
      } else {  // >=
        result = mk_or({mk_atom(diff.negated(), Rel::Lt), mk_atom(std::move(diff), Rel::Eq)});
      }
    } else {
      fail("unknown formula operator: " + head);
    }
    skip_ws();
    expect(')');
    return result;
  }
};

}  // namespace

Parsed parse(const std::string& text) {
  Parser p(text);
  Parsed result = p.parse_any();
  if (std::holds_alternative<FormulaPtr>(result))
    return alpha_normalize(std::get<FormulaPtr>(result));
  return result;
}

FormulaPtr parse_formula(const std::string& text) { return Parser(text).parse_formula_only(); }

TermPtr parse_term_text(const std::string& text) { return Parser(text).parse_term_only(); }

RationalFunction parse_scalar_text(const std::string& text) {
  return Parser(text).parse_scalar_only();
}

}  // namespace densevec
