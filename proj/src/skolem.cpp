#include "densevec/skolem.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <sstream>

namespace densevec {

// ---------------------------------------------------------------------------
// Signatures

SkolemFn make_skolem_fn(std::string name, std::vector<std::string> params, FormulaPtr theta) {
  std::set<std::string> free = free_vars(theta);
  for (const auto& p : params) free.erase(p);
  if (free.size() != 1)
    throw MalformedThetaError("theta needs exactly one witness variable, found " +
                              std::to_string(free.size()));
  SkolemFn fn;
  fn.name = std::move(name);
  fn.params = std::move(params);
  fn.out = *free.begin();
  fn.theta = std::move(theta);
  return fn;
}

const SkolemFn* SkolemSignature::find(const std::string& name) const {
  for (const auto& fn : fns)
    if (fn.name == name) return &fn;
  return nullptr;
}

const SkolemFn& SkolemSignature::require(const std::string& name) const {
  const SkolemFn* fn = find(name);
  if (!fn) throw UnknownSymbolError(name);
  return *fn;
}

SkolemSignature iterate_language(
    const SkolemSignature& sig,
    const std::vector<std::pair<std::vector<std::string>, FormulaPtr>>& new_thetas) {
  SkolemSignature next = sig;
  next.level = sig.level + 1;
  for (std::size_t i = 0; i < new_thetas.size(); ++i) {
    std::string name = "f" + std::to_string(next.level) + "_" + std::to_string(i);
    if (next.find(name)) throw MalformedThetaError("fresh name collides: " + name);
    next.fns.push_back(make_skolem_fn(std::move(name), new_thetas[i].first, new_thetas[i].second));
  }
  return next;
}

// ---------------------------------------------------------------------------
// Term chains and the Lemma-style split

ChainSplit split_term_chain(const SkolemSignature& sig, const TermChain& chain) {
  ChainSplit out;
  std::vector<FormulaPtr> base_eqs;
  for (std::size_t i = 0; i < chain.steps.size(); ++i) {
    const ChainStep& step = chain.steps[i];
    std::string out_var = "y" + std::to_string(i + 1);
    auto check_ref = [&](const std::string& name) {
      if (std::find(chain.inputs.begin(), chain.inputs.end(), name) != chain.inputs.end())
        return;
      // outputs y1..y_{i-1} only
      for (std::size_t j = 1; j <= i; ++j)
        if (name == "y" + std::to_string(j)) return;
      throw UnknownSymbolError("chain step " + std::to_string(i + 1) +
                               " references unavailable variable " + name);
    };
    if (step.skolem) {
      const SkolemFn& fn = sig.require(step.fn);
      if (fn.params.size() != step.args.size())
        throw ArityMismatchError(step.fn + " expects " + std::to_string(fn.params.size()) +
                                 " arguments");
      for (const auto& a : step.args) check_ref(a);
      out.config.conjuncts.push_back(ConfigConjunct{step.fn, step.args, out_var});
    } else {
      for (const auto& [name, q] : step.base.coeffs) check_ref(name);
      base_eqs.push_back(
          mk_atom(LinearTerm::variable(out_var).minus(step.base), Rel::Eq));
    }
  }
  out.base = base_eqs.empty() ? mk_true() : mk_and(std::move(base_eqs));
  return out;
}

// ---------------------------------------------------------------------------
// Eligibility coding

namespace {

// Renames free variables with binder capture avoided.
FormulaPtr safe_rename(const FormulaPtr& f, const std::map<std::string, std::string>& renaming) {
  std::set<std::string> avoid;
  for (const auto& [from, to] : renaming) avoid.insert(to);
  return rename_free(alpha_normalize(f, avoid), renaming);
}

FormulaPtr theta_at(const SkolemFn& fn, const std::vector<std::string>& args,
                    const std::string& out) {
  if (args.size() != fn.params.size()) throw ArityMismatchError(fn.name);
  std::map<std::string, std::string> renaming;
  for (std::size_t i = 0; i < args.size(); ++i) renaming[fn.params[i]] = args[i];
  renaming[fn.out] = out;
  return safe_rename(fn.theta, renaming);
}

FormulaPtr implies(FormulaPtr a, FormulaPtr b) {
  return mk_or({mk_not(std::move(a)), std::move(b)});
}

}  // namespace

FormulaPtr eligibility_code(const SkolemSignature& sig, const UniformConfiguration& config) {
  std::vector<FormulaPtr> clauses;

  // Witness preservation: where theta has a witness, the imposed output is one.
  for (const auto& c : config.conjuncts) {
    const SkolemFn& fn = sig.require(c.fn);
    std::set<std::string> avoid(c.args.begin(), c.args.end());
    avoid.insert(c.out);
    std::string w = "w";
    while (avoid.count(w)) w += "'";
    FormulaPtr some_witness = mk_exists({w}, theta_at(fn, c.args, w));
    clauses.push_back(implies(std::move(some_witness), theta_at(fn, c.args, c.out)));
  }

  // Functionality: same symbol on equal arguments must produce equal outputs.
  for (std::size_t j = 0; j < config.conjuncts.size(); ++j) {
    for (std::size_t l = j + 1; l < config.conjuncts.size(); ++l) {
      const ConfigConjunct& a = config.conjuncts[j];
      const ConfigConjunct& b = config.conjuncts[l];
      if (a.fn != b.fn) continue;
      std::vector<FormulaPtr> arg_eqs;
      for (std::size_t i = 0; i < a.args.size(); ++i)
        arg_eqs.push_back(mk_atom(
            LinearTerm::variable(a.args[i]).minus(LinearTerm::variable(b.args[i])), Rel::Eq));
      FormulaPtr out_eq =
          mk_atom(LinearTerm::variable(a.out).minus(LinearTerm::variable(b.out)), Rel::Eq);
      clauses.push_back(implies(mk_and(std::move(arg_eqs)), std::move(out_eq)));
    }
  }

  if (clauses.empty()) return mk_true();
  return alpha_normalize(mk_and(std::move(clauses)));
}

// ---------------------------------------------------------------------------
// Skolem-language formulas

namespace {
SkFormulaPtr make_sk(SkFormula f) { return std::make_shared<const SkFormula>(std::move(f)); }

bool all_base(const std::vector<SkFormulaPtr>& kids) {
  for (const auto& k : kids)
    if (k->kind != SkFormula::Kind::Base) return false;
  return true;
}

std::vector<FormulaPtr> base_kids(const std::vector<SkFormulaPtr>& kids) {
  std::vector<FormulaPtr> out;
  out.reserve(kids.size());
  for (const auto& k : kids) out.push_back(k->base);
  return out;
}
}  // namespace

// Constructors fuse pure-base children back into one base leaf, so printed
// output reparses with identical leaf boundaries.
SkFormulaPtr sk_base(FormulaPtr f) {
  return make_sk({.kind = SkFormula::Kind::Base, .base = std::move(f)});
}
SkFormulaPtr sk_eq(ConfigConjunct eq) {
  return make_sk({.kind = SkFormula::Kind::SkolemEq, .eq = std::move(eq)});
}
SkFormulaPtr sk_and(std::vector<SkFormulaPtr> kids) {
  if (kids.size() == 1) return kids[0];
  if (all_base(kids)) return sk_base(mk_and(base_kids(kids)));
  return make_sk({.kind = SkFormula::Kind::And, .kids = std::move(kids)});
}
SkFormulaPtr sk_or(std::vector<SkFormulaPtr> kids) {
  if (kids.size() == 1) return kids[0];
  if (all_base(kids)) return sk_base(mk_or(base_kids(kids)));
  return make_sk({.kind = SkFormula::Kind::Or, .kids = std::move(kids)});
}
SkFormulaPtr sk_not(SkFormulaPtr f) {
  if (f->kind == SkFormula::Kind::Base) return sk_base(mk_not(f->base));
  return make_sk({.kind = SkFormula::Kind::Not, .kids = {std::move(f)}});
}
SkFormulaPtr sk_exists(std::vector<std::string> vars, SkFormulaPtr body) {
  if (body->kind == SkFormula::Kind::Base)
    return sk_base(mk_exists(std::move(vars), body->base));
  return make_sk({.kind = SkFormula::Kind::Exists,
                  .kids = {std::move(body)},
                  .binders = std::move(vars)});
}
SkFormulaPtr sk_forall(std::vector<std::string> vars, SkFormulaPtr body) {
  if (body->kind == SkFormula::Kind::Base)
    return sk_base(mk_forall(std::move(vars), body->base));
  return make_sk({.kind = SkFormula::Kind::Forall,
                  .kids = {std::move(body)},
                  .binders = std::move(vars)});
}
SkFormulaPtr sk_exists_inf(std::string var, SkFormulaPtr body) {
  if (body->kind == SkFormula::Kind::Base)
    return sk_base(mk_exists_inf(std::move(var), body->base));
  return make_sk({.kind = SkFormula::Kind::ExistsInf,
                  .kids = {std::move(body)},
                  .binders = {std::move(var)}});
}

SkFormulaPtr sk_alpha_leaves(const SkFormulaPtr& f) {
  if (f->kind == SkFormula::Kind::Base) return sk_base(alpha_normalize(f->base));
  if (f->kind == SkFormula::Kind::SkolemEq) return f;
  SkFormula out = *f;
  out.kids.clear();
  for (const auto& k : f->kids) out.kids.push_back(sk_alpha_leaves(k));
  return make_sk(std::move(out));
}

std::set<std::string> sk_free_vars(const SkFormulaPtr& f) {
  switch (f->kind) {
    case SkFormula::Kind::Base:
      return free_vars(f->base);
    case SkFormula::Kind::SkolemEq: {
      std::set<std::string> out(f->eq.args.begin(), f->eq.args.end());
      out.insert(f->eq.out);
      return out;
    }
    case SkFormula::Kind::Exists:
    case SkFormula::Kind::Forall:
    case SkFormula::Kind::ExistsInf: {
      std::set<std::string> out = sk_free_vars(f->kids[0]);
      for (const auto& v : f->binders) out.erase(v);
      return out;
    }
    default: {
      std::set<std::string> out;
      for (const auto& k : f->kids) {
        auto sub = sk_free_vars(k);
        out.insert(sub.begin(), sub.end());
      }
      return out;
    }
  }
}

std::string sk_print(const SkFormulaPtr& f) {
  switch (f->kind) {
    case SkFormula::Kind::Base:
      return print_canonical(f->base);
    case SkFormula::Kind::SkolemEq: {
      std::string out = "(= (" + f->eq.fn;
      for (const auto& a : f->eq.args) out += " " + a;
      return out + ") " + f->eq.out + ")";
    }
    case SkFormula::Kind::And:
    case SkFormula::Kind::Or: {
      std::string out = f->kind == SkFormula::Kind::And ? "(and" : "(or";
      for (const auto& k : f->kids) out += " " + sk_print(k);
      return out + ")";
    }
    case SkFormula::Kind::Not:
      return "(not " + sk_print(f->kids[0]) + ")";
    case SkFormula::Kind::Exists:
    case SkFormula::Kind::Forall:
    case SkFormula::Kind::ExistsInf: {
      std::string head = f->kind == SkFormula::Kind::Exists   ? "exists"
                         : f->kind == SkFormula::Kind::Forall ? "forall"
                                                              : "exists-inf";
      std::string out = "(" + head + " (";
      for (std::size_t i = 0; i < f->binders.size(); ++i)
        out += (i ? " " : "") + f->binders[i];
      return out + ") " + sk_print(f->kids[0]) + ")";
    }
  }
  return "";
}

bool sk_equal(const SkFormulaPtr& a, const SkFormulaPtr& b) {
  if (a->kind != b->kind || a->binders != b->binders || a->kids.size() != b->kids.size())
    return false;
  if (a->kind == SkFormula::Kind::Base) return structurally_equal(a->base, b->base);
  if (a->kind == SkFormula::Kind::SkolemEq) return a->eq == b->eq;
  for (std::size_t i = 0; i < a->kids.size(); ++i)
    if (!sk_equal(a->kids[i], b->kids[i])) return false;
  return true;
}

SkFormulaPtr axiom_instance(const SkolemSignature& sig, const FormulaPtr& phi,
                            const UniformConfiguration& config,
                            const std::vector<std::string>& variables, std::size_t k) {
  const std::size_t n = variables.size();
  if (k >= n) throw ArityMismatchError("need k < n universal variables");
  std::set<std::string> scope(variables.begin(), variables.end());
  for (const auto& v : free_vars(phi))
    if (!scope.count(v)) throw ArityMismatchError("phi uses unknown variable " + v);
  for (const auto& c : config.conjuncts) {
    sig.require(c.fn);
    for (const auto& a : c.args)
      if (!scope.count(a)) throw ArityMismatchError("config uses unknown variable " + a);
    if (!scope.count(c.out)) throw ArityMismatchError("config uses unknown variable " + c.out);
  }

  std::vector<std::string> witnesses(variables.begin() + static_cast<long>(k), variables.end());

  // Antecedent: infinitely many witness tuples satisfying phi and the
  // eligibility code. The exists-inf block scopes over both and is expanded
  // as nested single-variable quantifiers.
  FormulaPtr many = mk_and({phi, eligibility_code(sig, config)});
  for (auto it = witnesses.rbegin(); it != witnesses.rend(); ++it)
    many = mk_exists_inf(*it, std::move(many));

  std::vector<SkFormulaPtr> with_config = {sk_base(phi)};
  for (const auto& c : config.conjuncts) with_config.push_back(sk_eq(c));
  SkFormulaPtr witnessed = sk_exists(witnesses, sk_and(std::move(with_config)));

  SkFormulaPtr body = sk_or({sk_not(sk_base(std::move(many))), std::move(witnessed)});
  if (k > 0)
    body = sk_forall(
        std::vector<std::string>(variables.begin(), variables.begin() + static_cast<long>(k)),
        std::move(body));
  return sk_alpha_leaves(body);
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

// Token-level reader that can hand back balanced subexpressions verbatim, so
// formula payloads go through the main parser.
class SkReader {
 public:
  explicit SkReader(const std::string& text) : text_(text) {}

  void ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool at_end() {
    ws();
    return pos_ >= text_.size();
  }

  char peek() {
    ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  void expect(char c) {
    ws();
    if (peek() != c) throw ParseError(std::string("expected '") + c + "'", 1, 1);
    ++pos_;
  }

  std::string token() {
    ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
           text_[pos_] != '(' && text_[pos_] != ')')
      ++pos_;
    if (start == pos_) throw ParseError("expected a token", 1, 1);
    return text_.substr(start, pos_ - start);
  }

  // A balanced parenthesized expression or a single token, verbatim.
  std::string balanced() {
    ws();
    std::size_t start = pos_;
    if (peek() != '(') return token();
    int depth = 0;
    while (pos_ < text_.size()) {
      if (text_[pos_] == '(') ++depth;
      if (text_[pos_] == ')') {
        --depth;
        if (depth == 0) {
          ++pos_;
          return text_.substr(start, pos_ - start);
        }
      }
      ++pos_;
    }
    throw ParseError("unbalanced expression", 1, 1);
  }

 private:
  const std::string& text_;
  std::size_t pos_ = 0;
};

std::vector<std::string> read_name_list(SkReader& r) {
  r.expect('(');
  std::vector<std::string> names;
  while (r.peek() != ')') names.push_back(r.token());
  r.expect(')');
  return names;
}

ConfigConjunct read_config_conjunct(SkReader& r) {
  r.expect('(');
  if (r.token() != "=") throw ParseError("config conjunct must be an equality", 1, 1);
  r.expect('(');
  ConfigConjunct c;
  c.fn = r.token();
  while (r.peek() != ')') c.args.push_back(r.token());
  r.expect(')');
  c.out = r.token();
  r.expect(')');
  return c;
}

}  // namespace

std::string print_signature(const SkolemSignature& sig) {
  std::string out = "(signature (level " + std::to_string(sig.level) + ")";
  for (const auto& fn : sig.fns) {
    out += "\n  (skolem-fn " + fn.name + " (";
    for (std::size_t i = 0; i < fn.params.size(); ++i) out += (i ? " " : "") + fn.params[i];
    out += ") " + print_canonical(fn.theta) + ")";
  }
  return out + ")";
}

SkolemSignature parse_signature(const std::string& text) {
  SkReader r(text);
  r.expect('(');
  if (r.token() != "signature") throw ParseError("expected (signature ...)", 1, 1);
  SkolemSignature sig;
  while (r.peek() != ')') {
    r.expect('(');
    std::string head = r.token();
    if (head == "level") {
      sig.level = std::stoi(r.token());
      r.expect(')');
    } else if (head == "skolem-fn") {
      std::string name = r.token();
      std::vector<std::string> params = read_name_list(r);
      FormulaPtr theta = parse_formula(r.balanced());
      r.expect(')');
      if (sig.find(name)) throw ParseError("duplicate skolem symbol " + name, 1, 1);
      sig.fns.push_back(make_skolem_fn(std::move(name), std::move(params), std::move(theta)));
    } else {
      throw ParseError("unknown signature entry: " + head, 1, 1);
    }
  }
  r.expect(')');
  if (!r.at_end()) throw ParseError("trailing input after signature", 1, 1);
  return sig;
}

std::string print_config(const UniformConfiguration& config) {
  std::string out = "(config";
  for (const auto& c : config.conjuncts) {
    out += " (= (" + c.fn;
    for (const auto& a : c.args) out += " " + a;
    out += ") " + c.out + ")";
  }
  return out + ")";
}

UniformConfiguration parse_config(const std::string& text) {
  SkReader r(text);
  r.expect('(');
  if (r.token() != "config") throw ParseError("expected (config ...)", 1, 1);
  UniformConfiguration config;
  while (r.peek() != ')') config.conjuncts.push_back(read_config_conjunct(r));
  r.expect(')');
  if (!r.at_end()) throw ParseError("trailing input after config", 1, 1);
  return config;
}

TermChain parse_chain(const std::string& text) {
  SkReader r(text);
  r.expect('(');
  if (r.token() != "chain") throw ParseError("expected (chain ...)", 1, 1);
  TermChain chain;
  r.expect('(');
  if (r.token() != "inputs") throw ParseError("expected (inputs ...)", 1, 1);
  while (r.peek() != ')') chain.inputs.push_back(r.token());
  r.expect(')');
  while (r.peek() != ')') {
    r.expect('(');
    std::string head = r.token();
    ChainStep step;
    if (head == "skolem") {
      step.skolem = true;
      step.fn = r.token();
      while (r.peek() != ')') step.args.push_back(r.token());
    } else if (head == "base") {
      step.base = normalize_to_linear(parse_term_text(r.balanced()));
    } else {
      throw ParseError("unknown chain step: " + head, 1, 1);
    }
    r.expect(')');
    chain.steps.push_back(std::move(step));
  }
  r.expect(')');
  if (!r.at_end()) throw ParseError("trailing input after chain", 1, 1);
  return chain;
}

namespace {

SkFormulaPtr sk_parse_rec(const SkolemSignature& sig, SkReader& r);

SkFormulaPtr sk_parse_list(const SkolemSignature& sig, SkReader& r, const std::string& head) {
  if (head == "and" || head == "or") {
    std::vector<SkFormulaPtr> kids;
    while (r.peek() != ')') kids.push_back(sk_parse_rec(sig, r));
    if (kids.empty()) throw ParseError(head + " needs arguments", 1, 1);
    return head == "and" ? sk_and(std::move(kids)) : sk_or(std::move(kids));
  }
  if (head == "not") return sk_not(sk_parse_rec(sig, r));
  if (head == "exists" || head == "forall" || head == "exists-inf") {
    std::vector<std::string> vars = read_name_list(r);
    SkFormulaPtr body = sk_parse_rec(sig, r);
    if (head == "exists") return sk_exists(std::move(vars), std::move(body));
    if (head == "forall") return sk_forall(std::move(vars), std::move(body));
    if (vars.size() != 1) throw ParseError("exists-inf binds exactly one variable", 1, 1);
    return sk_exists_inf(vars[0], std::move(body));
  }
  throw ParseError("unknown skolem-formula head: " + head, 1, 1);
}

SkFormulaPtr sk_parse_rec(const SkolemSignature& sig, SkReader& r) {
  std::string expr = r.balanced();

  // Maximal pure-base subtrees stay single leaves; this mirrors the fusing
  // constructors, so print and parse agree on leaf boundaries.
  try {
    return sk_base(parse_formula(expr));
  } catch (const ParseError&) {
  }

  SkReader probe(expr);
  if (probe.peek() != '(') throw ParseError("expected a formula", 1, 1);
  probe.expect('(');
  std::string head = probe.token();
  if (head == "=" && probe.peek() == '(') {
    SkReader inner(expr);
    ConfigConjunct c = read_config_conjunct(inner);
    sig.require(c.fn);
    return sk_eq(std::move(c));
  }
  if (head == "and" || head == "or" || head == "not" || head == "exists" || head == "forall" ||
      head == "exists-inf") {
    SkReader body(expr);
    body.expect('(');
    body.token();
    SkFormulaPtr out = sk_parse_list(sig, body, head);
    body.expect(')');
    if (!body.at_end()) throw ParseError("trailing input in skolem formula", 1, 1);
    return out;
  }
  throw ParseError("cannot parse skolem formula around: " + head, 1, 1);
}

}  // namespace

SkFormulaPtr sk_parse(const SkolemSignature& sig, const std::string& text) {
  SkReader r(text);
  SkFormulaPtr out = sk_parse_rec(sig, r);
  if (!r.at_end()) throw ParseError("trailing input after skolem formula", 1, 1);
  return out;
}

// ---------------------------------------------------------------------------
// Finite model checking

namespace {

const ModelElement* table_lookup(const SkolemTable& table, const std::string& fn,
                                 const std::vector<ModelElement>& args) {
  for (const auto& entry : table)
    if (entry.fn == fn && entry.args == args) return &entry.value;
  return nullptr;
}

}  // namespace

FiniteCheckReport check_finite_model(ModelSession& session, const SkolemSignature& sig,
                                     const SkolemTable& table,
                                     const std::vector<std::vector<ModelElement>>& points) {
  FiniteCheckReport report;
  for (const auto& fn : sig.fns) {
    // exists-y theta reduced once per symbol, then evaluated per point.
    FormulaPtr has_witness = elim_quantifiers(mk_exists({fn.out}, fn.theta)).formula;
    FormulaPtr theta_qf = elim_quantifiers(fn.theta).formula;
    for (std::size_t p = 0; p < points.size(); ++p) {
      const auto& point = points[p];
      if (point.size() != fn.params.size()) continue;
      Environment env;
      for (std::size_t i = 0; i < point.size(); ++i) env.emplace(fn.params[i], point[i]);
      ++report.checks;
      if (!session.eval_formula(has_witness, env)) continue;
      const ModelElement* value = table_lookup(table, fn.name, point);
      if (!value)
        throw MissingAssignmentError(fn.name + " lacks a value at point " + std::to_string(p));
      env.emplace(fn.out, *value);
      if (!session.eval_formula(theta_qf, env))
        report.violations.push_back(
            {fn.name, p, "tabled value fails theta at point " + std::to_string(p)});
    }
  }
  return report;
}

}  // namespace densevec
