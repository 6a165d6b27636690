#include <algorithm>
#include <cassert>

#include "densevec/logic.hpp"

namespace densevec {

bool is_reserved_name(const std::string& name) {
  static const std::set<std::string> reserved = {
      "one", "t",   "and",    "or",     "not",    "implies", "exists",
      "lam", "neg", "forall", "exists-inf", "const"};
  return reserved.count(name) > 0;
}

// ---------------------------------------------------------------------------
// Raw terms

namespace {
TermPtr make_term(Term t) { return std::make_shared<const Term>(std::move(t)); }
}  // namespace

TermPtr term_var(std::string name) {
  return make_term({.kind = Term::Kind::Var, .var = std::move(name)});
}
TermPtr term_one() { return make_term({.kind = Term::Kind::One}); }
TermPtr term_const(RationalFunction value) {
  return make_term({.kind = Term::Kind::Const, .scalar = std::move(value)});
}
TermPtr term_add(std::vector<TermPtr> args) {
  return make_term({.kind = Term::Kind::Add, .args = std::move(args)});
}
TermPtr term_neg(TermPtr arg) {
  return make_term({.kind = Term::Kind::Neg, .args = {std::move(arg)}});
}
TermPtr term_sub(TermPtr a, TermPtr b) {
  return make_term({.kind = Term::Kind::Sub, .args = {std::move(a), std::move(b)}});
}
TermPtr term_scale(RationalFunction factor, TermPtr arg) {
  return make_term(
      {.kind = Term::Kind::Scale, .scalar = std::move(factor), .args = {std::move(arg)}});
}

// ---------------------------------------------------------------------------
// LinearTerm

LinearTerm LinearTerm::variable(const std::string& name) {
  LinearTerm t;
  t.coeffs.emplace(name, RationalFunction(1));
  return t;
}

LinearTerm LinearTerm::of_constant(const RationalFunction& value) {
  LinearTerm t;
  t.constant = value;
  return t;
}

RationalFunction LinearTerm::coeff_of(const std::string& name) const {
  auto it = coeffs.find(name);
  return it == coeffs.end() ? RationalFunction() : it->second;
}

void LinearTerm::add_coeff(const std::string& name, const RationalFunction& delta) {
  if (delta.is_zero()) return;
  auto [it, inserted] = coeffs.emplace(name, delta);
  if (!inserted) {
    it->second = it->second + delta;
    if (it->second.is_zero()) coeffs.erase(it);
  }
}

LinearTerm LinearTerm::plus(const LinearTerm& o) const {
  LinearTerm out = *this;
  out.constant = out.constant + o.constant;
  for (const auto& [name, q] : o.coeffs) out.add_coeff(name, q);
  return out;
}

LinearTerm LinearTerm::negated() const {
  LinearTerm out;
  out.constant = -constant;
  for (const auto& [name, q] : coeffs) out.coeffs.emplace(name, -q);
  return out;
}

LinearTerm LinearTerm::scaled(const RationalFunction& factor) const {
  LinearTerm out;
  if (factor.is_zero()) return out;
  out.constant = constant * factor;
  for (const auto& [name, q] : coeffs) out.coeffs.emplace(name, q * factor);
  return out;
}

LinearTerm LinearTerm::without(const std::string& name) const {
  LinearTerm out = *this;
  out.coeffs.erase(name);
  return out;
}

LinearTerm LinearTerm::substituted(const std::string& name, const LinearTerm& replacement) const {
  RationalFunction q = coeff_of(name);
  if (q.is_zero()) return *this;
  return without(name).plus(replacement.scaled(q));
}

LinearTerm normalize_to_linear(const TermPtr& term) {
  assert(term);
  switch (term->kind) {
    case Term::Kind::Var:
      return LinearTerm::variable(term->var);
    case Term::Kind::One:
      return LinearTerm::of_constant(RationalFunction(1));
    case Term::Kind::Const:
      return LinearTerm::of_constant(term->scalar);
    case Term::Kind::Add: {
      LinearTerm out;
      for (const auto& a : term->args) out = out.plus(normalize_to_linear(a));
      return out;
    }
    case Term::Kind::Neg:
      return normalize_to_linear(term->args[0]).negated();
    case Term::Kind::Sub:
      return normalize_to_linear(term->args[0]).minus(normalize_to_linear(term->args[1]));
    case Term::Kind::Scale:
      // lam distributes over + and composes multiplicatively (T1 laws).
      return normalize_to_linear(term->args[0]).scaled(term->scalar);
  }
  return {};
}

// ---------------------------------------------------------------------------
// Formula construction

namespace {
FormulaPtr make_formula(Formula f) { return std::make_shared<const Formula>(std::move(f)); }
}  // namespace

FormulaPtr mk_atom(Atom a) {
  return make_formula({.kind = Formula::Kind::Atom, .atom = std::move(a)});
}

FormulaPtr mk_atom(LinearTerm lhs, Rel rel) { return mk_atom(Atom{std::move(lhs), rel}); }

FormulaPtr mk_true() { return mk_atom(LinearTerm{}, Rel::Eq); }
FormulaPtr mk_false() { return mk_atom(LinearTerm{}, Rel::Lt); }

FormulaPtr mk_and(std::vector<FormulaPtr> kids) {
  if (kids.empty()) return mk_true();
  if (kids.size() == 1) return kids[0];
  return make_formula({.kind = Formula::Kind::And, .kids = std::move(kids)});
}

FormulaPtr mk_or(std::vector<FormulaPtr> kids) {
  if (kids.empty()) return mk_false();
  if (kids.size() == 1) return kids[0];
  return make_formula({.kind = Formula::Kind::Or, .kids = std::move(kids)});
}

FormulaPtr mk_not(FormulaPtr f) {
  return make_formula({.kind = Formula::Kind::Not, .kids = {std::move(f)}});
}

FormulaPtr mk_exists(std::vector<std::string> vars, FormulaPtr body) {
  assert(!vars.empty());
  return make_formula(
      {.kind = Formula::Kind::Exists, .kids = {std::move(body)}, .binders = std::move(vars)});
}

FormulaPtr mk_forall(std::vector<std::string> vars, FormulaPtr body) {
  assert(!vars.empty());
  return make_formula(
      {.kind = Formula::Kind::Forall, .kids = {std::move(body)}, .binders = std::move(vars)});
}

FormulaPtr mk_exists_inf(std::string var, FormulaPtr body) {
  return make_formula({.kind = Formula::Kind::ExistsInf,
                       .kids = {std::move(body)},
                       .binders = {std::move(var)}});
}

bool is_true(const FormulaPtr& f) {
  return f->kind == Formula::Kind::Atom && f->atom.rel == Rel::Eq && f->atom.lhs.is_zero();
}

bool is_false(const FormulaPtr& f) {
  return f->kind == Formula::Kind::Atom && f->atom.rel == Rel::Lt && f->atom.lhs.is_zero();
}

bool is_quantifier_free(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::Atom:
      return true;
    case Formula::Kind::Exists:
    case Formula::Kind::Forall:
    case Formula::Kind::ExistsInf:
      return false;
    default:
      return std::all_of(f->kids.begin(), f->kids.end(), is_quantifier_free);
  }
}

bool structurally_equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->kind != b->kind || a->binders != b->binders || a->kids.size() != b->kids.size())
    return false;
  if (a->kind == Formula::Kind::Atom) return a->atom == b->atom;
  for (std::size_t i = 0; i < a->kids.size(); ++i)
    if (!structurally_equal(a->kids[i], b->kids[i])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Variables, renaming, alpha normalization

namespace {

void collect_free(const FormulaPtr& f, std::set<std::string>& bound,
                  std::set<std::string>& out) {
  switch (f->kind) {
    case Formula::Kind::Atom:
      for (const auto& [name, q] : f->atom.lhs.coeffs)
        if (!bound.count(name)) out.insert(name);
      return;
    case Formula::Kind::Exists:
    case Formula::Kind::Forall:
    case Formula::Kind::ExistsInf: {
      std::vector<std::string> added;
      for (const auto& v : f->binders)
        if (bound.insert(v).second) added.push_back(v);
      collect_free(f->kids[0], bound, out);
      for (const auto& v : added) bound.erase(v);
      return;
    }
    default:
      for (const auto& k : f->kids) collect_free(k, bound, out);
  }
}

void collect_all_names(const FormulaPtr& f, std::set<std::string>& out) {
  if (f->kind == Formula::Kind::Atom) {
    for (const auto& [name, q] : f->atom.lhs.coeffs) out.insert(name);
    return;
  }
  out.insert(f->binders.begin(), f->binders.end());
  for (const auto& k : f->kids) collect_all_names(k, out);
}

FormulaPtr rename_rec(const FormulaPtr& f, std::map<std::string, std::string> renaming) {
  if (renaming.empty()) return f;
  switch (f->kind) {
    case Formula::Kind::Atom: {
      LinearTerm lhs = LinearTerm::of_constant(f->atom.lhs.constant);
      for (const auto& [name, q] : f->atom.lhs.coeffs) {
        auto it = renaming.find(name);
        lhs.add_coeff(it == renaming.end() ? name : it->second, q);
      }
      return mk_atom(std::move(lhs), f->atom.rel);
    }
    case Formula::Kind::Exists:
    case Formula::Kind::Forall:
    case Formula::Kind::ExistsInf: {
      std::map<std::string, std::string> inner = renaming;
      for (const auto& v : f->binders) inner.erase(v);
      FormulaPtr body = rename_rec(f->kids[0], std::move(inner));
      Formula out = *f;
      out.kids = {std::move(body)};
      return std::make_shared<const Formula>(std::move(out));
    }
    default: {
      Formula out = *f;
      out.kids.clear();
      for (const auto& k : f->kids) out.kids.push_back(rename_rec(k, renaming));
      return std::make_shared<const Formula>(std::move(out));
    }
  }
}

FormulaPtr alpha_rec(const FormulaPtr& f, const std::map<std::string, std::string>& scope,
                     std::set<std::string>& used) {
  switch (f->kind) {
    case Formula::Kind::Atom:
      return rename_rec(f, scope);
    case Formula::Kind::Exists:
    case Formula::Kind::Forall:
    case Formula::Kind::ExistsInf: {
      std::map<std::string, std::string> inner = scope;
      std::vector<std::string> binders;
      for (const auto& v : f->binders) {
        std::string fresh = v;
        while (used.count(fresh)) fresh += "'";
        used.insert(fresh);
        if (fresh != v)
          inner[v] = fresh;
        else
          inner.erase(v);
        binders.push_back(std::move(fresh));
      }
      Formula out = *f;
      out.binders = std::move(binders);
      out.kids = {alpha_rec(f->kids[0], inner, used)};
      return std::make_shared<const Formula>(std::move(out));
    }
    default: {
      Formula out = *f;
      out.kids.clear();
      for (const auto& k : f->kids) out.kids.push_back(alpha_rec(k, scope, used));
      return std::make_shared<const Formula>(std::move(out));
    }
  }
}

}  // namespace

std::set<std::string> free_vars(const FormulaPtr& f) {
  std::set<std::string> bound, out;
  collect_free(f, bound, out);
  return out;
}

FormulaPtr rename_free(const FormulaPtr& f, const std::map<std::string, std::string>& renaming) {
  return rename_rec(f, renaming);
}

FormulaPtr alpha_normalize(const FormulaPtr& f, const std::set<std::string>& avoid) {
  std::set<std::string> used = free_vars(f);
  used.insert(avoid.begin(), avoid.end());
  return alpha_rec(f, {}, used);
}

void require_sentence(const FormulaPtr& f) {
  auto free = free_vars(f);
  if (!free.empty()) throw UnboundVariableError(*free.begin());
}

}  // namespace densevec
