#include "support/oracle.hpp"

#include <cassert>

namespace densevec::oracle {

namespace {

// --- virtual substitution over one component variable ----------------------

// Normalized view of an atom w.r.t. z: z REL bound with the coefficient sign
// folded into the relation.
enum class ZRel { Below, Above };  // z < bound / bound < z

struct ZView {
  ZRel rel;
  LinearTerm bound;
};

ZView z_view(const Atom& a, const std::string& z) {
  RationalFunction c = a.lhs.coeff_of(z);
  auto coeff = c.as_constant();
  assert(coeff && !(*coeff == 0));
  LinearTerm bound = a.lhs.without(z).scaled(RationalFunction(Rational(-1) / *coeff));
  return {*coeff > 0 ? ZRel::Below : ZRel::Above, std::move(bound)};
}

// Substitutes the virtual point into one atom containing z. Equalities and
// disequalities against a virtual point resolve outright: base + eps matches
// no term value, and nothing finite sits below minus infinity.
FormulaPtr subst_minus_infinity(const Atom& a, const std::string& z) {
  if (a.rel == Rel::Eq) return mk_false();
  if (a.rel == Rel::Neq) return mk_true();
  ZView v = z_view(a, z);
  return v.rel == ZRel::Below ? mk_true() : mk_false();
}

FormulaPtr subst_above_bound(const Atom& a, const std::string& z, const LinearTerm& base) {
  if (a.rel == Rel::Eq) return mk_false();
  if (a.rel == Rel::Neq) return mk_true();
  ZView v = z_view(a, z);
  if (v.rel == ZRel::Below)  // base + eps < bound  <=>  base < bound
    return mk_atom(base.minus(v.bound), Rel::Lt);
  // bound < base + eps  <=>  bound < base or bound = base
  LinearTerm diff = v.bound.minus(base);
  return mk_or({mk_atom(diff, Rel::Lt), mk_atom(diff, Rel::Eq)});
}

FormulaPtr substitute_point(const FormulaPtr& f, const std::string& z,
                            const LinearTerm* base /* null = minus infinity */) {
  switch (f->kind) {
    case Formula::Kind::Atom: {
      if (f->atom.lhs.coeff_of(z).is_zero()) return f;
      return base ? subst_above_bound(f->atom, z, *base) : subst_minus_infinity(f->atom, z);
    }
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      std::vector<FormulaPtr> kids;
      kids.reserve(f->kids.size());
      for (const auto& k : f->kids) kids.push_back(substitute_point(k, z, base));
      return f->kind == Formula::Kind::And ? mk_and(std::move(kids)) : mk_or(std::move(kids));
    }
    default:
      assert(false && "virtual substitution runs on and/or trees");
      return f;
  }
}

void collect_lower_bounds(const FormulaPtr& f, const std::string& z,
                          std::vector<LinearTerm>& out) {
  if (f->kind == Formula::Kind::Atom) {
    // The solution set is open, so only strict lower bounds can start an
    // interval of it.
    if (f->atom.rel != Rel::Lt || f->atom.lhs.coeff_of(z).is_zero()) return;
    ZView v = z_view(f->atom, z);
    if (v.rel == ZRel::Above) out.push_back(std::move(v.bound));
    return;
  }
  for (const auto& k : f->kids) collect_lower_bounds(k, z, out);
}

// exists z F for a strict and/or tree: the solution set in z is open, so it
// is nonempty iff it reaches minus infinity or starts just above some lower
// bound.
FormulaPtr vs_elim_component(const std::string& z, const FormulaPtr& f) {
  std::vector<LinearTerm> lowers;
  collect_lower_bounds(f, z, lowers);
  std::vector<FormulaPtr> cases;
  cases.push_back(substitute_point(f, z, nullptr));
  for (const auto& low : lowers) cases.push_back(substitute_point(f, z, &low));
  return simplify_qf(mk_or(std::move(cases)));
}

}  // namespace

std::vector<Atom> equality_phase(const std::string& x, std::vector<Atom> literals) {
  while (true) {
    bool substituted = false;
    for (std::size_t i = 0; i < literals.size() && !substituted; ++i) {
      const Atom& lit = literals[i];
      if (lit.rel != Rel::Eq) continue;
      RationalFunction q = lit.lhs.coeff_of(x);
      if (q.is_zero()) continue;
      LinearTerm solution = lit.lhs.without(x).scaled(-(q.inverse()));
      std::vector<Atom> rest;
      for (std::size_t j = 0; j < literals.size(); ++j) {
        if (j == i) continue;
        rest.push_back(Atom{literals[j].lhs.substituted(x, solution), literals[j].rel});
      }
      literals = std::move(rest);
      substituted = true;
    }
    if (!substituted) return literals;
  }
}

namespace {

FormulaPtr vs_conjunct(const std::string& x, std::vector<Atom> literals) {
  literals = equality_phase(x, std::move(literals));

  std::vector<FormulaPtr> parts;
  std::vector<const Atom*> with_x;
  std::vector<RationalFunction> qs;
  for (const auto& lit : literals) {
    RationalFunction q = lit.lhs.coeff_of(x);
    if (q.is_zero()) {
      parts.push_back(mk_atom(lit));
    } else {
      with_x.push_back(&lit);
      qs.push_back(std::move(q));
    }
  }

  CoordinateDecomposition dec = q_basis(qs);
  std::vector<std::string> components;
  for (std::size_t i = 0; i < dec.basis.size(); ++i)
    components.push_back("$w" + std::to_string(i));

  std::vector<FormulaPtr> strict;
  for (std::size_t j = 0; j < with_x.size(); ++j) {
    if (with_x[j]->rel == Rel::Neq) continue;  // hyperplane avoidance
    assert(with_x[j]->rel == Rel::Lt);
    LinearTerm rewritten = with_x[j]->lhs.without(x);
    for (std::size_t i = 0; i < components.size(); ++i)
      if (dec.matrix[j][i] != 0)
        rewritten.add_coeff(components[i], RationalFunction(dec.matrix[j][i]));
    strict.push_back(mk_atom(std::move(rewritten), Rel::Lt));
  }

  FormulaPtr body = mk_and(std::move(strict));
  for (const auto& z : components) body = vs_elim_component(z, body);
  parts.push_back(std::move(body));
  return simplify_qf(mk_and(std::move(parts)));
}

FormulaPtr vs_exists_one(const std::string& x, const FormulaPtr& qf) {
  if (!free_vars(qf).count(x)) return simplify_qf(qf);
  if (qf->kind == Formula::Kind::Or) {
    std::vector<FormulaPtr> kids;
    for (const auto& k : qf->kids) kids.push_back(vs_exists_one(x, k));
    return simplify_qf(mk_or(std::move(kids)));
  }
  if (qf->kind == Formula::Kind::And) {
    std::vector<FormulaPtr> with_x, without_x;
    for (const auto& k : qf->kids)
      (free_vars(k).count(x) ? with_x : without_x).push_back(k);
    if (!without_x.empty()) {
      without_x.push_back(vs_exists_one(x, mk_and(std::move(with_x))));
      return simplify_qf(mk_and(std::move(without_x)));
    }
  }
  std::vector<FormulaPtr> disjuncts;
  for (auto& conjunct : dnf_literals(qf)) disjuncts.push_back(vs_conjunct(x, conjunct));
  return simplify_qf(mk_or(std::move(disjuncts)));
}

FormulaPtr vs_exists_inf_one(const std::string& x, const FormulaPtr& qf) {
  std::vector<FormulaPtr> disjuncts;
  for (auto& conjunct : dnf_literals(qf)) {
    bool pinned = false;
    for (const auto& lit : conjunct)
      if (lit.rel == Rel::Eq && !lit.lhs.coeff_of(x).is_zero()) pinned = true;
    if (pinned) continue;
    disjuncts.push_back(vs_conjunct(x, conjunct));
  }
  return simplify_qf(mk_or(std::move(disjuncts)));
}

}  // namespace

FormulaPtr vs_elim_exists(const std::string& x, const FormulaPtr& qf) {
  return vs_exists_one(x, qf);
}

FormulaPtr vs_eliminate(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::Atom:
      return f;
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Not: {
      Formula out = *f;
      out.kids.clear();
      for (const auto& k : f->kids) out.kids.push_back(vs_eliminate(k));
      return std::make_shared<const Formula>(std::move(out));
    }
    case Formula::Kind::Exists: {
      FormulaPtr body = vs_eliminate(f->kids[0]);
      for (auto it = f->binders.rbegin(); it != f->binders.rend(); ++it)
        body = vs_exists_one(*it, body);
      return body;
    }
    case Formula::Kind::Forall: {
      FormulaPtr body = to_nnf_dnf(mk_not(vs_eliminate(f->kids[0])), NormalMode::Nnf);
      for (auto it = f->binders.rbegin(); it != f->binders.rend(); ++it)
        body = vs_exists_one(*it, body);
      return simplify_qf(to_nnf_dnf(mk_not(body), NormalMode::Nnf));
    }
    case Formula::Kind::ExistsInf:
      return vs_exists_inf_one(f->binders[0], vs_eliminate(f->kids[0]));
  }
  return f;
}

bool vs_decide(const FormulaPtr& sentence, const Completion& c) {
  return eval_closed(vs_eliminate(sentence), c);
}

std::vector<LinConstraint> component_constraints(const std::string& x,
                                                 const std::vector<Atom>& literals,
                                                 ModelSession& session,
                                                 const Environment& env) {
  std::vector<RationalFunction> qs;
  for (const auto& lit : literals) {
    RationalFunction q = lit.lhs.coeff_of(x);
    if (!q.is_zero()) qs.push_back(std::move(q));
  }
  CoordinateDecomposition dec = q_basis(qs);

  std::vector<LinConstraint> out;
  std::size_t with_x_index = 0;
  for (const auto& lit : literals) {
    LinConstraint c;
    c.rel = lit.rel;
    c.constant = session.eval_term(lit.lhs.without(x), env);
    if (!lit.lhs.coeff_of(x).is_zero()) {
      const QVector& row = dec.matrix[with_x_index++];
      for (std::size_t i = 0; i < row.size(); ++i)
        if (row[i] != 0) c.coeffs.emplace("$z" + std::to_string(i), row[i]);
    }
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace densevec::oracle
