#include "densevec/qe.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <set>

namespace densevec {

namespace {

FormulaPtr conjunction_of(std::vector<Atom> literals) {
  std::vector<FormulaPtr> kids;
  kids.reserve(literals.size());
  for (auto& a : literals) kids.push_back(mk_atom(std::move(a)));
  return simplify_qf(mk_and(std::move(kids)));
}

bool contains_component_var(const LinearTerm& t) {
  for (const auto& [name, q] : t.coeffs)
    if (name.rfind("$z", 0) == 0) return true;
  return false;
}

// Fourier-Motzkin over the component variables. All literals are strict.
// Returns nullopt when a trivially false constraint is derived. Every pass
// funnels the accumulated system through a ConjunctBuilder, which keeps the
// derived chains free of dominated bounds.
std::optional<std::vector<Atom>> fourier_motzkin(std::vector<LinearTerm> strict,
                                                 const std::vector<std::string>& components,
                                                 QEStats* stats) {
  std::vector<Atom> all;
  for (auto& lhs : strict) all.push_back(Atom{std::move(lhs), Rel::Lt});

  std::vector<Atom> done;
  std::vector<LinearTerm> live;
  auto settle = [&]() -> bool {
    ConjunctBuilder builder;
    for (auto& a : all)
      if (builder.add(std::move(a)) == ConjunctBuilder::Added::Contradiction) return false;
    done.clear();
    live.clear();
    for (auto& a : builder.literals()) {
      if (contains_component_var(a.lhs))
        live.push_back(std::move(a.lhs));
      else
        done.push_back(std::move(a));
    }
    return true;
  };
  if (!settle()) return std::nullopt;

  for (const auto& z : components) {
    std::vector<LinearTerm> lowers, uppers;
    all.clear();
    for (auto& a : done) all.push_back(std::move(a));
    for (auto& lhs : live) {
      RationalFunction c = lhs.coeff_of(z);
      if (c.is_zero()) {
        all.push_back(Atom{std::move(lhs), Rel::Lt});
        continue;
      }
      auto coeff = c.as_constant();
      assert(coeff && "component coefficients stay rational");
      (*coeff > 0 ? uppers : lowers).push_back(std::move(lhs));
    }
    for (const auto& low : lowers) {
      Rational cl = *low.coeff_of(z).as_constant();
      LinearTerm a = low.without(z);
      for (const auto& up : uppers) {
        Rational cu = *up.coeff_of(z).as_constant();
        LinearTerm b = up.without(z);
        all.push_back(
            Atom{a.scaled(RationalFunction(cu)).plus(b.scaled(RationalFunction(-cl))), Rel::Lt});
        if (stats) ++stats->fm_steps;
      }
    }
    if (!settle()) return std::nullopt;
  }
  if (!live.empty()) throw Error("internal: component variables survived elimination");
  return done;
}

}  // namespace

FormulaPtr elim_exists_conjunct(const std::string& x, const std::vector<Atom>& literals,
                                QEStats* stats) {
  // Equality phase: a pinned x is substituted everywhere.
  for (std::size_t i = 0; i < literals.size(); ++i) {
    const Atom& lit = literals[i];
    if (lit.rel != Rel::Eq) continue;
    RationalFunction q = lit.lhs.coeff_of(x);
    if (q.is_zero()) continue;
    LinearTerm solution = lit.lhs.without(x).scaled(-(q.inverse()));
    std::vector<Atom> rest;
    rest.reserve(literals.size() - 1);
    for (std::size_t j = 0; j < literals.size(); ++j) {
      if (j == i) continue;
      rest.push_back(Atom{literals[j].lhs.substituted(x, solution), literals[j].rel});
    }
    return conjunction_of(std::move(rest));
  }

  // Inequality phase: decompose the x-occurrences over a Q-basis of their
  // coefficients; the components range densely and independently over the
  // parameters (T2), so strict constraints go through Fourier-Motzkin.
  std::vector<Atom> passthrough;
  std::vector<const Atom*> with_x;
  std::vector<RationalFunction> qs;
  for (const auto& lit : literals) {
    RationalFunction q = lit.lhs.coeff_of(x);
    if (q.is_zero()) {
      passthrough.push_back(lit);
    } else {
      with_x.push_back(&lit);
      qs.push_back(std::move(q));
    }
  }
  if (with_x.empty()) return conjunction_of(std::move(passthrough));

  CoordinateDecomposition dec = q_basis(qs);
  std::vector<std::string> components;
  components.reserve(dec.basis.size());
  for (std::size_t i = 0; i < dec.basis.size(); ++i)
    components.push_back("$z" + std::to_string(i));

  std::vector<LinearTerm> strict;
  for (std::size_t j = 0; j < with_x.size(); ++j) {
    LinearTerm rewritten = with_x[j]->lhs.without(x);
    for (std::size_t i = 0; i < components.size(); ++i)
      if (dec.matrix[j][i] != 0)
        rewritten.add_coeff(components[i], RationalFunction(dec.matrix[j][i]));
    switch (with_x[j]->rel) {
      case Rel::Eq:
        throw Error("internal: equality reached the inequality phase");
      case Rel::Neq:
        // A nonempty open component region minus finitely many hyperplanes is
        // still nonempty: component disequalities impose nothing.
        break;
      case Rel::Lt:
        strict.push_back(std::move(rewritten));
        break;
    }
  }

  auto derived = fourier_motzkin(std::move(strict), components, stats);
  if (!derived) return mk_false();
  passthrough.insert(passthrough.end(), derived->begin(), derived->end());
  return conjunction_of(std::move(passthrough));
}

namespace {

FormulaPtr elim_exists_one(const std::string& x, const FormulaPtr& qf, QEStats* stats) {
  if (!free_vars(qf).count(x)) return simplify_qf(qf);
  // Scoping: the existential distributes over disjunctions and ignores
  // x-free conjuncts, which keeps the DNF expansion local.
  if (qf->kind == Formula::Kind::Or) {
    std::vector<FormulaPtr> kids;
    kids.reserve(qf->kids.size());
    for (const auto& k : qf->kids) kids.push_back(elim_exists_one(x, k, stats));
    return simplify_qf(mk_or(std::move(kids)));
  }
  if (qf->kind == Formula::Kind::And) {
    std::vector<FormulaPtr> with_x, without_x;
    for (const auto& k : qf->kids)
      (free_vars(k).count(x) ? with_x : without_x).push_back(k);
    if (!without_x.empty()) {
      without_x.push_back(elim_exists_one(x, mk_and(std::move(with_x)), stats));
      return simplify_qf(mk_and(std::move(without_x)));
    }
  }
  std::vector<std::vector<Atom>> dnf = dnf_literals(qf);
  if (stats) stats->dnf_branches += static_cast<long>(dnf.size());
  std::vector<FormulaPtr> disjuncts;
  disjuncts.reserve(dnf.size());
  for (auto& conjunct : dnf) disjuncts.push_back(elim_exists_conjunct(x, conjunct, stats));
  return simplify_qf(mk_or(std::move(disjuncts)));
}

FormulaPtr elim_exists_block(std::vector<std::string> vars, FormulaPtr body, QEStats* stats) {
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = elim_exists_one(*it, body, stats);
  return body;
}

FormulaPtr elim_rec(const FormulaPtr& f, QEStats* stats) {
  switch (f->kind) {
    case Formula::Kind::Atom:
      return f;
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Not: {
      Formula out = *f;
      out.kids.clear();
      for (const auto& k : f->kids) out.kids.push_back(elim_rec(k, stats));
      return std::make_shared<const Formula>(std::move(out));
    }
    case Formula::Kind::Exists:
      return elim_exists_block(f->binders, elim_rec(f->kids[0], stats), stats);
    case Formula::Kind::Forall: {
      FormulaPtr negated = to_nnf_dnf(mk_not(elim_rec(f->kids[0], stats)), NormalMode::Nnf);
      FormulaPtr inner = elim_exists_block(f->binders, std::move(negated), stats);
      return simplify_qf(to_nnf_dnf(mk_not(std::move(inner)), NormalMode::Nnf));
    }
    case Formula::Kind::ExistsInf:
      return elim_exists_inf(f->binders[0], elim_rec(f->kids[0], stats), stats);
  }
  return f;
}

}  // namespace

QEResult elim_quantifiers(const FormulaPtr& f) {
  QEResult result;
  result.formula = simplify_qf(elim_rec(f, &result.stats));
  return result;
}

FormulaPtr elim_exists_inf(const std::string& x, const FormulaPtr& f, QEStats* stats) {
  if (!is_quantifier_free(f)) throw NotQuantifierFreeError();
  std::vector<std::vector<Atom>> dnf = dnf_literals(f);
  if (stats) stats->dnf_branches += static_cast<long>(dnf.size());
  std::vector<FormulaPtr> disjuncts;
  for (auto& conjunct : dnf) {
    bool pinned = false;
    for (const auto& lit : conjunct)
      if (lit.rel == Rel::Eq && !lit.lhs.coeff_of(x).is_zero()) {
        pinned = true;  // finitely many witnesses; does not contribute
        break;
      }
    if (pinned) continue;
    disjuncts.push_back(elim_exists_conjunct(x, conjunct, stats));
  }
  return simplify_qf(mk_or(std::move(disjuncts)));
}

bool eval_closed(const FormulaPtr& qf, const Completion& c) {
  switch (qf->kind) {
    case Formula::Kind::Atom: {
      const Atom& a = qf->atom;
      if (!a.lhs.coeffs.empty())
        throw FreeVariablesError(a.lhs.coeffs.begin()->first);
      int s = c.sign(a.lhs.constant);
      switch (a.rel) {
        case Rel::Eq:
          return s == 0;  // torsion-freeness: lam_q(1) = 0 iff q = 0
        case Rel::Neq:
          return s != 0;
        case Rel::Lt:
          return s < 0;
      }
      return false;
    }
    case Formula::Kind::And:
      return std::all_of(qf->kids.begin(), qf->kids.end(),
                         [&](const FormulaPtr& k) { return eval_closed(k, c); });
    case Formula::Kind::Or:
      return std::any_of(qf->kids.begin(), qf->kids.end(),
                         [&](const FormulaPtr& k) { return eval_closed(k, c); });
    case Formula::Kind::Not:
      return !eval_closed(qf->kids[0], c);
    default:
      throw NotQuantifierFreeError("eval_closed expects a quantifier-free formula");
  }
}

bool decide(const FormulaPtr& sentence, const Completion& c) {
  auto free = free_vars(sentence);
  if (!free.empty()) throw FreeVariablesError(*free.begin());
  QEResult qe = elim_quantifiers(sentence);
  return eval_closed(qe.formula, c);
}

namespace {

FormulaPtr strict_between(const std::string& low, const std::string& mid,
                          const std::string& high) {
  LinearTerm below = LinearTerm::variable(low).minus(LinearTerm::variable(mid));
  LinearTerm above = LinearTerm::variable(mid).minus(LinearTerm::variable(high));
  return mk_and({mk_atom(std::move(below), Rel::Lt), mk_atom(std::move(above), Rel::Lt)});
}

FormulaPtr interior_of(const FormulaPtr& f, QEStats* stats) {
  std::set<std::string> vars = free_vars(f);
  if (vars.empty()) return simplify_qf(f);

  std::vector<std::string> lows, highs, ys;
  std::map<std::string, std::string> to_y;
  std::size_t i = 0;
  for (const auto& x : vars) {
    lows.push_back("$lo" + std::to_string(i));
    highs.push_back("$hi" + std::to_string(i));
    ys.push_back("$y" + std::to_string(i));
    to_y[x] = ys.back();
    ++i;
  }

  std::vector<FormulaPtr> box_x, box_y;
  i = 0;
  for (const auto& x : vars) {
    box_x.push_back(strict_between(lows[i], x, highs[i]));
    box_y.push_back(strict_between(lows[i], ys[i], highs[i]));
    ++i;
  }
  FormulaPtr inside = mk_or({mk_not(mk_and(box_y)), rename_free(f, to_y)});
  FormulaPtr covered = mk_forall(ys, std::move(inside));

  std::vector<std::string> bounds = lows;
  bounds.insert(bounds.end(), highs.begin(), highs.end());
  FormulaPtr whole = mk_exists(std::move(bounds), mk_and({mk_and(box_x), std::move(covered)}));

  QEStats local;
  FormulaPtr out = simplify_qf(elim_rec(whole, &local));
  if (stats) {
    stats->dnf_branches += local.dnf_branches;
    stats->fm_steps += local.fm_steps;
  }
  return out;
}

FormulaPtr negated_qf(const FormulaPtr& f) {
  return simplify_qf(to_nnf_dnf(mk_not(f), NormalMode::Nnf));
}

}  // namespace

TopoResult topo(const FormulaPtr& f, TopoMode mode, const Completion& c) {
  if (!is_quantifier_free(f)) throw NotQuantifierFreeError();
  TopoResult result;
  switch (mode) {
    case TopoMode::Interior:
      result.formula = interior_of(f, &result.stats);
      return result;
    case TopoMode::Closure:
      result.formula = negated_qf(interior_of(negated_qf(f), &result.stats));
      return result;
    case TopoMode::IsOpen: {
      FormulaPtr interior = interior_of(f, &result.stats);
      FormulaPtr same = mk_and({mk_or({mk_not(f), interior}), mk_or({mk_not(interior), f})});
      std::set<std::string> vars = free_vars(f);
      FormulaPtr sentence =
          vars.empty() ? same
                       : mk_forall(std::vector<std::string>(vars.begin(), vars.end()), same);
      result.verdict = decide(sentence, c);
      return result;
    }
  }
  return result;
}

}  // namespace densevec
