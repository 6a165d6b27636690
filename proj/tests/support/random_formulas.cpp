#include "support/random_formulas.hpp"

#include <algorithm>

namespace densevec::testing {

long Gen::pick(long lo, long hi) {
  return std::uniform_int_distribution<long>(lo, hi)(rng_);
}

Rational Gen::rational(long span) {
  Rational r(pick(-span, span));
  if (pick(0, 3) == 0) r /= Rational(pick(1, 4));
  return r;
}

Rational Gen::nonzero_rational(long span) {
  Rational r = rational(span);
  return r == 0 ? Rational(1) : r;
}

Polynomial Gen::polynomial(int max_degree, long span, bool nonzero) {
  std::vector<Rational> cs(static_cast<std::size_t>(pick(0, max_degree)) + 1);
  for (auto& c : cs) c = Rational(pick(-span, span));
  Polynomial p = Polynomial::from_coeffs(std::move(cs));
  if (nonzero && p.is_zero()) p = Polynomial(1);
  return p;
}

RationalFunction Gen::scalar(int max_degree, long span) {
  return RationalFunction::canonical(polynomial(max_degree, span, false),
                                     polynomial(max_degree, span, true));
}

RationalFunction Gen::nonzero_scalar(int max_degree, long span) {
  RationalFunction q = scalar(max_degree, span);
  return q.is_zero() ? RationalFunction(1) : q;
}

RationalFunction Gen::nonconstant_scalar(int max_degree, long span) {
  for (int i = 0; i < 64; ++i) {
    RationalFunction q = scalar(std::max(1, max_degree), span);
    if (!q.is_constant()) return q;
  }
  return RationalFunction::t();
}

LinearTerm Gen::linear_term(const std::vector<std::string>& vars, bool with_constant) {
  LinearTerm t;
  for (const auto& v : vars)
    if (pick(0, 2) != 0) t.add_coeff(v, scalar());
  if (t.coeffs.empty() && !vars.empty())
    t.add_coeff(vars[static_cast<std::size_t>(pick(0, static_cast<long>(vars.size()) - 1))],
                nonzero_scalar());
  if (with_constant && pick(0, 1) == 0) t.constant = scalar();
  return t;
}

Atom Gen::atom(const std::vector<std::string>& vars) {
  Rel rel = pick(0, 3) == 0 ? Rel::Eq : pick(0, 4) == 0 ? Rel::Neq : Rel::Lt;
  return Atom{linear_term(vars), rel};
}

FormulaPtr Gen::qf_formula(const std::vector<std::string>& vars, int max_atoms, int depth) {
  if (max_atoms <= 1 || depth <= 0) return mk_atom(atom(vars));
  switch (pick(0, 5)) {
    case 0:
      return mk_not(qf_formula(vars, max_atoms - 1, depth - 1));
    case 1:
    case 2: {
      int left = static_cast<int>(pick(1, max_atoms - 1));
      return mk_and({qf_formula(vars, left, depth - 1),
                     qf_formula(vars, max_atoms - left, depth - 1)});
    }
    case 3:
    case 4: {
      int left = static_cast<int>(pick(1, max_atoms - 1));
      return mk_or({qf_formula(vars, left, depth - 1),
                    qf_formula(vars, max_atoms - left, depth - 1)});
    }
    default:
      return mk_atom(atom(vars));
  }
}

FormulaPtr Gen::sentence(int max_quantifiers, int max_atoms) {
  return open_formula({}, max_quantifiers, max_atoms);
}

FormulaPtr Gen::open_formula(const std::vector<std::string>& free, int max_quantifiers,
                             int max_atoms) {
  int quants = static_cast<int>(pick(free.empty() ? 1 : 0, max_quantifiers));
  std::vector<std::string> bound;
  for (int i = 0; i < quants; ++i) bound.push_back("q" + std::to_string(i));

  std::vector<std::string> scope = free;
  scope.insert(scope.end(), bound.begin(), bound.end());
  FormulaPtr body = qf_formula(scope, std::max(1, max_atoms - quants));

  for (int i = quants - 1; i >= 0; --i) {
    const std::string& v = bound[static_cast<std::size_t>(i)];
    switch (pick(0, 5)) {
      case 0:
        body = mk_forall({v}, body);
        break;
      case 1:
        body = mk_exists_inf(v, body);
        break;
      default:
        body = mk_exists({v}, body);
        break;
    }
    // occasionally a propositional split above the quantifier
    if (pick(0, 3) == 0) {
      std::vector<std::string> outer_scope = free;
      outer_scope.insert(outer_scope.end(), bound.begin(),
                         bound.begin() + std::max(0, i));
      if (outer_scope.empty()) outer_scope = free;
      FormulaPtr side = outer_scope.empty() ? mk_atom(Atom{LinearTerm::of_constant(scalar()),
                                                           pick(0, 1) ? Rel::Lt : Rel::Eq})
                                            : mk_atom(atom(outer_scope));
      body = pick(0, 1) ? mk_and({body, side}) : mk_or({body, side});
    }
  }
  return alpha_normalize(body);
}

ModelElement Gen::generic_element(ModelSession& session, int max_generators) {
  ModelElement e;
  if (pick(0, 1) == 0) e.one_coeff = scalar(1, 4);
  long gens = pick(0, max_generators);
  for (long i = 0; i < gens; ++i) {
    ModelElement g = session.fresh_generator();
    e = e.plus(g.scaled(nonzero_scalar(1, 4)));
  }
  if (e.is_zero()) e = session.fresh_generator();
  return e;
}

Environment Gen::generic_env(ModelSession& session, const std::set<std::string>& vars) {
  Environment env;
  for (const auto& v : vars) env.emplace(v, generic_element(session));
  return env;
}

std::vector<Box> Gen::disjoint_boxes(std::size_t count, long span) {
  // Carve disjoint open intervals out of consecutive slots, then shuffle.
  std::vector<Box> boxes;
  Rational cursor(-span);
  for (std::size_t i = 0; i < count; ++i) {
    Rational width(pick(1, 4), pick(1, 3));
    width.canonicalize();
    Rational gap(pick(1, 3));
    Box b{cursor, cursor + width};
    cursor = b.hi + gap;
    boxes.push_back(std::move(b));
  }
  std::shuffle(boxes.begin(), boxes.end(), rng_);
  return boxes;
}

std::vector<RationalFunction> Gen::independent_directions(std::size_t count, int max_degree,
                                                          long span) {
  std::vector<RationalFunction> dirs;
  int guard = 0;
  while (dirs.size() < count && guard < 1000) {
    ++guard;
    RationalFunction q = nonzero_scalar(max_degree, span);
    dirs.push_back(q);
    if (q_basis(dirs).basis.size() != dirs.size()) dirs.pop_back();
  }
  while (dirs.size() < count)  // extreme fallback: powers of t are independent
    dirs.push_back(RationalFunction::canonical(
        Polynomial::monomial(1, dirs.size() + static_cast<std::size_t>(max_degree) + 1), 1));
  return dirs;
}

}  // namespace densevec::testing
