#include <algorithm>
#include <cassert>
#include <map>

#include "densevec/logic.hpp"

namespace densevec {

namespace {

FormulaPtr nnf_rec(const FormulaPtr& f, bool positive) {
  switch (f->kind) {
    case Formula::Kind::Atom: {
      if (positive) return f;
      const Atom& a = f->atom;
      switch (a.rel) {
        case Rel::Eq:
          return mk_atom(a.lhs, Rel::Neq);
        case Rel::Neq:
          return mk_atom(a.lhs, Rel::Eq);
        case Rel::Lt:  // not (s < 0)  <=>  (-s < 0) or (s = 0)
          return mk_or({mk_atom(a.lhs.negated(), Rel::Lt), mk_atom(a.lhs, Rel::Eq)});
      }
      return f;
    }
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      bool is_and = (f->kind == Formula::Kind::And) == positive;
      std::vector<FormulaPtr> kids;
      kids.reserve(f->kids.size());
      for (const auto& k : f->kids) kids.push_back(nnf_rec(k, positive));
      return is_and ? mk_and(std::move(kids)) : mk_or(std::move(kids));
    }
    case Formula::Kind::Not:
      return nnf_rec(f->kids[0], !positive);
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      bool is_exists = (f->kind == Formula::Kind::Exists) == positive;
      FormulaPtr body = nnf_rec(f->kids[0], positive);
      return is_exists ? mk_exists(f->binders, std::move(body))
                       : mk_forall(f->binders, std::move(body));
    }
    case Formula::Kind::ExistsInf: {
      FormulaPtr body = nnf_rec(f->kids[0], true);
      FormulaPtr inner = mk_exists_inf(f->binders[0], std::move(body));
      // There is no first-order dual; a negated counting quantifier stays
      // wrapped and is handled by innermost-first elimination.
      return positive ? inner : mk_not(std::move(inner));
    }
  }
  return f;
}

const RationalFunction* first_coefficient(const LinearTerm& t) {
  if (!t.coeffs.empty()) return &t.coeffs.begin()->second;
  if (!t.constant.is_zero()) return &t.constant;
  return nullptr;
}

struct SignKeyed {
  std::string key;  // print of the sign-normalized lhs
  bool negated;     // lhs was negated to obtain the key
};

SignKeyed sign_key(const LinearTerm& lhs) {
  const RationalFunction* lead = first_coefficient(lhs);
  if (lead && lead->num().leading() < 0) return {print_linear_term(lhs.negated()), true};
  return {print_linear_term(lhs), false};
}

// Depth-first product over an NNF tree with early pruning.
void dnf_expand(std::vector<const Formula*> work, ConjunctBuilder acc,
                std::vector<std::vector<Atom>>& out) {
  while (!work.empty()) {
    const Formula* f = work.back();
    work.pop_back();
    switch (f->kind) {
      case Formula::Kind::Atom: {
        if (acc.add(f->atom) == ConjunctBuilder::Added::Contradiction) return;
        break;
      }
      case Formula::Kind::And:
        for (const auto& k : f->kids) work.push_back(k.get());
        break;
      case Formula::Kind::Or: {
        for (const auto& k : f->kids) {
          std::vector<const Formula*> branch = work;
          branch.push_back(k.get());
          dnf_expand(std::move(branch), acc, out);
        }
        return;
      }
      default:
        assert(false && "DNF input must be an NNF quantifier-free formula");
        return;
    }
  }
  out.push_back(acc.literals());
}

std::set<std::string> conjunct_keys(const std::vector<Atom>& literals) {
  std::set<std::string> out;
  for (const auto& a : literals) out.insert(print_canonical(mk_atom(a)));
  return out;
}

// Drops conjuncts that are implied by a smaller conjunct of another disjunct.
std::vector<std::vector<Atom>> prune_subsumed(std::vector<std::vector<Atom>> sets) {
  std::vector<std::set<std::string>> keys;
  keys.reserve(sets.size());
  for (const auto& s : sets) keys.push_back(conjunct_keys(s));
  std::vector<bool> dead(sets.size(), false);
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (dead[i]) continue;
    for (std::size_t j = 0; j < sets.size(); ++j) {
      if (i == j || dead[j]) continue;
      // keys[i] subset of keys[j]: conjunct j is implied and can go
      if (!std::includes(keys[j].begin(), keys[j].end(), keys[i].begin(), keys[i].end()))
        continue;
      if (keys[i].size() < keys[j].size() || j > i) dead[j] = true;
    }
  }
  std::vector<std::vector<Atom>> kept;
  for (std::size_t i = 0; i < sets.size(); ++i)
    if (!dead[i]) kept.push_back(std::move(sets[i]));
  return kept;
}

}  // namespace

FormulaPtr to_nnf_dnf(const FormulaPtr& f, NormalMode mode) {
  if (mode == NormalMode::Nnf) return nnf_rec(f, true);
  if (!is_quantifier_free(f)) throw QuantifierInDnfInputError();
  std::vector<FormulaPtr> disjuncts;
  for (auto& conjunct : dnf_literals(f)) {
    std::vector<FormulaPtr> literals;
    literals.reserve(conjunct.size());
    for (auto& a : conjunct) literals.push_back(mk_atom(std::move(a)));
    disjuncts.push_back(mk_and(std::move(literals)));
  }
  return mk_or(std::move(disjuncts));
}

std::vector<std::vector<Atom>> dnf_literals(const FormulaPtr& f) {
  if (!is_quantifier_free(f)) throw QuantifierInDnfInputError();
  FormulaPtr nnf = nnf_rec(f, true);
  std::vector<std::vector<Atom>> sets;
  dnf_expand({nnf.get()}, ConjunctBuilder{}, sets);
  return prune_subsumed(std::move(sets));
}

// ---------------------------------------------------------------------------
// Canonical atoms and quantifier-free simplification

namespace {

// Positive rational scale making the coefficient tuple canonical: numerator
// contents become collectively coprime and denominator contents collapse to 1.
Rational canonical_scale(const Atom& a) {
  Int num_gcd(0), den_lcm(1);
  auto feed = [&](const RationalFunction& q) {
    if (q.is_zero()) return;
    num_gcd = gcd(num_gcd, q.num_content().get_num());
    den_lcm = lcm(den_lcm, q.den_content().get_num());
  };
  for (const auto& [name, q] : a.lhs.coeffs) feed(q);
  feed(a.lhs.constant);
  if (num_gcd == 0) return Rational(1);
  return make_rational(den_lcm, num_gcd);
}

}  // namespace

Atom canonicalize_atom(const Atom& a) {
  if (a.lhs.is_zero()) {
    // 0 = 0 is true; 0 < 0 and 0 != 0 are false.
    return a.rel == Rel::Eq ? Atom{LinearTerm{}, Rel::Eq} : Atom{LinearTerm{}, Rel::Lt};
  }
  if (a.lhs.is_constant_only()) {
    const RationalFunction& q = a.lhs.constant;
    switch (a.rel) {
      case Rel::Eq:  // lam_q(1) = 0 forces q = 0 (torsion-freeness)
        return Atom{LinearTerm{}, Rel::Lt};
      case Rel::Neq:
        return Atom{LinearTerm{}, Rel::Eq};
      case Rel::Lt:
        if (auto c = q.as_constant())  // rational multiples of 1 have a fixed sign
          return *c < 0 ? Atom{LinearTerm{}, Rel::Eq} : Atom{LinearTerm{}, Rel::Lt};
        break;  // nonconstant scalars stay symbolic until a completion decides
    }
  }
  Atom out = a;
  Rational scale = canonical_scale(a);
  if (scale != 1) out.lhs = out.lhs.scaled(RationalFunction(scale));
  if (out.rel != Rel::Lt) {
    const RationalFunction* lead = first_coefficient(out.lhs);
    if (lead && lead->num().leading() < 0) out.lhs = out.lhs.negated();
  }
  return out;
}

namespace {

// Positive scale normalizing the coefficient pattern alone (constant left out).
Rational direction_scale(const LinearTerm& t) {
  Int num_gcd(0), den_lcm(1);
  for (const auto& [name, q] : t.coeffs) {
    num_gcd = gcd(num_gcd, q.num_content().get_num());
    den_lcm = lcm(den_lcm, q.den_content().get_num());
  }
  if (num_gcd == 0) return Rational(1);
  return make_rational(den_lcm, num_gcd);
}

// Sign of a difference of normalized constants when it is decided by the
// theory alone: exact zero, or a rational value.
std::optional<int> absolute_sign(const RationalFunction& delta) {
  if (delta.is_zero()) return 0;
  if (auto c = delta.as_constant()) return sign_of(*c);
  return std::nullopt;
}

}  // namespace

ConjunctBuilder::Added ConjunctBuilder::add(Atom atom) {
  if (contradicted_) return Added::Contradiction;
  atom = canonicalize_atom(atom);
  if (atom.lhs.is_zero()) {
    if (atom.rel == Rel::Eq) return Added::Redundant;  // the TRUE atom
    contradicted_ = true;
    return Added::Contradiction;
  }
  auto contradiction = [&] {
    contradicted_ = true;
    return Added::Contradiction;
  };

  // Constant-only literals: only symbolic strict signs survive
  // canonicalization. kappa < 0 against kappa' < 0 compares exactly when
  // kappa - kappa' or kappa + kappa' is rational.
  if (atom.lhs.is_constant_only()) {
    RationalFunction kappa = atom.lhs.constant;
    for (auto it = constants_.begin(); it != constants_.end();) {
      if (auto diff = absolute_sign(kappa - it->constant)) {
        if (*diff <= 0) return Added::Redundant;  // implied by the stored bound
        it = constants_.erase(it);                // stored bound is implied
        continue;
      }
      if (auto sum = absolute_sign(kappa + it->constant); sum && *sum >= 0)
        return contradiction();
      ++it;
    }
    constants_.push_back({std::move(kappa), std::move(atom)});
    return Added::Ok;
  }

  LinearTerm pattern;
  pattern.coeffs = atom.lhs.coeffs;
  Rational scale = direction_scale(pattern);
  bool flip = pattern.coeffs.begin()->second.num().leading() < 0;
  Rational oriented = flip ? Rational(-scale) : scale;
  std::string key = print_linear_term(pattern.scaled(RationalFunction(oriented)));
  // A strict atom scales by the positive factor only: the orientation flip
  // defines the direction, it does not multiply the atom. Eq/Neq flip whole.
  RationalFunction kappa =
      atom.lhs.constant.scaled(atom.rel == Rel::Lt ? scale : oriented);
  Direction& dir = dirs_[key];

  auto erase_where = [](std::vector<Bound>& bounds, auto pred) {
    std::erase_if(bounds, pred);
  };

  switch (atom.rel) {
    case Rel::Eq: {
      if (dir.eq) return dir.eq->constant == kappa ? Added::Redundant : contradiction();
      for (const auto& b : dir.neq)
        if (b.constant == kappa) return contradiction();
      dir.neq.clear();  // distinct constants make every other disequality true
      for (auto it = dir.lt_pos.begin(); it != dir.lt_pos.end();) {
        auto s = absolute_sign(it->constant - kappa);  // need kappa' - kappa < 0
        if (s && *s >= 0) return contradiction();
        if (s) it = dir.lt_pos.erase(it);  // implied by the equality
        else ++it;
      }
      for (auto it = dir.lt_neg.begin(); it != dir.lt_neg.end();) {
        auto s = absolute_sign(kappa + it->constant);  // need kappa + kappa' < 0
        if (s && *s >= 0) return contradiction();
        if (s) it = dir.lt_neg.erase(it);
        else ++it;
      }
      dir.eq = Bound{std::move(kappa), std::move(atom)};
      return Added::Ok;
    }
    case Rel::Neq: {
      if (dir.eq)
        return dir.eq->constant == kappa ? contradiction() : Added::Redundant;
      for (const auto& b : dir.neq)
        if (b.constant == kappa) return Added::Redundant;
      for (const auto& b : dir.lt_pos)  // N < -kappa' implies N != -kappa when kappa <= kappa'
        if (auto s = absolute_sign(b.constant - kappa); s && *s >= 0) return Added::Redundant;
      for (const auto& b : dir.lt_neg)  // N > kappa' implies N != -kappa when kappa + kappa' >= 0
        if (auto s = absolute_sign(kappa + b.constant); s && *s >= 0) return Added::Redundant;
      dir.neq.push_back({std::move(kappa), std::move(atom)});
      return Added::Ok;
    }
    case Rel::Lt: {
      std::vector<Bound>& same = flip ? dir.lt_neg : dir.lt_pos;
      std::vector<Bound>& opposite = flip ? dir.lt_pos : dir.lt_neg;
      if (dir.eq) {
        // the direction is pinned to -eq.constant
        auto s = absolute_sign(flip ? kappa + dir.eq->constant : kappa - dir.eq->constant);
        if (s) return *s < 0 ? Added::Redundant : contradiction();
      }
      for (const auto& b : same)
        if (auto s = absolute_sign(kappa - b.constant); s && *s <= 0) return Added::Redundant;
      for (const auto& b : opposite)
        if (auto s = absolute_sign(kappa + b.constant); s && *s >= 0) return contradiction();
      erase_where(same, [&](const Bound& b) {
        auto s = absolute_sign(b.constant - kappa);
        return s && *s < 0;  // strictly weaker bound
      });
      erase_where(dir.neq, [&](const Bound& b) {
        auto s = absolute_sign(flip ? b.constant + kappa : kappa - b.constant);
        return s && *s >= 0;  // the strict sign absorbs the disequality
      });
      same.push_back({std::move(kappa), std::move(atom)});
      return Added::Ok;
    }
  }
  return Added::Ok;
}

std::vector<Atom> ConjunctBuilder::literals() const {
  std::vector<Atom> out;
  auto emit = [&](const std::vector<Bound>& bounds) {
    for (const auto& b : bounds) out.push_back(b.atom);
  };
  for (const auto& [key, dir] : dirs_) {
    if (dir.eq) out.push_back(dir.eq->atom);
    emit(dir.neq);
    emit(dir.lt_pos);
    emit(dir.lt_neg);
  }
  emit(constants_);
  return out;
}

namespace {

FormulaPtr simplify_rec(const FormulaPtr& f);

// Literal key sets for clause-level subsumption inside and/or nodes; only
// atoms and one-level junctions of atoms participate.
std::optional<std::set<std::string>> shallow_key_set(const FormulaPtr& f,
                                                     Formula::Kind junction) {
  if (f->kind == Formula::Kind::Atom) return std::set<std::string>{print_canonical(f)};
  if (f->kind != junction) return std::nullopt;
  std::set<std::string> keys;
  for (const auto& k : f->kids) {
    if (k->kind != Formula::Kind::Atom) return std::nullopt;
    keys.insert(print_canonical(k));
  }
  return keys;
}

FormulaPtr simplify_and(std::vector<FormulaPtr> flat) {
  ConjunctBuilder builder;
  std::vector<FormulaPtr> clauses;  // non-atomic children (Or subtrees)
  for (const auto& k : flat) {
    if (k->kind == Formula::Kind::Atom) {
      if (builder.add(k->atom) == ConjunctBuilder::Added::Contradiction) return mk_false();
    } else {
      clauses.push_back(k);
    }
  }

  std::vector<Atom> literals = builder.literals();
  std::set<std::string> literal_keys;
  std::vector<std::pair<std::string, FormulaPtr>> keyed;
  for (auto& a : literals) {
    FormulaPtr atom = mk_atom(std::move(a));
    std::string key = print_canonical(atom);
    literal_keys.insert(key);
    keyed.emplace_back(std::move(key), std::move(atom));
  }

  // A clause containing one of the established literals is implied.
  std::set<std::string> seen;
  for (auto& c : clauses) {
    auto keys = shallow_key_set(c, Formula::Kind::Or);
    if (keys) {
      bool absorbed = false;
      for (const auto& k : *keys)
        if (literal_keys.count(k)) absorbed = true;
      if (absorbed) continue;
    }
    std::string key = print_canonical(c);
    if (seen.insert(key).second) keyed.emplace_back(std::move(key), std::move(c));
  }

  std::sort(keyed.begin(), keyed.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<FormulaPtr> kids;
  kids.reserve(keyed.size());
  for (auto& [key, k] : keyed) kids.push_back(std::move(k));
  return mk_and(std::move(kids));
}

// Trichotomy/dichotomy resolution across disjuncts: clauses that differ in a
// single literal merge when the differing literals exhaust the sign cases of
// one left-hand side. Operates on shallow conjunct-of-atom disjuncts.
std::vector<FormulaPtr> resolve_disjuncts(std::vector<FormulaPtr> kids) {
  struct Clause {
    FormulaPtr node;
    std::vector<Atom> atoms;  // empty when not a shallow conjunct
    std::vector<std::string> keys;
  };
  auto atom_list = [](const FormulaPtr& f) {
    std::vector<Atom> atoms;
    if (f->kind == Formula::Kind::Atom) {
      atoms.push_back(f->atom);
    } else if (f->kind == Formula::Kind::And) {
      for (const auto& k : f->kids) {
        if (k->kind != Formula::Kind::Atom) return std::vector<Atom>{};
        atoms.push_back(k->atom);
      }
    }
    return atoms;
  };

  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<Clause> clauses;
    for (auto& k : kids) {
      Clause c;
      c.node = k;
      c.atoms = atom_list(k);
      for (const auto& a : c.atoms) c.keys.push_back(print_canonical(mk_atom(a)));
      clauses.push_back(std::move(c));
    }

    struct Candidate {
      bool eq = false, neq = false, lt_pos = false, lt_neg = false;
      std::vector<std::size_t> members;
    };
    // base = clause keys with one literal removed; candidates grouped by the
    // removed literal's sign-normalized lhs
    std::map<std::string, std::map<std::string, Candidate>> buckets;
    for (std::size_t i = 0; i < clauses.size(); ++i) {
      const Clause& c = clauses[i];
      if (c.atoms.empty()) continue;
      for (std::size_t drop = 0; drop < c.atoms.size(); ++drop) {
        std::vector<std::string> rest = c.keys;
        rest.erase(rest.begin() + static_cast<long>(drop));
        std::sort(rest.begin(), rest.end());
        std::string base;
        for (const auto& r : rest) base += r + "|";
        SignKeyed sk = sign_key(c.atoms[drop].lhs);
        Candidate& cand = buckets[base][sk.key];
        switch (c.atoms[drop].rel) {
          case Rel::Eq:
            cand.eq = true;
            break;
          case Rel::Neq:
            cand.neq = true;
            break;
          case Rel::Lt:
            (sk.negated ? cand.lt_neg : cand.lt_pos) = true;
            break;
        }
        cand.members.push_back(i);
      }
    }

    for (const auto& [base, per_lhs] : buckets) {
      for (const auto& [lhs_key, cand] : per_lhs) {
        bool dichotomy = cand.eq && cand.neq;
        bool trichotomy = cand.eq && cand.lt_pos && cand.lt_neg;
        if (!dichotomy && !trichotomy) continue;
        // merge: drop the differing literal from the first member, remove the
        // other members entirely
        std::size_t keep = cand.members.front();
        const Clause& c = clauses[keep];
        std::vector<FormulaPtr> reduced;
        for (const auto& a : c.atoms) {
          if (sign_key(a.lhs).key == lhs_key) continue;
          reduced.push_back(mk_atom(a));
        }
        std::vector<FormulaPtr> next;
        std::set<std::size_t> drop_set(cand.members.begin(), cand.members.end());
        for (std::size_t i = 0; i < kids.size(); ++i)
          if (!drop_set.count(i)) next.push_back(kids[i]);
        next.push_back(mk_and(std::move(reduced)));
        kids = std::move(next);
        changed = true;
        break;
      }
      if (changed) break;
    }
  }
  return kids;
}

FormulaPtr simplify_or(std::vector<FormulaPtr> flat) {
  flat = resolve_disjuncts(std::move(flat));
  struct Shapes {
    bool eq = false, neq = false, lt_pos = false, lt_neg = false;
  };
  std::map<std::string, Shapes> table;
  for (const auto& k : flat) {
    if (k->kind != Formula::Kind::Atom) continue;
    SignKeyed sk = sign_key(k->atom.lhs);
    Shapes& e = table[sk.key];
    switch (k->atom.rel) {
      case Rel::Eq:
        e.eq = true;
        break;
      case Rel::Neq:
        e.neq = true;
        break;
      case Rel::Lt:
        (sk.negated ? e.lt_neg : e.lt_pos) = true;
        break;
    }
  }
  for (const auto& [key, e] : table) {
    bool tautology = (e.eq && e.neq) || (e.eq && e.lt_pos && e.lt_neg);
    if (tautology) return mk_true();
  }

  std::vector<std::pair<std::string, FormulaPtr>> keyed;
  std::set<std::string> seen;
  for (const auto& k : flat) {
    if (k->kind == Formula::Kind::Atom) {
      const auto& e = table[sign_key(k->atom.lhs).key];
      // s < 0 implies s != 0.
      if (k->atom.rel == Rel::Lt && e.neq) continue;
    }
    std::string key = print_canonical(k);
    if (seen.insert(key).second) keyed.emplace_back(std::move(key), k);
  }

  // A conjunct that includes another disjunct's literals is implied by it.
  std::vector<std::optional<std::set<std::string>>> kid_keys(keyed.size());
  for (std::size_t i = 0; i < keyed.size(); ++i)
    kid_keys[i] = shallow_key_set(keyed[i].second, Formula::Kind::And);
  std::vector<bool> dead(keyed.size(), false);
  for (std::size_t i = 0; i < keyed.size(); ++i) {
    if (dead[i] || !kid_keys[i]) continue;
    for (std::size_t j = 0; j < keyed.size(); ++j) {
      if (i == j || dead[j] || !kid_keys[j]) continue;
      if (kid_keys[i]->size() < kid_keys[j]->size() &&
          std::includes(kid_keys[j]->begin(), kid_keys[j]->end(), kid_keys[i]->begin(),
                        kid_keys[i]->end()))
        dead[j] = true;
    }
  }

  std::vector<std::pair<std::string, FormulaPtr>> kept;
  for (std::size_t i = 0; i < keyed.size(); ++i)
    if (!dead[i]) kept.push_back(std::move(keyed[i]));
  std::sort(kept.begin(), kept.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<FormulaPtr> kids;
  kids.reserve(kept.size());
  for (auto& [key, k] : kept) kids.push_back(std::move(k));
  return mk_or(std::move(kids));
}

FormulaPtr simplify_junction(const FormulaPtr& f) {
  bool is_and = f->kind == Formula::Kind::And;
  std::vector<FormulaPtr> flat;
  for (const auto& k : f->kids) {
    FormulaPtr s = simplify_rec(k);
    if (is_and ? is_true(s) : is_false(s)) continue;
    if (is_and ? is_false(s) : is_true(s)) return is_and ? mk_false() : mk_true();
    if (s->kind == f->kind)
      flat.insert(flat.end(), s->kids.begin(), s->kids.end());
    else
      flat.push_back(std::move(s));
  }
  return is_and ? simplify_and(std::move(flat)) : simplify_or(std::move(flat));
}

FormulaPtr simplify_rec(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::Atom:
      return mk_atom(canonicalize_atom(f->atom));
    case Formula::Kind::And:
    case Formula::Kind::Or:
      return simplify_junction(f);
    case Formula::Kind::Not:
      return simplify_rec(nnf_rec(f, true));
    default:
      throw NotQuantifierFreeError("simplify_qf expects a quantifier-free formula");
  }
}

}  // namespace

FormulaPtr simplify_qf(const FormulaPtr& f) {
  if (!is_quantifier_free(f)) throw NotQuantifierFreeError();
  return simplify_rec(nnf_rec(f, true));
}

}  // namespace densevec
