#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "densevec/qfield.hpp"

namespace densevec {

/// `one` and `t` are reserved, as are the s-expression keywords.
bool is_reserved_name(const std::string& name);

// ---------------------------------------------------------------------------
// Raw terms (as parsed; normalization flattens them into LinearTerm)

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  enum class Kind { Var, One, Const, Add, Neg, Sub, Scale };
  Kind kind;
  std::string var;          // Var
  RationalFunction scalar;  // Const value or Scale factor
  std::vector<TermPtr> args;
};

TermPtr term_var(std::string name);
TermPtr term_one();
TermPtr term_const(RationalFunction value);
TermPtr term_add(std::vector<TermPtr> args);
TermPtr term_neg(TermPtr arg);
TermPtr term_sub(TermPtr a, TermPtr b);
TermPtr term_scale(RationalFunction factor, TermPtr arg);

// ---------------------------------------------------------------------------
// Linear normal form: sum of lam-scaled variables plus a constant scalar.

struct LinearTerm {
  std::map<std::string, RationalFunction> coeffs;  // no zero entries
  RationalFunction constant;

  static LinearTerm variable(const std::string& name);
  static LinearTerm of_constant(const RationalFunction& value);

  bool is_zero() const { return coeffs.empty() && constant.is_zero(); }
  bool is_constant_only() const { return coeffs.empty(); }
  RationalFunction coeff_of(const std::string& name) const;

  LinearTerm plus(const LinearTerm& o) const;
  LinearTerm negated() const;
  LinearTerm minus(const LinearTerm& o) const { return plus(o.negated()); }
  LinearTerm scaled(const RationalFunction& factor) const;
  LinearTerm without(const std::string& name) const;
  /// Replaces every occurrence of `name` by `replacement` (coefficients fold).
  LinearTerm substituted(const std::string& name, const LinearTerm& replacement) const;

  void add_coeff(const std::string& name, const RationalFunction& delta);
  bool operator==(const LinearTerm& o) const = default;
};

/// T1 normal form of a raw term; idempotent and denotationally exact.
LinearTerm normalize_to_linear(const TermPtr& term);

// ---------------------------------------------------------------------------
// Formulas

enum class Rel { Eq, Lt, Neq };  // lhs = 0, lhs < 0, lhs != 0

struct Atom {
  LinearTerm lhs;
  Rel rel = Rel::Eq;
  bool operator==(const Atom& o) const = default;
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  enum class Kind { Atom, And, Or, Not, Exists, Forall, ExistsInf };
  Kind kind;
  Atom atom;                         // Kind::Atom
  std::vector<FormulaPtr> kids;      // connectives and quantifier bodies
  std::vector<std::string> binders;  // quantifiers
};

FormulaPtr mk_atom(Atom a);
FormulaPtr mk_atom(LinearTerm lhs, Rel rel);
FormulaPtr mk_true();   // (= 0 0)
FormulaPtr mk_false();  // (< 0 0)
FormulaPtr mk_and(std::vector<FormulaPtr> kids);
FormulaPtr mk_or(std::vector<FormulaPtr> kids);
FormulaPtr mk_not(FormulaPtr f);
FormulaPtr mk_exists(std::vector<std::string> vars, FormulaPtr body);
FormulaPtr mk_forall(std::vector<std::string> vars, FormulaPtr body);
FormulaPtr mk_exists_inf(std::string var, FormulaPtr body);

bool is_true(const FormulaPtr& f);
bool is_false(const FormulaPtr& f);
bool is_quantifier_free(const FormulaPtr& f);
bool structurally_equal(const FormulaPtr& a, const FormulaPtr& b);

std::set<std::string> free_vars(const FormulaPtr& f);
/// Capture-safe only when the target names are fresh; used with alpha-distinct
/// binders throughout.
FormulaPtr rename_free(const FormulaPtr& f, const std::map<std::string, std::string>& renaming);
/// Makes binders pairwise distinct and distinct from every free variable and
/// from the avoid set.
FormulaPtr alpha_normalize(const FormulaPtr& f, const std::set<std::string>& avoid = {});

// ---------------------------------------------------------------------------
// Parsing and printing (s-expression text format)

/// parse: a formula or a term, auto-detected from the head symbol.
using Parsed = std::variant<FormulaPtr, TermPtr>;
Parsed parse(const std::string& text);
FormulaPtr parse_formula(const std::string& text);
TermPtr parse_term_text(const std::string& text);
RationalFunction parse_scalar_text(const std::string& text);
/// Throws UnboundVariableError naming the first free variable, if any.
void require_sentence(const FormulaPtr& f);

std::string print_canonical(const FormulaPtr& f);
std::string print_linear_term(const LinearTerm& t);

// ---------------------------------------------------------------------------
// Negation normal form, disjunctive normal form, simplification

enum class NormalMode { Nnf, Dnf };

/// NNF pushes negation to atoms (Lt flips to Lt-or-Eq of the negation, Eq/Neq
/// swap; quantifiers dualize). DNF requires quantifier-free input.
FormulaPtr to_nnf_dnf(const FormulaPtr& f, NormalMode mode);

/// Literal-level DNF view used by the eliminators.
std::vector<std::vector<Atom>> dnf_literals(const FormulaPtr& f);

/// Deterministic canonical form of one atom: folds zero and torsion-trivial
/// cases into the TRUE/FALSE atoms, rescales by the canonical positive
/// rational, and sign-normalizes Eq/Neq.
Atom canonicalize_atom(const Atom& a);

/// Conjunction accumulator with exact redundancy and contradiction tracking.
/// Literals sharing a coefficient pattern (up to a positive rational) are
/// compared through their constants whenever the difference is rational, and
/// equalities pin their direction outright.
class ConjunctBuilder {
 public:
  enum class Added { Ok, Redundant, Contradiction };

  Added add(Atom atom);
  bool contradicted() const { return contradicted_; }
  /// Surviving literals in a deterministic order.
  std::vector<Atom> literals() const;

 private:
  struct Bound {
    RationalFunction constant;  // normalized
    Atom atom;
  };
  struct Direction {
    std::optional<Bound> eq;
    std::vector<Bound> neq, lt_pos, lt_neg;
  };
  std::map<std::string, Direction> dirs_;
  std::vector<Bound> constants_;  // constant-only strict literals
  bool contradicted_ = false;
};

/// Quantifier-free simplification: canonical atoms, flattening, duplicate and
/// contradiction pruning, deterministic child ordering. Idempotent.
FormulaPtr simplify_qf(const FormulaPtr& f);

}  // namespace densevec
