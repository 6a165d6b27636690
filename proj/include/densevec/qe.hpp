#pragma once

#include <optional>

#include "densevec/completion.hpp"
#include "densevec/logic.hpp"

namespace densevec {

struct QEStats {
  long dnf_branches = 0;
  long fm_steps = 0;
};

struct QEResult {
  FormulaPtr formula;  // quantifier-free
  QEStats stats;
};

/// Eliminates `exists x` from a conjunction of literals in linear normal form.
///
/// An equality with a nonzero x-coefficient q pins x to lam_{1/q}(-rest) and
/// is substituted away. Otherwise the x-occurrences are decomposed over a
/// Q-basis of the occurring coefficients into component variables, which range
/// densely and independently of the parameters; Fourier-Motzkin over the
/// strict inequalities eliminates them, and disequalities still involving a
/// component are dropped (a nonempty open set minus finitely many hyperplanes
/// is nonempty).
FormulaPtr elim_exists_conjunct(const std::string& x, const std::vector<Atom>& literals,
                                QEStats* stats = nullptr);

/// Innermost-first quantifier elimination; foralls go through not-exists-not.
QEResult elim_quantifiers(const FormulaPtr& f);

/// exists-inf: a DNF disjunct contributes iff no equality pins x and its
/// inequality phase is satisfiable; pinned disjuncts have finitely many
/// witnesses and are dropped.
FormulaPtr elim_exists_inf(const std::string& x, const FormulaPtr& f, QEStats* stats = nullptr);

/// Truth value of a sentence under a completion of the type of 1.
bool decide(const FormulaPtr& sentence, const Completion& c);

/// Evaluates a quantifier-free formula without free variables: equalities are
/// decided by torsion-freeness, strict atoms by the completion sign.
bool eval_closed(const FormulaPtr& qf, const Completion& c);

enum class TopoMode { Interior, Closure, IsOpen };

struct TopoResult {
  FormulaPtr formula;           // Interior/Closure
  std::optional<bool> verdict;  // IsOpen
  QEStats stats;
};

/// interior(f) = qe of "some box around x lies inside f"; closure through the
/// complement; is-open decides f <-> interior(f) universally.
TopoResult topo(const FormulaPtr& f, TopoMode mode, const Completion& c);

}  // namespace densevec
