#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "densevec/model.hpp"
#include "densevec/qe.hpp"

namespace densevec {

/// One Skolem symbol with its defining formula theta(params, out).
struct SkolemFn {
  std::string name;
  std::vector<std::string> params;  // arity = params.size()
  std::string out;                  // the single witness variable
  FormulaPtr theta;                 // free variables within params + out
};

/// Validates and builds a Skolem symbol; the witness variable is the unique
/// free variable of theta outside params (MalformedThetaError otherwise).
SkolemFn make_skolem_fn(std::string name, std::vector<std::string> params, FormulaPtr theta);

struct SkolemSignature {
  int level = 0;  // 0 is the base language
  std::vector<SkolemFn> fns;

  const SkolemFn* find(const std::string& name) const;
  const SkolemFn& require(const std::string& name) const;  // UnknownSymbolError
};

/// Adds one fresh symbol per theta (enumeration, no dedup) with level-prefixed
/// deterministic names f<level>_<index>.
SkolemSignature iterate_language(
    const SkolemSignature& sig,
    const std::vector<std::pair<std::vector<std::string>, FormulaPtr>>& new_thetas);

/// One Skolem equality f(args) = out over variables.
struct ConfigConjunct {
  std::string fn;
  std::vector<std::string> args;
  std::string out;
  bool operator==(const ConfigConjunct& o) const = default;
};

/// Conjunction of Skolem equalities.
struct UniformConfiguration {
  std::vector<ConfigConjunct> conjuncts;
};

/// Chain step i defines y_i from the inputs and y_1..y_{i-1}: either a Skolem
/// application on variables or a base-language linear term.
struct ChainStep {
  bool skolem = false;
  std::string fn;                 // Skolem case
  std::vector<std::string> args;  // Skolem case
  LinearTerm base;                // base case
};

struct TermChain {
  std::vector<std::string> inputs;
  std::vector<ChainStep> steps;  // outputs are named y1, y2, ...
};

struct ChainSplit {
  FormulaPtr base;              // conjunction of y_i = term_i over base steps
  UniformConfiguration config;  // the Skolem steps
};

/// The J-indexed split: Skolem steps become a uniform configuration, base
/// steps a base-language conjunction; their conjunction pins y = t(x).
ChainSplit split_term_chain(const SkolemSignature& sig, const TermChain& chain);

/// The alteration criterion: each imposed output is a theta-witness wherever
/// theta has witnesses, and same-symbol applications agree on equal arguments.
FormulaPtr eligibility_code(const SkolemSignature& sig, const UniformConfiguration& config);

// ---------------------------------------------------------------------------
// Skolem-language formulas (base leaves plus Skolem equalities)

struct SkFormula;
using SkFormulaPtr = std::shared_ptr<const SkFormula>;

struct SkFormula {
  enum class Kind { Base, SkolemEq, And, Or, Not, Exists, Forall, ExistsInf };
  Kind kind;
  FormulaPtr base;    // Base
  ConfigConjunct eq;  // SkolemEq
  std::vector<SkFormulaPtr> kids;
  std::vector<std::string> binders;
};

SkFormulaPtr sk_base(FormulaPtr f);
SkFormulaPtr sk_eq(ConfigConjunct eq);
SkFormulaPtr sk_and(std::vector<SkFormulaPtr> kids);
SkFormulaPtr sk_or(std::vector<SkFormulaPtr> kids);
SkFormulaPtr sk_not(SkFormulaPtr f);
SkFormulaPtr sk_exists(std::vector<std::string> vars, SkFormulaPtr body);
SkFormulaPtr sk_forall(std::vector<std::string> vars, SkFormulaPtr body);
SkFormulaPtr sk_exists_inf(std::string var, SkFormulaPtr body);

/// Alpha-normalizes every base leaf (binders made distinct leaf-locally).
SkFormulaPtr sk_alpha_leaves(const SkFormulaPtr& f);
std::set<std::string> sk_free_vars(const SkFormulaPtr& f);
std::string sk_print(const SkFormulaPtr& f);
bool sk_equal(const SkFormulaPtr& a, const SkFormulaPtr& b);

/// The Winkler axiom for (phi, config): universal closure over the first k
/// variables of "infinitely many base witnesses plus eligibility give a
/// configuration witness". The exists-inf block is expanded as nested
/// single-variable quantifiers.
SkFormulaPtr axiom_instance(const SkolemSignature& sig, const FormulaPtr& phi,
                            const UniformConfiguration& config,
                            const std::vector<std::string>& variables, std::size_t k);

// ---------------------------------------------------------------------------
// Serialization (s-expression dialect)

std::string print_signature(const SkolemSignature& sig);
SkolemSignature parse_signature(const std::string& text);
std::string print_config(const UniformConfiguration& config);
UniformConfiguration parse_config(const std::string& text);
TermChain parse_chain(const std::string& text);
SkFormulaPtr sk_parse(const SkolemSignature& sig, const std::string& text);

// ---------------------------------------------------------------------------
// Finite Skolem tables against a session

struct SkolemAssignment {
  std::string fn;
  std::vector<ModelElement> args;
  ModelElement value;
};
using SkolemTable = std::vector<SkolemAssignment>;

struct FiniteCheckViolation {
  std::string fn;
  std::size_t point_index;
  std::string reason;
};

struct FiniteCheckReport {
  std::vector<FiniteCheckViolation> violations;
  long checks = 0;
};

/// For every point and matching-arity symbol: when exists-y theta(a, y) is
/// certified, the tabled value must satisfy theta. Missing table entries for
/// certified points raise MissingAssignmentError.
FiniteCheckReport check_finite_model(ModelSession& session, const SkolemSignature& sig,
                                     const SkolemTable& table,
                                     const std::vector<std::vector<ModelElement>>& points);

}  // namespace densevec
