#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "densevec/completion.hpp"
#include "densevec/logic.hpp"

namespace densevec {

/// Exact model quantity: a 1-scale part (a rational function germ, plain
/// rational when constant) plus a lexicographic stack of infinitesimals. The
/// eps entries are infinitely small against every nonzero 1-scale quantity,
/// and eps(i) dominates eps(j) for i < j.
struct GenericValue {
  RationalFunction one_part;
  std::map<std::uint64_t, Rational> eps;  // index -> nonzero coefficient

  static GenericValue of_rational(const Rational& r);
  static GenericValue eps_unit(std::uint64_t index);

  bool is_zero() const { return one_part.is_zero() && eps.empty(); }
  bool is_rational() const { return eps.empty() && one_part.is_constant(); }
  Rational rational_part() const;  // pre: one_part is constant

  GenericValue plus(const GenericValue& o) const;
  GenericValue negated() const;
  GenericValue minus(const GenericValue& o) const { return plus(o.negated()); }
  GenericValue scaled(const Rational& c) const;

  /// Sign under a completion: the 1-scale germ decides unless it vanishes,
  /// then the lexicographically first eps coefficient does.
  int sign(const Completion& c) const;
  int compare(const GenericValue& o, const Completion& c) const {
    return minus(o).sign(c);
  }

  bool operator==(const GenericValue& o) const = default;
  std::string to_string() const;
};

/// Open interval with rational endpoints.
struct Box {
  Rational lo, hi;
};

/// Finite Q(t)-combination of generators and the distinguished 1.
struct ModelElement {
  RationalFunction one_coeff;
  std::map<int, RationalFunction> combo;  // generator id -> nonzero coefficient

  static ModelElement one();
  static ModelElement generator(int id);

  bool is_zero() const { return one_coeff.is_zero() && combo.empty(); }
  ModelElement plus(const ModelElement& o) const;
  ModelElement negated() const;
  ModelElement minus(const ModelElement& o) const { return plus(o.negated()); }
  ModelElement scaled(const RationalFunction& q) const;

  bool operator==(const ModelElement& o) const = default;
  std::string to_string() const;
};

/// One lazily-valued generator: directions acquire values on first use, with
/// fresh infinitesimals guaranteeing no accidental Q-linear relations.
struct Generator {
  int id = 0;
  std::vector<std::pair<RationalFunction, GenericValue>> assignment;  // keys Q-independent
};

using Environment = std::map<std::string, ModelElement>;

/// Lazy countable structure satisfying the vector-space laws and, on demand,
/// finite density instances. Single logical owner; move-only.
class ModelSession {
 public:
  explicit ModelSession(Completion completion, std::uint64_t seed = 0);
  ModelSession(ModelSession&&) = default;
  ModelSession& operator=(ModelSession&&) = default;
  ModelSession(const ModelSession&) = delete;
  ModelSession& operator=(const ModelSession&) = delete;

  const Completion& completion() const { return completion_; }
  std::uint64_t seed() const { return seed_; }
  std::uint64_t eps_counter() const { return next_eps_; }
  const std::vector<Generator>& generators() const { return generators_; }

  /// A generator with no pinned directions; every component is generic.
  ModelElement fresh_generator();

  /// witness_in_boxes: a fresh generator g with lam_{qs[i]}(g) inside
  /// boxes[i] exactly (solved at box centers, nudged off zero).
  ModelElement witness_in_boxes(const std::vector<RationalFunction>& qs,
                                const std::vector<Box>& boxes);

  /// Exact value of lam_direction(generator); materializes unseen directions
  /// with fresh positive infinitesimals.
  GenericValue eval_direction(int generator_id, const RationalFunction& direction);

  GenericValue eval_term(const LinearTerm& term, const Environment& env);
  bool eval_formula(const FormulaPtr& qf, const Environment& env);

  /// Deterministic text record for reproducible replays.
  std::string dump() const;
  static ModelSession restore(const std::string& text);

 private:
  Completion completion_;
  std::uint64_t seed_ = 0;
  std::uint64_t next_eps_ = 0;
  std::vector<Generator> generators_;
};

/// Element-level evaluation of a linear term: the exact Q(t)-combination of
/// the environment elements and 1. Pure; no session required.
ModelElement element_combination(const LinearTerm& term, const Environment& env);

/// dcl = Q(t)-span: exact coefficients of target over zs, or nullopt.
std::optional<std::vector<RationalFunction>> span_membership(
    const ModelElement& target, const std::vector<ModelElement>& zs);

enum class ExchangeOutcome { Holds, Vacuous, Violation };

/// Steinitz check: when a is in span(S + b) but not span(S), b must be in
/// span(S + a).
ExchangeOutcome exchange_check(const std::vector<ModelElement>& s, const ModelElement& a,
                               const ModelElement& b);

struct NonstrongResult {
  ModelElement witness;
  bool memberships_verified = false;
  bool same_row_pairs_infeasible = false;
  long pairs_checked = 0;
};

/// The finite-depth array demo: a witness routed through one interval per
/// row, plus the same-row pairwise-infeasibility report.
NonstrongResult nonstrong_demo(ModelSession& session, const std::vector<RationalFunction>& rows,
                               const std::vector<Box>& cols, const std::vector<std::size_t>& path);

}  // namespace densevec
