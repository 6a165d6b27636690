#pragma once

#include <map>
#include <string>
#include <vector>

#include "densevec/model.hpp"

namespace densevec {

enum class Feasibility { Feasible, Infeasible };

/// One linear constraint over component variables: sum of coeffs plus the
/// constant, related to 0 by rel.
struct LinConstraint {
  std::map<std::string, Rational> coeffs;
  GenericValue constant;
  Rel rel = Rel::Lt;
};

/// Exact feasibility over the ordered group of generic values: equalities by
/// substitution, strict inequalities by per-variable bound shrinking,
/// disequalities by point avoidance. Independent of the qe module.
Feasibility numeric_feasible(std::vector<LinConstraint> constraints, const Completion& c);

}  // namespace densevec
