#include "densevec/feasible.hpp"

#include <cassert>
#include <set>

namespace densevec {

namespace {

bool constant_holds(const LinConstraint& c, const Completion& comp) {
  int s = c.constant.sign(comp);
  switch (c.rel) {
    case Rel::Eq:
      return s == 0;
    case Rel::Neq:
      return s != 0;
    case Rel::Lt:
      return s < 0;
  }
  return false;
}

// Substitutes var := value (a linear expression over other vars) everywhere.
struct Substitution {
  std::map<std::string, Rational> coeffs;
  GenericValue constant;
};

void apply(LinConstraint& target, const std::string& var, const Substitution& sub) {
  auto it = target.coeffs.find(var);
  if (it == target.coeffs.end()) return;
  Rational factor = it->second;
  target.coeffs.erase(it);
  for (const auto& [name, c] : sub.coeffs) {
    Rational& slot = target.coeffs[name];
    slot += factor * c;
    if (slot == 0) target.coeffs.erase(name);
  }
  target.constant = target.constant.plus(sub.constant.scaled(factor));
}

}  // namespace

Feasibility numeric_feasible(std::vector<LinConstraint> constraints, const Completion& comp) {
  // Equality pass: solve one pinned variable at a time and substitute.
  while (true) {
    std::vector<LinConstraint> next;
    std::optional<std::pair<std::string, Substitution>> pick;
    for (auto& c : constraints) {
      if (c.coeffs.empty()) {
        if (!constant_holds(c, comp)) return Feasibility::Infeasible;
        continue;  // settled
      }
      if (!pick && c.rel == Rel::Eq) {
        auto it = c.coeffs.begin();
        std::string var = it->first;
        Rational lead = it->second;
        Substitution sub;
        for (auto jt = std::next(it); jt != c.coeffs.end(); ++jt)
          sub.coeffs.emplace(jt->first, -jt->second / lead);
        sub.constant = c.constant.scaled(Rational(-1) / lead);
        pick = {std::move(var), std::move(sub)};
        continue;  // the solved equality is consumed
      }
      next.push_back(std::move(c));
    }
    constraints = std::move(next);
    if (!pick) break;
    for (auto& c : constraints) apply(c, pick->first, pick->second);
  }

  // Only strict and disequality constraints remain. A variable still present
  // ranges over a dense order, so disequalities cost nothing once the open
  // part is nonempty.
  std::vector<LinConstraint> strict;
  for (auto& c : constraints) {
    if (c.rel == Rel::Neq) continue;  // point avoidance
    assert(c.rel == Rel::Lt);
    strict.push_back(std::move(c));
  }

  std::set<std::string> vars;
  for (const auto& c : strict)
    for (const auto& [name, q] : c.coeffs) vars.insert(name);

  // Shrink the bound interval of one variable at a time: every lower/upper
  // bound pair must stay compatible after the variable is removed.
  for (const auto& var : vars) {
    std::vector<LinConstraint> lowers, uppers, rest;
    for (auto& c : strict) {
      auto it = c.coeffs.find(var);
      if (it == c.coeffs.end())
        rest.push_back(std::move(c));
      else if (it->second > 0)
        uppers.push_back(std::move(c));
      else
        lowers.push_back(std::move(c));
    }
    for (const auto& low : lowers) {
      Rational cl = low.coeffs.at(var);
      for (const auto& up : uppers) {
        Rational cu = up.coeffs.at(var);
        LinConstraint combined;
        combined.rel = Rel::Lt;
        combined.constant = low.constant.scaled(cu).plus(up.constant.scaled(-cl));
        auto fold = [&](const LinConstraint& src, const Rational& factor) {
          for (const auto& [name, q] : src.coeffs) {
            if (name == var) continue;
            Rational& slot = combined.coeffs[name];
            slot += factor * q;
            if (slot == 0) combined.coeffs.erase(name);
          }
        };
        fold(low, cu);
        fold(up, -cl);
        if (combined.coeffs.empty()) {
          if (!constant_holds(combined, comp)) return Feasibility::Infeasible;
        } else {
          rest.push_back(std::move(combined));
        }
      }
    }
    strict = std::move(rest);
  }

  for (const auto& c : strict) {
    assert(c.coeffs.empty());
    if (!constant_holds(c, comp)) return Feasibility::Infeasible;
  }
  return Feasibility::Feasible;
}

}  // namespace densevec
