#include "densevec/model.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

#include "densevec/feasible.hpp"
#include "densevec/sexpr.hpp"

namespace densevec {

// ---------------------------------------------------------------------------
// ModelElement

ModelElement ModelElement::one() {
  ModelElement e;
  e.one_coeff = RationalFunction(1);
  return e;
}

ModelElement ModelElement::generator(int id) {
  ModelElement e;
  e.combo.emplace(id, RationalFunction(1));
  return e;
}

ModelElement ModelElement::plus(const ModelElement& o) const {
  ModelElement out = *this;
  out.one_coeff = out.one_coeff + o.one_coeff;
  for (const auto& [id, q] : o.combo) {
    auto [it, inserted] = out.combo.emplace(id, q);
    if (!inserted) {
      it->second = it->second + q;
      if (it->second.is_zero()) out.combo.erase(it);
    }
  }
  return out;
}

ModelElement ModelElement::negated() const {
  ModelElement out;
  out.one_coeff = -one_coeff;
  for (const auto& [id, q] : combo) out.combo.emplace(id, -q);
  return out;
}

ModelElement ModelElement::scaled(const RationalFunction& q) const {
  ModelElement out;
  if (q.is_zero()) return out;
  out.one_coeff = one_coeff * q;
  for (const auto& [id, c] : combo) out.combo.emplace(id, c * q);
  return out;
}

std::string ModelElement::to_string() const {
  std::string out = "(elem";
  if (!one_coeff.is_zero()) out += " (one \"" + one_coeff.to_string() + "\")";
  for (const auto& [id, q] : combo)
    out += " (gen " + std::to_string(id) + " \"" + q.to_string() + "\")";
  return out + ")";
}

// ---------------------------------------------------------------------------
// ModelSession

ModelSession::ModelSession(Completion completion, std::uint64_t seed)
    : completion_(std::move(completion)), seed_(seed) {}

ModelElement ModelSession::fresh_generator() {
  Generator g;
  g.id = static_cast<int>(generators_.size());
  generators_.push_back(std::move(g));
  return ModelElement::generator(generators_.back().id);
}

ModelElement ModelSession::witness_in_boxes(const std::vector<RationalFunction>& qs,
                                            const std::vector<Box>& boxes) {
  if (qs.size() != boxes.size()) throw DimensionMismatchError("one box per direction");
  for (const auto& b : boxes)
    if (!(b.lo < b.hi)) throw EmptyBoxError();
  CoordinateDecomposition dec = q_basis(qs);
  if (dec.basis.size() != qs.size()) throw DependentDirectionsError();

  // Targets are the box centers, nudged off zero so no direction acquires a
  // spurious root.
  std::vector<Rational> targets;
  targets.reserve(boxes.size());
  for (const auto& b : boxes) {
    Rational center = (b.lo + b.hi) / 2;
    if (center == 0) center = b.hi / 2;
    targets.push_back(std::move(center));
  }

  ModelElement e = fresh_generator();
  Generator& g = generators_.back();
  // The requested directions are a basis of their span; keying the assignment
  // by them pins lam_{qs[i]}(g) = targets[i] exactly.
  for (std::size_t i = 0; i < qs.size(); ++i)
    g.assignment.emplace_back(qs[i], GenericValue::of_rational(targets[i]));
  return e;
}

GenericValue ModelSession::eval_direction(int generator_id, const RationalFunction& direction) {
  assert(generator_id >= 0 && generator_id < static_cast<int>(generators_.size()));
  if (direction.is_zero()) return GenericValue{};
  Generator& g = generators_[static_cast<std::size_t>(generator_id)];

  // Coordinates of the direction over the assignment keys, if it lies in
  // their span.
  std::vector<RationalFunction> family;
  family.reserve(g.assignment.size() + 1);
  for (const auto& [key, value] : g.assignment) family.push_back(key);
  family.push_back(direction);
  RfCoordinates coords = rf_coordinates(family);
  QMatrix transposed;
  if (!g.assignment.empty()) {
    std::size_t width = coords.vectors[0].size();
    transposed.assign(width, QVector(g.assignment.size(), Rational(0)));
    for (std::size_t k = 0; k < g.assignment.size(); ++k)
      for (std::size_t j = 0; j < width; ++j) transposed[j][k] = coords.vectors[k][j];
    if (auto combo = linsolve_q(transposed, coords.vectors.back())) {
      GenericValue out;
      for (std::size_t k = 0; k < g.assignment.size(); ++k)
        if ((*combo)[k] != 0) out = out.plus(g.assignment[k].second.scaled((*combo)[k]));
      return out;
    }
  }
  // Unseen direction: materialize with a fresh positive infinitesimal. The
  // key is sign-normalized so the positively oriented direction is the one
  // that comes out positive.
  bool flipped = direction.num().leading() < 0;
  GenericValue fresh = GenericValue::eps_unit(next_eps_++);
  g.assignment.emplace_back(flipped ? -direction : direction, fresh);
  return flipped ? fresh.negated() : fresh;
}

GenericValue ModelSession::eval_term(const LinearTerm& term, const Environment& env) {
  GenericValue acc;
  acc.one_part = term.constant;
  for (const auto& [name, q] : term.coeffs) {
    auto it = env.find(name);
    if (it == env.end()) throw UnboundVariableError(name);
    const ModelElement& e = it->second;
    acc.one_part = acc.one_part + q * e.one_coeff;
    for (const auto& [gid, coeff] : e.combo) acc = acc.plus(eval_direction(gid, q * coeff));
  }
  return acc;
}

bool ModelSession::eval_formula(const FormulaPtr& qf, const Environment& env) {
  switch (qf->kind) {
    case Formula::Kind::Atom: {
      int s = eval_term(qf->atom.lhs, env).sign(completion_);
      switch (qf->atom.rel) {
        case Rel::Eq:
          return s == 0;
        case Rel::Neq:
          return s != 0;
        case Rel::Lt:
          return s < 0;
      }
      return false;
    }
    case Formula::Kind::And:
      return std::all_of(qf->kids.begin(), qf->kids.end(),
                         [&](const FormulaPtr& k) { return eval_formula(k, env); });
    case Formula::Kind::Or:
      return std::any_of(qf->kids.begin(), qf->kids.end(),
                         [&](const FormulaPtr& k) { return eval_formula(k, env); });
    case Formula::Kind::Not:
      return !eval_formula(qf->kids[0], env);
    default:
      throw NotQuantifierFreeError("session evaluation is quantifier-free");
  }
}

// ---------------------------------------------------------------------------
// Session dump/restore

namespace {

void dump_value(const GenericValue& v, std::ostream& os) {
  os << "(value \"" << v.one_part.to_string() << "\"";
  if (!v.eps.empty()) {
    os << " (eps";
    for (const auto& [idx, c] : v.eps) os << " (" << idx << " " << to_string(c) << ")";
    os << ")";
  }
  os << ")";
}

GenericValue value_from(const sexpr::Node& n) {
  sexpr::expect_list(n, "value");
  GenericValue v;
  v.one_part = parse_scalar_text(n.at(1).atom);
  if (n.kids.size() > 2) {
    const sexpr::Node& eps = sexpr::expect_list(n.kids[2], "eps");
    for (std::size_t i = 1; i < eps.kids.size(); ++i) {
      const sexpr::Node& pair = eps.kids[i];
      v.eps.emplace(std::stoull(pair.at(0).atom), parse_rational(pair.at(1).atom));
    }
  }
  return v;
}

}  // namespace

std::string ModelSession::dump() const {
  std::ostringstream os;
  os << "(session\n";
  os << "  (completion " << completion_.to_string() << ")\n";
  os << "  (seed " << seed_ << ")\n";
  os << "  (eps-counter " << next_eps_ << ")\n";
  for (const auto& g : generators_) {
    os << "  (generator " << g.id;
    for (const auto& [dir, value] : g.assignment) {
      os << "\n    (dir \"" << dir.to_string() << "\" ";
      dump_value(value, os);
      os << ")";
    }
    os << ")\n";
  }
  os << ")\n";
  return os.str();
}

ModelSession ModelSession::restore(const std::string& text) {
  sexpr::Node root = sexpr::read(text);
  sexpr::expect_list(root, "session");
  std::optional<Completion> completion;
  std::uint64_t seed = 0, eps_counter = 0;
  std::vector<Generator> generators;
  for (std::size_t i = 1; i < root.kids.size(); ++i) {
    const sexpr::Node& n = root.kids[i];
    if (n.is_atom || n.kids.empty()) throw ParseError("bad session entry", 1, 1);
    const std::string& head = n.kids[0].atom;
    if (head == "completion") {
      completion = Completion::parse(n.at(1).atom);
    } else if (head == "seed") {
      seed = std::stoull(n.at(1).atom);
    } else if (head == "eps-counter") {
      eps_counter = std::stoull(n.at(1).atom);
    } else if (head == "generator") {
      Generator g;
      g.id = std::stoi(n.at(1).atom);
      for (std::size_t j = 2; j < n.kids.size(); ++j) {
        const sexpr::Node& dir = sexpr::expect_list(n.kids[j], "dir");
        g.assignment.emplace_back(parse_scalar_text(dir.at(1).atom), value_from(dir.at(2)));
      }
      generators.push_back(std::move(g));
    } else {
      throw ParseError("unknown session entry: " + head, 1, 1);
    }
  }
  if (!completion) throw ParseError("session record without completion", 1, 1);
  ModelSession s(*completion, seed);
  s.next_eps_ = eps_counter;
  s.generators_ = std::move(generators);
  return s;
}

ModelElement element_combination(const LinearTerm& term, const Environment& env) {
  ModelElement out;
  out.one_coeff = term.constant;
  for (const auto& [name, q] : term.coeffs) {
    auto it = env.find(name);
    if (it == env.end()) throw UnboundVariableError(name);
    out = out.plus(it->second.scaled(q));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Span membership, exchange, the array demo

namespace {

// Basis positions: the 1-coordinate then each generator id used anywhere.
std::vector<int> support_ids(const ModelElement& target, const std::vector<ModelElement>& zs) {
  std::vector<int> ids;
  auto feed = [&](const ModelElement& e) {
    for (const auto& [id, q] : e.combo)
      if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
  };
  feed(target);
  for (const auto& z : zs) feed(z);
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace

std::optional<std::vector<RationalFunction>> span_membership(
    const ModelElement& target, const std::vector<ModelElement>& zs) {
  std::vector<int> ids = support_ids(target, zs);
  const std::size_t rows = ids.size() + 1;  // a row per coordinate, 1 first
  const std::size_t cols = zs.size();

  // Gaussian elimination over the field Q(t) on [A | target].
  std::vector<std::vector<RationalFunction>> work(rows,
                                                  std::vector<RationalFunction>(cols + 1));
  auto coord = [&](const ModelElement& e, std::size_t row) -> RationalFunction {
    if (row == 0) return e.one_coeff;
    auto it = e.combo.find(ids[row - 1]);
    return it == e.combo.end() ? RationalFunction() : it->second;
  };
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) work[r][c] = coord(zs[c], r);
    work[r][cols] = coord(target, r);
  }

  std::vector<std::size_t> pivot_col;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t sel = rank;
    while (sel < rows && work[sel][col].is_zero()) ++sel;
    if (sel == rows) continue;
    std::swap(work[sel], work[rank]);
    RationalFunction lead = work[rank][col];
    for (auto& x : work[rank]) x = x / lead;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank || work[r][col].is_zero()) continue;
      RationalFunction factor = work[r][col];
      for (std::size_t c = col; c <= cols; ++c)
        work[r][c] = work[r][c] - factor * work[rank][c];
    }
    pivot_col.push_back(col);
    ++rank;
  }
  for (std::size_t r = rank; r < rows; ++r)
    if (!work[r][cols].is_zero()) return std::nullopt;

  std::vector<RationalFunction> coeffs(cols);
  for (std::size_t k = 0; k < rank; ++k) coeffs[pivot_col[k]] = work[k][cols];
  return coeffs;
}

ExchangeOutcome exchange_check(const std::vector<ModelElement>& s, const ModelElement& a,
                               const ModelElement& b) {
  std::vector<ModelElement> s_with_b = s;
  s_with_b.push_back(b);
  if (!span_membership(a, s_with_b) || span_membership(a, s)) return ExchangeOutcome::Vacuous;
  std::vector<ModelElement> s_with_a = s;
  s_with_a.push_back(a);
  return span_membership(b, s_with_a) ? ExchangeOutcome::Holds : ExchangeOutcome::Violation;
}

NonstrongResult nonstrong_demo(ModelSession& session, const std::vector<RationalFunction>& rows,
                               const std::vector<Box>& cols,
                               const std::vector<std::size_t>& path) {
  if (path.size() != rows.size()) throw DimensionMismatchError("one column choice per row");
  std::vector<Box> chosen;
  chosen.reserve(rows.size());
  for (std::size_t j = 0; j < rows.size(); ++j) chosen.push_back(cols.at(path[j]));

  NonstrongResult result;
  result.witness = session.witness_in_boxes(rows, chosen);
  int gen = result.witness.combo.begin()->first;

  result.memberships_verified = true;
  for (std::size_t j = 0; j < rows.size(); ++j) {
    GenericValue v = session.eval_direction(gen, rows[j]);
    bool inside = v.minus(GenericValue::of_rational(chosen[j].lo)).sign(session.completion()) > 0 &&
                  v.minus(GenericValue::of_rational(chosen[j].hi)).sign(session.completion()) < 0;
    if (!inside) result.memberships_verified = false;
  }

  // Same-row formulas are pairwise inconsistent: membership in two disjoint
  // intervals is numerically infeasible.
  result.same_row_pairs_infeasible = true;
  for (std::size_t k = 0; k < cols.size(); ++k) {
    for (std::size_t l = k + 1; l < cols.size(); ++l) {
      std::vector<LinConstraint> constraints;
      auto bound = [&](const Rational& endpoint, bool lower) {
        LinConstraint c;
        c.rel = Rel::Lt;
        c.coeffs.emplace("w", lower ? Rational(-1) : Rational(1));
        c.constant = GenericValue::of_rational(lower ? endpoint : -endpoint);
        constraints.push_back(std::move(c));
      };
      bound(cols[k].lo, true);   // w > lo_k
      bound(cols[k].hi, false);  // w < hi_k
      bound(cols[l].lo, true);
      bound(cols[l].hi, false);
      ++result.pairs_checked;
      if (numeric_feasible(std::move(constraints), session.completion()) !=
          Feasibility::Infeasible)
        result.same_row_pairs_infeasible = false;
    }
  }
  return result;
}

}  // namespace densevec
