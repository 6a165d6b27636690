#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "densevec/feasible.hpp"
#include "densevec/model.hpp"
#include "support/random_formulas.hpp"

using namespace densevec;

namespace {
const Completion kPosInf = Completion::germ_pos_inf();

RationalFunction rf(const std::string& text) { return parse_scalar_text(text); }

bool inside(ModelSession& s, const GenericValue& v, const Box& b) {
  return v.minus(GenericValue::of_rational(b.lo)).sign(s.completion()) > 0 &&
         v.minus(GenericValue::of_rational(b.hi)).sign(s.completion()) < 0;
}
}  // namespace

TEST_CASE("generic value ordering is lexicographic") {
  GenericValue half = GenericValue::of_rational(make_rational(1, 2));
  GenericValue e0 = GenericValue::eps_unit(0);
  GenericValue e1 = GenericValue::eps_unit(1);

  CHECK(half.sign(kPosInf) == 1);
  CHECK(e0.sign(kPosInf) == 1);
  CHECK(e0.negated().sign(kPosInf) == -1);
  // rational part dominates every eps
  CHECK(half.minus(e0).sign(kPosInf) == 1);
  // eps(0) dominates eps(1)
  CHECK(e0.minus(e1).sign(kPosInf) == 1);
  CHECK(e0.minus(e1.scaled(Rational(1000))).sign(kPosInf) == 1);
  // zero iff all parts vanish
  CHECK(e0.minus(e0).sign(kPosInf) == 0);
  CHECK(e0.minus(e0).is_zero());
}

TEST_CASE("witness_in_boxes solves at box centers") {
  ModelSession s(kPosInf);
  ModelElement g = s.witness_in_boxes({rf("1"), rf("t")}, {{Rational(0), Rational(1)},
                                                           {Rational(5), Rational(6)}});
  int id = g.combo.begin()->first;
  CHECK(s.eval_direction(id, rf("1")).rational_part() == make_rational(1, 2));
  CHECK(s.eval_direction(id, rf("t")).rational_part() == make_rational(11, 2));
  // derived value by additivity
  CHECK(s.eval_direction(id, rf("t+1")).rational_part() == Rational(6));
}

TEST_CASE("witness_in_boxes scaling arithmetic") {
  ModelSession s(kPosInf);
  s.witness_in_boxes({rf("2t")}, {{Rational(10), Rational(12)}});
  CHECK(s.eval_direction(0, rf("t")).rational_part() == make_rational(11, 2));
  CHECK(s.eval_direction(0, rf("2t")).rational_part() == Rational(11));
}

TEST_CASE("witness_in_boxes rejects bad input") {
  ModelSession s(kPosInf);
  CHECK_THROWS_AS(s.witness_in_boxes({rf("t"), rf("2t")},
                                     {{Rational(0), Rational(1)}, {Rational(2), Rational(3)}}),
                  DependentDirectionsError);
  CHECK_THROWS_AS(s.witness_in_boxes({rf("t")}, {{Rational(1), Rational(1)}}), EmptyBoxError);
  CHECK_THROWS_AS(s.witness_in_boxes({rf("t")}, {}), DimensionMismatchError);
}

TEST_CASE("session evaluation covers the spec examples") {
  ModelSession s(kPosInf);
  ModelElement g = s.witness_in_boxes({rf("1"), rf("t")}, {{Rational(0), Rational(1)},
                                                           {Rational(5), Rational(6)}});
  Environment env{{"g", g}};

  LinearTerm term;  // lam_{t+1}(g)
  term.add_coeff("g", rf("t+1"));
  CHECK(s.eval_term(term, env).rational_part() == Rational(6));

  FormulaPtr above5 = parse_formula("(> (lam t g) (const 5))");
  CHECK(s.eval_formula(above5, env));

  // a never-assigned direction materializes as a fresh positive infinitesimal
  ModelElement h = s.fresh_generator();
  Environment env2{{"h", h}};
  FormulaPtr positive = parse_formula("(> (lam t^5 h) 0)");
  CHECK(s.eval_formula(positive, env2));
  CHECK_THROWS_AS(s.eval_formula(parse_formula("(< missing 0)"), env2), UnboundVariableError);
  CHECK_THROWS_AS(s.eval_formula(parse_formula("(exists (x) (< x 0))"), env2),
                  NotQuantifierFreeError);
}

TEST_CASE("vector space laws hold exactly on model elements") {
  testing::Gen gen(0x1A2B);
  ModelSession s(kPosInf);
  for (int i = 0; i < 1000; ++i) {
    RationalFunction q1 = gen.scalar(), q2 = gen.scalar();
    ModelElement e = gen.generic_element(s);
    CHECK(e.scaled(q2).scaled(q1) == e.scaled(q1 * q2));
    CHECK(e.scaled(q1 + q2) == e.scaled(q1).plus(e.scaled(q2)));
    CHECK(e.scaled(RationalFunction(1)) == e);
    // evaluation respects the laws as well
    LinearTerm left, right;
    left.add_coeff("e", q1 * q2);
    Environment env{{"e", e}};
    GenericValue via_product = s.eval_term(left, env);
    Environment env2{{"e", e.scaled(q2)}};
    LinearTerm outer;
    outer.add_coeff("e", q1);
    GenericValue via_compose = s.eval_term(outer, env2);
    CHECK(via_product == via_compose);
  }
}

TEST_CASE("genericity: fresh directions never collide") {
  ModelSession s(kPosInf);
  ModelElement g1 = s.fresh_generator();
  ModelElement g2 = s.fresh_generator();
  // materialize a handful of directions across both generators
  std::vector<GenericValue> values;
  for (const char* d : {"t", "t^2", "1/(1+t)"}) {
    values.push_back(s.eval_direction(0, rf(d)));
    values.push_back(s.eval_direction(1, rf(d)));
  }
  // no nonzero rational combination vanishes: indices are pairwise distinct
  std::set<std::uint64_t> indices;
  for (const auto& v : values) {
    REQUIRE(v.eps.size() == 1);
    CHECK(indices.insert(v.eps.begin()->first).second);
  }
  GenericValue combo;
  Rational c(1);
  for (const auto& v : values) {
    combo = combo.plus(v.scaled(c));
    c += 1;
  }
  CHECK(combo.sign(s.completion()) != 0);
}

TEST_CASE("session dump and restore replay deterministically") {
  ModelSession s(Completion::seeded(17), 99);
  s.witness_in_boxes({rf("t"), rf("t^2/(1+t)")},
                     {{Rational(0), Rational(1)}, {Rational(-3), Rational(-2)}});
  s.eval_direction(0, rf("1"));  // materialize an extra direction
  std::string record = s.dump();

  ModelSession restored = ModelSession::restore(record);
  CHECK(restored.dump() == record);
  CHECK(restored.seed() == 99);
  CHECK(restored.eps_counter() == s.eps_counter());
  CHECK(restored.completion() == s.completion());
  // replays agree on old and fresh directions
  CHECK(restored.eval_direction(0, rf("t+1")) == s.eval_direction(0, rf("t+1")));
  CHECK(restored.eval_direction(0, rf("t^3")) == s.eval_direction(0, rf("t^3")));
}

TEST_CASE("span membership examples") {
  ModelSession s(kPosInf);
  ModelElement g1 = s.fresh_generator();
  ModelElement g2 = s.fresh_generator();

  // lam_t(g1) + g2 is in span{g1, g2} with coefficients (t, 1)
  ModelElement target = g1.scaled(rf("t")).plus(g2);
  auto coeffs = span_membership(target, {g1, g2});
  REQUIRE(coeffs);
  CHECK((*coeffs)[0] == rf("t"));
  CHECK((*coeffs)[1] == rf("1"));

  // g1 in span{lam_{t^2}(g1)} with coefficient 1/t^2
  auto inv = span_membership(g1, {g1.scaled(rf("t^2"))});
  REQUIRE(inv);
  CHECK((*inv)[0] == rf("1/t^2"));

  CHECK(!span_membership(g1, {g2}));
  // the distinguished 1 participates
  auto with_one = span_membership(ModelElement::one().scaled(rf("t")).plus(g1),
                                  {ModelElement::one(), g1});
  REQUIRE(with_one);
  CHECK((*with_one)[0] == rf("t"));
}

TEST_CASE("exchange check examples") {
  ModelSession s(kPosInf);
  ModelElement b = s.fresh_generator();
  ModelElement a = b.scaled(rf("t"));
  CHECK(exchange_check({}, a, b) == ExchangeOutcome::Holds);

  ModelElement one = ModelElement::one();
  CHECK(exchange_check({}, one.scaled(rf("t/2")), b) == ExchangeOutcome::Vacuous);
}

TEST_CASE("exchange property holds on random instances") {
  testing::Gen gen(0xE8);
  int violations = 0;
  for (int trial = 0; trial < 200; ++trial) {
    ModelSession s(kPosInf);
    std::vector<ModelElement> pool;
    pool.push_back(ModelElement::one());
    for (int i = 0; i < 5; ++i) pool.push_back(s.fresh_generator());

    auto random_combo = [&] {
      ModelElement e;
      for (const auto& p : pool)
        if (gen.pick(0, 2) == 0) e = e.plus(p.scaled(gen.scalar(1, 3)));
      return e;
    };
    std::vector<ModelElement> set;
    long set_size = gen.pick(0, 3);
    for (long i = 0; i < set_size; ++i) set.push_back(random_combo());
    if (exchange_check(set, random_combo(), random_combo()) == ExchangeOutcome::Violation)
      ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("numeric_feasible handles generic-value constants") {
  ModelSession s(kPosInf);
  GenericValue eps = GenericValue::eps_unit(0);
  // z < eps and z > 0 is feasible (the order is dense below eps)
  LinConstraint upper{{{"z", Rational(1)}}, eps.negated(), Rel::Lt};
  LinConstraint lower{{{"z", Rational(-1)}}, GenericValue{}, Rel::Lt};
  CHECK(numeric_feasible({upper, lower}, kPosInf) == Feasibility::Feasible);
  // z < 0 and z > eps is infeasible
  LinConstraint upper2{{{"z", Rational(1)}}, GenericValue{}, Rel::Lt};
  LinConstraint lower2{{{"z", Rational(-1)}}, eps, Rel::Lt};
  CHECK(numeric_feasible({upper2, lower2}, kPosInf) == Feasibility::Infeasible);
  // disequality against a pinned point
  LinConstraint pin{{{"z", Rational(1)}}, eps.negated(), Rel::Eq};
  LinConstraint avoid{{{"z", Rational(1)}}, eps.negated(), Rel::Neq};
  CHECK(numeric_feasible({pin, avoid}, kPosInf) == Feasibility::Infeasible);
}

TEST_CASE("nonstrong demo spec example") {
  ModelSession s(kPosInf);
  // rows (t, t^2), cols ((0,1),(2,3)), path t->(2,3), t^2->(0,1)
  NonstrongResult r = nonstrong_demo(s, {rf("t"), rf("t^2")},
                                     {{Rational(0), Rational(1)}, {Rational(2), Rational(3)}},
                                     {1, 0});
  CHECK(r.memberships_verified);
  CHECK(r.same_row_pairs_infeasible);
  CHECK(r.pairs_checked == 1);
  int id = r.witness.combo.begin()->first;
  CHECK(s.eval_direction(id, rf("t")).rational_part() == make_rational(5, 2));
  CHECK(s.eval_direction(id, rf("t^2")).rational_part() == make_rational(1, 2));
}

TEST_CASE("nonstrong demo at depth ten") {
  testing::Gen gen(0xA77AE);
  ModelSession s(kPosInf);
  auto rows = gen.independent_directions(10);
  auto cols = gen.disjoint_boxes(10);
  std::vector<std::size_t> path;
  for (int i = 0; i < 10; ++i) path.push_back(static_cast<std::size_t>(gen.pick(0, 9)));
  NonstrongResult r = nonstrong_demo(s, rows, cols, path);
  CHECK(r.memberships_verified);
  CHECK(r.same_row_pairs_infeasible);
  CHECK(r.pairs_checked == 45);
}

TEST_CASE("witness postcondition verified on random direction tuples") {
  testing::Gen gen(0xB0C5);
  for (int trial = 0; trial < 50; ++trial) {
    ModelSession s(kPosInf);
    std::size_t m = static_cast<std::size_t>(gen.pick(1, 4));
    auto dirs = gen.independent_directions(m);
    auto boxes = gen.disjoint_boxes(m);
    ModelElement g = s.witness_in_boxes(dirs, boxes);
    int id = g.combo.begin()->first;
    for (std::size_t i = 0; i < m; ++i)
      CHECK(inside(s, s.eval_direction(id, dirs[i]), boxes[i]));
  }
}
