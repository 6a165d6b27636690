#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "densevec/qfield.hpp"

using namespace densevec;

namespace {

RationalFunction rf(const std::string& num, const std::string& den = "1") {
  auto poly = [](const std::string& text) {
    // tiny helper: coefficients "c0 c1 c2 ..."
    std::vector<Rational> cs;
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) cs.push_back(parse_rational(tok));
    return Polynomial::from_coeffs(std::move(cs));
  };
  return RationalFunction::canonical(poly(num), poly(den));
}

RationalFunction random_rf(std::mt19937_64& rng, int max_degree = 2, long span = 9) {
  std::uniform_int_distribution<long> coeff(-span, span);
  std::uniform_int_distribution<int> deg(0, max_degree);
  auto poly = [&](bool nonzero) {
    std::vector<Rational> cs(static_cast<std::size_t>(deg(rng)) + 1);
    for (auto& c : cs) c = Rational(coeff(rng));
    Polynomial p = Polynomial::from_coeffs(std::move(cs));
    if (nonzero && p.is_zero()) p = Polynomial(1);
    return p;
  };
  return RationalFunction::canonical(poly(false), poly(true));
}

}  // namespace

TEST_CASE("rational canonical form") {
  CHECK(make_rational(2, 4) == make_rational(1, 2));
  CHECK(make_rational(-2, -4) == make_rational(1, 2));
  CHECK(make_rational(0, 5) == Rational(0));
  CHECK_THROWS_AS(make_rational(1, 0), ZeroDenominatorError);
}

TEST_CASE("rf_canonicalize forced reductions") {
  // (2t+2)/(4t) -> (t+1)/(2t)
  RationalFunction a = rf("2 2", "0 4");
  CHECK(a.num().to_string() == "1+t");
  CHECK(a.den().to_string() == "2t");
  CHECK(a.to_string() == "(1+t)/(2t)");

  // 0/5 -> 0/1
  RationalFunction zero = rf("0", "5");
  CHECK(zero.is_zero());
  CHECK(zero.den().to_string() == "1");

  // (t^2-1)/(t-1) -> (t+1)/1
  RationalFunction c = rf("-1 0 1", "-1 1");
  CHECK(c.num().to_string() == "1+t");
  CHECK(c.den().to_string() == "1");
  CHECK(c.to_string() == "1+t");
}

TEST_CASE("rf field operations") {
  RationalFunction t = RationalFunction::t();
  RationalFunction one(1);

  // inv(t/(t+1)) = (t+1)/t
  RationalFunction q = t / (t + one);
  CHECK(q.inverse() == (t + one) / t);

  // t * 1/t = 1
  CHECK(t * t.inverse() == one);

  // 1/(t-1) + 1/(t+1) = 2t/(t^2-1)
  RationalFunction lhs = (t - one).inverse() + (t + one).inverse();
  RationalFunction rhs = (t + t) / (t * t - one);
  CHECK(lhs == rhs);

  CHECK_THROWS_AS(RationalFunction().inverse(), ZeroDenominatorError);
  CHECK_THROWS_AS(one / RationalFunction(), ZeroDenominatorError);
}

TEST_CASE("canonical uniqueness on random field elements") {
  std::mt19937_64 rng(20240811);
  for (int i = 0; i < 300; ++i) {
    RationalFunction a = random_rf(rng);
    if (a.is_zero()) continue;
    // scale numerator and denominator by the same random junk
    RationalFunction junk = random_rf(rng);
    if (junk.is_zero()) junk = RationalFunction(3);
    RationalFunction b =
        RationalFunction::canonical(a.num() * junk.num(), a.den() * junk.num());
    CHECK(a == b);
    CHECK(a.to_string() == b.to_string());
  }
}

TEST_CASE("field laws hold exactly on random triples") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 1000; ++i) {
    RationalFunction a = random_rf(rng), b = random_rf(rng), c = random_rf(rng);
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a + b == b + a);
    CHECK(a * b == b * a);
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a + (-a) == RationalFunction());
    if (!a.is_zero()) CHECK(a * a.inverse() == RationalFunction(1));
  }
}

TEST_CASE("rf_coordinates local coordinates") {
  RationalFunction t = RationalFunction::t();
  RationalFunction one(1);

  SUBCASE("common denominator t") {
    auto coords = rf_coordinates({one, one / t, (t + one) / t});
    CHECK(coords.denominator.to_string() == "t");
    CHECK(coords.vectors ==
          QMatrix{{Rational(0), Rational(1)}, {Rational(1), Rational(0)},
                  {Rational(1), Rational(1)}});
  }
  SUBCASE("integral inputs") {
    auto coords = rf_coordinates({t, t + t});
    CHECK(coords.denominator.to_string() == "1");
    CHECK(coords.vectors ==
          QMatrix{{Rational(0), Rational(1)}, {Rational(0), Rational(2)}});
  }
  SUBCASE("empty input") {
    auto coords = rf_coordinates({});
    CHECK(coords.denominator.to_string() == "1");
    CHECK(coords.vectors.empty());
  }
}

TEST_CASE("q_basis picks the first maximal independent subsequence") {
  RationalFunction t = RationalFunction::t();
  RationalFunction one(1);

  SUBCASE("2t = 2*t") {
    auto dec = q_basis({t, t + t, one + t});
    REQUIRE(dec.basis.size() == 2);
    CHECK(dec.basis[0] == t);
    CHECK(dec.basis[1] == one + t);
    CHECK(dec.matrix == QMatrix{{Rational(1), Rational(0)},
                                {Rational(2), Rational(0)},
                                {Rational(0), Rational(1)}});
  }
  SUBCASE("coordinates over a previous basis") {
    auto dec = q_basis({one, t, one + t + t, t + t + t});
    REQUIRE(dec.basis.size() == 2);
    CHECK(dec.matrix[2] == QVector{Rational(1), Rational(2)});
    CHECK(dec.matrix[3] == QVector{Rational(0), Rational(3)});
  }
  SUBCASE("zero spans nothing") {
    auto dec = q_basis({RationalFunction()});
    CHECK(dec.basis.empty());
    REQUIRE(dec.matrix.size() == 1);
    CHECK(dec.matrix[0].empty());
  }
}

TEST_CASE("q_basis soundness on random families") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<RationalFunction> qs;
    std::uniform_int_distribution<int> count(0, 5);
    int n = count(rng);
    for (int i = 0; i < n; ++i) qs.push_back(random_rf(rng));
    auto dec = q_basis(qs);
    for (std::size_t i = 0; i < qs.size(); ++i) {
      RationalFunction rebuilt;
      for (std::size_t j = 0; j < dec.basis.size(); ++j)
        rebuilt = rebuilt + dec.basis[j].scaled(dec.matrix[i][j]);
      CHECK(rebuilt == qs[i]);
    }
    // basis vectors have full rank: re-running q_basis keeps them all
    auto again = q_basis(dec.basis);
    CHECK(again.basis.size() == dec.basis.size());
  }
}

TEST_CASE("linsolve_q examples") {
  SUBCASE("back substitution") {
    auto z = linsolve_q({{Rational(1), Rational(2)}, {Rational(0), Rational(3)}},
                        {Rational(5), Rational(6)});
    REQUIRE(z);
    CHECK(*z == QVector{Rational(1), Rational(2)});
  }
  SUBCASE("free variables become zero") {
    auto z = linsolve_q({{Rational(1), Rational(1)}}, {Rational(4)});
    REQUIRE(z);
    CHECK(*z == QVector{Rational(4), Rational(0)});
  }
  SUBCASE("inconsistent") {
    auto z = linsolve_q({{Rational(1)}, {Rational(2)}}, {Rational(1), Rational(3)});
    CHECK(!z);
  }
  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(linsolve_q({{Rational(1)}}, {Rational(1), Rational(2)}),
                    DimensionMismatchError);
  }
}

TEST_CASE("linsolve_q returns exact solutions on random systems") {
  std::mt19937_64 rng(1234);
  std::uniform_int_distribution<int> dim(1, 5);
  std::uniform_int_distribution<long> entry(-6, 6);
  for (int trial = 0; trial < 300; ++trial) {
    int m = dim(rng), n = dim(rng);
    QMatrix a(m, QVector(n));
    for (auto& row : a)
      for (auto& x : row) x = Rational(entry(rng));
    QVector target(m);
    for (auto& x : target) x = Rational(entry(rng));
    auto z = linsolve_q(a, target);
    if (!z) continue;
    for (int i = 0; i < m; ++i) {
      Rational acc(0);
      for (int j = 0; j < n; ++j) acc += a[i][j] * (*z)[j];
      CHECK(acc == target[i]);
    }
  }
}

TEST_CASE("scalar printing is canonical") {
  RationalFunction t = RationalFunction::t();
  CHECK(RationalFunction(Rational(-1)).to_string() == "-1");
  CHECK((t * t).to_string() == "t^2");
  CHECK((t.inverse()).to_string() == "1/t");
  CHECK((t / (t + RationalFunction(1))).to_string() == "t/(1+t)");
  CHECK((RationalFunction(2) * t).to_string() == "2t");
}
