#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "densevec/errors.hpp"

namespace densevec {

using Int = mpz_class;
using Rational = mpq_class;

/// Canonical fraction with den > 0; throws ZeroDenominatorError on den = 0.
Rational make_rational(const Int& num, const Int& den);
Rational parse_rational(const std::string& text);  // "p" or "p/q"
std::string to_string(const Rational& r);
inline int sign_of(const Rational& r) { return sgn(r); }

/// Dense univariate polynomial over Q in the formal variable t.
/// Invariant: trailing coefficient nonzero; zero is the empty sequence.
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(const Rational& constant);  // NOLINT(google-explicit-constructor)
  Polynomial(long constant);             // NOLINT(google-explicit-constructor)
  static Polynomial t();
  static Polynomial monomial(const Rational& coeff, std::size_t degree);
  static Polynomial from_coeffs(std::vector<Rational> coeffs);  // trims trailing zeros

  bool is_zero() const { return coeffs_.empty(); }
  /// Degree of the zero polynomial is -1.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<Rational>& coeffs() const { return coeffs_; }
  Rational coeff(std::size_t i) const;
  const Rational& leading() const;  // pre: nonzero
  Rational lowest() const;          // lowest nonzero coefficient; pre: nonzero

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator-() const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial scaled(const Rational& c) const;
  bool operator==(const Polynomial& o) const { return coeffs_ == o.coeffs_; }

  Rational evaluate(const Rational& x) const;

  /// Quotient/remainder over Q; throws ZeroDenominatorError when divisor is zero.
  static std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b);
  /// Monic gcd over Q[t]; gcd(0, 0) = 0.
  static Polynomial gcd(const Polynomial& a, const Polynomial& b);

  /// Sign of p(r + e) for an infinitesimal e > 0, i.e. of the first nonzero
  /// Taylor coefficient of p at r. Zero polynomial gives 0.
  int sign_right_of(const Rational& r) const;

  std::string to_string() const;  // monomials in increasing degree

 private:
  std::vector<Rational> coeffs_;
  void trim();
};

/// Canonical element of Q(t).
///
/// num and den are integer-coefficient polynomials with
/// gcd(num, den) = 1 in Q[t], gcd(content(num), content(den)) = 1 and
/// lc(den) > 0, so equal field elements are structurally identical.
class RationalFunction {
 public:
  RationalFunction() : num_(), den_(1) {}
  RationalFunction(const Rational& constant);  // NOLINT(google-explicit-constructor)
  RationalFunction(long constant);             // NOLINT(google-explicit-constructor)
  static RationalFunction t();
  /// rf_canonicalize: the unique canonical form of num/den.
  static RationalFunction canonical(const Polynomial& num, const Polynomial& den);

  const Polynomial& num() const { return num_; }
  const Polynomial& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const;
  bool is_constant() const { return den_.degree() == 0 && num_.degree() <= 0; }
  std::optional<Rational> as_constant() const;

  RationalFunction operator+(const RationalFunction& o) const;
  RationalFunction operator-(const RationalFunction& o) const;
  RationalFunction operator-() const;
  RationalFunction operator*(const RationalFunction& o) const;
  RationalFunction operator/(const RationalFunction& o) const;
  RationalFunction inverse() const;
  RationalFunction scaled(const Rational& c) const;
  bool operator==(const RationalFunction& o) const {
    return num_ == o.num_ && den_ == o.den_;
  }
  bool operator!=(const RationalFunction& o) const { return !(*this == o); }
  /// Total order usable as a map key (lexicographic on representation).
  bool operator<(const RationalFunction& o) const;

  /// Positive content of the integer numerator (pre: nonzero).
  Rational num_content() const;
  Rational den_content() const;

  std::string to_string() const;

 private:
  Polynomial num_, den_;
  RationalFunction(Polynomial num, Polynomial den, int)
      : num_(std::move(num)), den_(std::move(den)) {}
};

using QVector = std::vector<Rational>;
using QMatrix = std::vector<QVector>;  // row major

/// q_basis output: basis is the first maximal Q-linearly independent
/// subsequence of the input; matrix rows express every input over it.
struct CoordinateDecomposition {
  std::vector<RationalFunction> basis;
  QMatrix matrix;  // one row per input, |basis| columns
};

struct RfCoordinates {
  Polynomial denominator;  // monic least common denominator
  QMatrix vectors;         // one row per input; column j = coefficient of t^j / denominator
};

/// Coefficient vectors of the inputs over a monic common denominator.
/// Q-linear relations among the inputs correspond exactly to relations
/// among the vectors.
RfCoordinates rf_coordinates(const std::vector<RationalFunction>& qs);

CoordinateDecomposition q_basis(const std::vector<RationalFunction>& qs);

/// Exact solution of A z = target with zeros for free variables in column
/// order; nullopt iff the system is inconsistent.
std::optional<QVector> linsolve_q(const QMatrix& a, const QVector& target);

}  // namespace densevec
