#include "densevec/qfield.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace densevec {

Rational make_rational(const Int& num, const Int& den) {
  if (den == 0) throw ZeroDenominatorError();
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  if (slash == std::string::npos) return make_rational(Int(text), 1);
  return make_rational(Int(text.substr(0, slash)), Int(text.substr(slash + 1)));
}

std::string to_string(const Rational& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

// ---------------------------------------------------------------------------
// Polynomial

Polynomial::Polynomial(const Rational& constant) {
  if (constant != 0) coeffs_.push_back(constant);
}

Polynomial::Polynomial(long constant) : Polynomial(Rational(constant)) {}

Polynomial Polynomial::t() { return monomial(1, 1); }

Polynomial Polynomial::monomial(const Rational& coeff, std::size_t degree) {
  Polynomial p;
  if (coeff != 0) {
    p.coeffs_.assign(degree + 1, Rational(0));
    p.coeffs_.back() = coeff;
  }
  return p;
}

Polynomial Polynomial::from_coeffs(std::vector<Rational> coeffs) {
  Polynomial p;
  p.coeffs_ = std::move(coeffs);
  p.trim();
  return p;
}

void Polynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Rational Polynomial::coeff(std::size_t i) const {
  return i < coeffs_.size() ? coeffs_[i] : Rational(0);
}

const Rational& Polynomial::leading() const {
  assert(!coeffs_.empty());
  return coeffs_.back();
}

Rational Polynomial::lowest() const {
  assert(!coeffs_.empty());
  for (const auto& c : coeffs_)
    if (c != 0) return c;
  return coeffs_.back();  // unreachable under the invariant
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  std::vector<Rational> out(std::max(coeffs_.size(), o.coeffs_.size()), Rational(0));
  for (std::size_t i = 0; i < coeffs_.size(); ++i) out[i] += coeffs_[i];
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) out[i] += o.coeffs_[i];
  return from_coeffs(std::move(out));
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + (-o); }

Polynomial Polynomial::operator-() const {
  Polynomial p(*this);
  for (auto& c : p.coeffs_) c = -c;
  return p;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (is_zero() || o.is_zero()) return Polynomial();
  std::vector<Rational> out(coeffs_.size() + o.coeffs_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    for (std::size_t j = 0; j < o.coeffs_.size(); ++j) out[i + j] += coeffs_[i] * o.coeffs_[j];
  return from_coeffs(std::move(out));
}

Polynomial Polynomial::scaled(const Rational& c) const {
  if (c == 0) return Polynomial();
  Polynomial p(*this);
  for (auto& x : p.coeffs_) x *= c;
  return p;
}

Rational Polynomial::evaluate(const Rational& x) const {
  Rational acc(0);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::pair<Polynomial, Polynomial> Polynomial::divmod(const Polynomial& a, const Polynomial& b) {
  if (b.is_zero()) throw ZeroDenominatorError("polynomial division by zero");
  Polynomial rem = a;
  std::vector<Rational> quot;
  if (a.degree() >= b.degree()) quot.assign(a.degree() - b.degree() + 1, Rational(0));
  while (!rem.is_zero() && rem.degree() >= b.degree()) {
    std::size_t shift = rem.degree() - b.degree();
    Rational factor = rem.leading() / b.leading();
    quot[shift] = factor;
    rem = rem - b.scaled(factor) * monomial(1, shift);
  }
  return {from_coeffs(std::move(quot)), rem};
}

Polynomial Polynomial::gcd(const Polynomial& a, const Polynomial& b) {
  Polynomial x = a, y = b;
  while (!y.is_zero()) {
    Polynomial r = divmod(x, y).second;
    x = y;
    y = r;
  }
  if (x.is_zero()) return x;
  return x.scaled(Rational(1) / x.leading());  // monic
}

int Polynomial::sign_right_of(const Rational& r) const {
  // Iterated synthetic division: p(t) = (t - r) q(t) + p(r).
  Polynomial p = *this;
  while (!p.is_zero()) {
    Rational value = p.evaluate(r);
    if (value != 0) return sign_of(value);
    p = divmod(p, from_coeffs({-r, Rational(1)})).first;
  }
  return 0;
}

namespace {

std::string monomial_string(const Rational& c, std::size_t deg, bool leading) {
  std::string out;
  Rational a = abs(c);
  bool negative = c < 0;
  if (leading) {
    if (negative) out += "-";
  } else {
    out += negative ? "-" : "+";
  }
  if (deg == 0) {
    out += to_string(a);
  } else {
    if (a != 1) out += to_string(a);
    out += "t";
    if (deg >= 2) out += "^" + std::to_string(deg);
  }
  return out;
}

}  // namespace

std::string Polynomial::to_string() const {
  if (is_zero()) return "0";
  std::string out;
  bool leading = true;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0) continue;
    out += monomial_string(coeffs_[i], i, leading);
    leading = false;
  }
  return out;
}

// ---------------------------------------------------------------------------
// RationalFunction

namespace {

// lcm of the coefficient denominators.
Int coeff_denominator_lcm(const Polynomial& p) {
  Int l(1);
  for (const auto& c : p.coeffs()) l = lcm(l, c.get_den());
  return l;
}

// gcd of the (integer) coefficient numerators; 0 for the zero polynomial.
Int coeff_content(const Polynomial& p) {
  Int g(0);
  for (const auto& c : p.coeffs()) g = gcd(g, c.get_num());
  return g;
}

}  // namespace

RationalFunction::RationalFunction(const Rational& constant)
    : num_(Polynomial(Rational(constant.get_num()))),
      den_(Polynomial(Rational(constant.get_den()))) {}

RationalFunction::RationalFunction(long constant) : RationalFunction(Rational(constant)) {}

RationalFunction RationalFunction::t() { return canonical(Polynomial::t(), 1); }

RationalFunction RationalFunction::canonical(const Polynomial& num, const Polynomial& den) {
  if (den.is_zero()) throw ZeroDenominatorError("rational function with zero denominator");
  if (num.is_zero()) return RationalFunction();
  Polynomial n = num, d = den;
  Polynomial g = Polynomial::gcd(n, d);
  if (g.degree() > 0) {
    n = Polynomial::divmod(n, g).first;
    d = Polynomial::divmod(d, g).first;
  }
  // Scale the pair into integer coefficients with coprime contents.
  Int scale = lcm(coeff_denominator_lcm(n), coeff_denominator_lcm(d));
  n = n.scaled(Rational(scale));
  d = d.scaled(Rational(scale));
  Int shared = gcd(coeff_content(n), coeff_content(d));
  if (shared > 1) {
    Rational inv = make_rational(1, shared);
    n = n.scaled(inv);
    d = d.scaled(inv);
  }
  if (d.leading() < 0) {
    n = -n;
    d = -d;
  }
  return RationalFunction(std::move(n), std::move(d), 0);
}

bool RationalFunction::is_one() const {
  return num_.degree() == 0 && den_.degree() == 0 && num_.coeff(0) == den_.coeff(0);
}

std::optional<Rational> RationalFunction::as_constant() const {
  if (!is_constant()) return std::nullopt;
  if (is_zero()) return Rational(0);
  return num_.coeff(0) / den_.coeff(0);
}

RationalFunction RationalFunction::operator+(const RationalFunction& o) const {
  return canonical(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RationalFunction RationalFunction::operator-(const RationalFunction& o) const {
  return *this + (-o);
}

RationalFunction RationalFunction::operator-() const {
  if (is_zero()) return *this;
  return RationalFunction(-num_, den_, 0);
}

RationalFunction RationalFunction::operator*(const RationalFunction& o) const {
  return canonical(num_ * o.num_, den_ * o.den_);
}

RationalFunction RationalFunction::operator/(const RationalFunction& o) const {
  return *this * o.inverse();
}

RationalFunction RationalFunction::inverse() const {
  if (is_zero()) throw ZeroDenominatorError("inverse of zero rational function");
  return canonical(den_, num_);
}

RationalFunction RationalFunction::scaled(const Rational& c) const {
  return *this * RationalFunction(c);
}

bool RationalFunction::operator<(const RationalFunction& o) const {
  auto cmp_poly = [](const Polynomial& a, const Polynomial& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree() ? -1 : 1;
    for (int i = 0; i <= a.degree(); ++i) {
      int c = cmp(a.coeffs()[i], b.coeffs()[i]);
      if (c != 0) return c;
    }
    return 0;
  };
  int c = cmp_poly(num_, o.num_);
  if (c != 0) return c < 0;
  return cmp_poly(den_, o.den_) < 0;
}

Rational RationalFunction::num_content() const {
  assert(!is_zero());
  return Rational(abs(coeff_content(num_)));
}

Rational RationalFunction::den_content() const { return Rational(coeff_content(den_)); }

namespace {

// Atomic in fraction position: a positive integer or a unit-coefficient power of t.
bool atomic_in_fraction(const Polynomial& p) {
  int nonzero = 0;
  for (const auto& c : p.coeffs())
    if (c != 0) ++nonzero;
  if (nonzero != 1) return false;
  if (p.degree() == 0) return p.leading() > 0;
  return p.leading() == 1;
}

std::string wrap_fraction_part(const Polynomial& p) {
  std::string s = p.to_string();
  return atomic_in_fraction(p) ? s : "(" + s + ")";
}

}  // namespace

std::string RationalFunction::to_string() const {
  if (den_.degree() == 0 && den_.coeff(0) == 1) return num_.to_string();
  return wrap_fraction_part(num_) + "/" + wrap_fraction_part(den_);
}

// ---------------------------------------------------------------------------
// Rational linear algebra

RfCoordinates rf_coordinates(const std::vector<RationalFunction>& qs) {
  RfCoordinates out;
  out.denominator = Polynomial(1);
  for (const auto& q : qs) {
    if (q.is_zero()) continue;
    Polynomial g = Polynomial::gcd(out.denominator, q.den());
    out.denominator = out.denominator * Polynomial::divmod(q.den(), g).first;
  }
  if (!out.denominator.is_zero())
    out.denominator = out.denominator.scaled(Rational(1) / out.denominator.leading());
  std::size_t width = 1;
  std::vector<Polynomial> nums;
  nums.reserve(qs.size());
  for (const auto& q : qs) {
    auto [quot, rem] = Polynomial::divmod(out.denominator, q.den());
    assert(rem.is_zero());
    Polynomial n = q.num() * quot;
    width = std::max(width, static_cast<std::size_t>(n.degree() + 1));
    nums.push_back(std::move(n));
  }
  for (const auto& n : nums) {
    QVector row(width, Rational(0));
    for (int i = 0; i <= n.degree(); ++i) row[i] = n.coeffs()[i];
    out.vectors.push_back(std::move(row));
  }
  return out;
}

namespace {

// Incremental row space in reduced echelon form, used by q_basis.
class RowSpace {
 public:
  // Returns the coordinates of v over the accepted rows if dependent,
  // nullopt if v is independent from everything accepted so far.
  std::optional<QVector> coordinates(const QVector& v) const {
    QVector residual = v;
    QVector coords(accepted_, Rational(0));
    for (std::size_t k = 0; k < echelon_.size(); ++k) {
      const auto& row = echelon_[k];
      Rational factor = residual[pivots_[k]];
      if (factor == 0) continue;
      for (std::size_t j = 0; j < residual.size(); ++j) residual[j] -= factor * row.first[j];
      for (std::size_t j = 0; j < coords.size(); ++j) coords[j] += factor * row.second[j];
    }
    for (const auto& x : residual)
      if (x != 0) return std::nullopt;
    return coords;
  }

  // Accepts v as a new basis member.
  void accept(const QVector& v) {
    QVector residual = v;
    QVector expr(accepted_ + 1, Rational(0));
    expr[accepted_] = 1;
    for (std::size_t k = 0; k < echelon_.size(); ++k) {
      echelon_[k].second.push_back(0);
      Rational factor = residual[pivots_[k]];
      if (factor == 0) continue;
      for (std::size_t j = 0; j < residual.size(); ++j)
        residual[j] -= factor * echelon_[k].first[j];
      for (std::size_t j = 0; j < expr.size(); ++j) expr[j] -= factor * echelon_[k].second[j];
    }
    std::size_t pivot = 0;
    while (pivot < residual.size() && residual[pivot] == 0) ++pivot;
    assert(pivot < residual.size());
    Rational lead = residual[pivot];
    for (auto& x : residual) x /= lead;
    for (auto& x : expr) x /= lead;
    // expr now expresses the normalized residual over accepted members; invert
    // back: basis member = residual combination, so record residual -> expr.
    pivots_.push_back(pivot);
    echelon_.emplace_back(std::move(residual), std::move(expr));
    ++accepted_;
  }

  std::size_t size() const { return accepted_; }

 private:
  // echelon_[k]: (row vector, its coordinates over the accepted basis members)
  std::vector<std::pair<QVector, QVector>> echelon_;
  std::vector<std::size_t> pivots_;
  std::size_t accepted_ = 0;
};

}  // namespace

CoordinateDecomposition q_basis(const std::vector<RationalFunction>& qs) {
  CoordinateDecomposition out;
  RfCoordinates coords = rf_coordinates(qs);
  RowSpace space;
  std::vector<QVector> rows;  // coordinates of every input over the basis
  for (std::size_t i = 0; i < qs.size(); ++i) {
    bool zero = qs[i].is_zero();
    std::optional<QVector> c = zero ? std::make_optional(QVector(space.size(), Rational(0)))
                                    : space.coordinates(coords.vectors[i]);
    if (c) {
      rows.push_back(std::move(*c));
    } else {
      space.accept(coords.vectors[i]);
      out.basis.push_back(qs[i]);
      QVector row(space.size(), Rational(0));
      row.back() = 1;
      rows.push_back(std::move(row));
    }
  }
  for (auto& row : rows) row.resize(space.size(), Rational(0));
  out.matrix = std::move(rows);
  return out;
}

std::optional<QVector> linsolve_q(const QMatrix& a, const QVector& target) {
  const std::size_t m = a.size();
  if (target.size() != m) throw DimensionMismatchError();
  std::size_t n = 0;
  for (const auto& row : a) n = std::max(n, row.size());
  for (const auto& row : a)
    if (row.size() != n && !row.empty()) throw DimensionMismatchError("ragged matrix");

  QMatrix work(m, QVector(n + 1, Rational(0)));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < a[i].size(); ++j) work[i][j] = a[i][j];
    work[i][n] = target[i];
  }

  std::vector<std::size_t> pivot_col;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < n && rank < m; ++col) {
    std::size_t sel = rank;
    while (sel < m && work[sel][col] == 0) ++sel;
    if (sel == m) continue;
    std::swap(work[sel], work[rank]);
    Rational lead = work[rank][col];
    for (auto& x : work[rank]) x /= lead;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == rank || work[i][col] == 0) continue;
      Rational factor = work[i][col];
      for (std::size_t j = col; j <= n; ++j) work[i][j] -= factor * work[rank][j];
    }
    pivot_col.push_back(col);
    ++rank;
  }
  for (std::size_t i = rank; i < m; ++i)
    if (work[i][n] != 0) return std::nullopt;  // 0 = c with c != 0

  QVector z(n, Rational(0));  // free variables stay 0
  for (std::size_t k = 0; k < rank; ++k) z[pivot_col[k]] = work[k][n];
  return z;
}

}  // namespace densevec
