#include <cassert>

#include "densevec/model.hpp"

namespace densevec {

GenericValue GenericValue::of_rational(const Rational& r) {
  GenericValue v;
  v.one_part = RationalFunction(r);
  return v;
}

GenericValue GenericValue::eps_unit(std::uint64_t index) {
  GenericValue v;
  v.eps.emplace(index, Rational(1));
  return v;
}

Rational GenericValue::rational_part() const {
  auto c = one_part.as_constant();
  assert(c && "rational_part on a non-constant 1-scale value");
  return *c;
}

GenericValue GenericValue::plus(const GenericValue& o) const {
  GenericValue out = *this;
  out.one_part = out.one_part + o.one_part;
  for (const auto& [idx, c] : o.eps) {
    auto [it, inserted] = out.eps.emplace(idx, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) out.eps.erase(it);
    }
  }
  return out;
}

GenericValue GenericValue::negated() const {
  GenericValue out;
  out.one_part = -one_part;
  for (const auto& [idx, c] : eps) out.eps.emplace(idx, -c);
  return out;
}

GenericValue GenericValue::scaled(const Rational& c) const {
  GenericValue out;
  if (c == 0) return out;
  out.one_part = one_part.scaled(c);
  for (const auto& [idx, k] : eps) out.eps.emplace(idx, k * c);
  return out;
}

int GenericValue::sign(const Completion& c) const {
  int s = c.sign(one_part);
  if (s != 0) return s;
  // Ascending index order; the first entry is the dominating infinitesimal.
  for (const auto& [idx, k] : eps)
    if (k != 0) return sign_of(k);
  return 0;
}

std::string GenericValue::to_string() const {
  std::string out = one_part.to_string();
  for (const auto& [idx, k] : eps) {
    out += k < 0 ? " - " : " + ";
    Rational a = abs(k);
    if (a != 1) out += densevec::to_string(a) + "*";
    out += "eps(" + std::to_string(idx) + ")";
  }
  return out;
}

}  // namespace densevec
