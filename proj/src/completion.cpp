#include "densevec/completion.hpp"

#include "densevec/errors.hpp"

namespace densevec {

namespace {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

Completion Completion::seeded(std::uint64_t seed) {
  Completion c(Kind::SeededGeneric, seed);
  std::uint64_t a = mix64(seed);
  std::uint64_t b = mix64(seed ^ 0xa5a5a5a5a5a5a5a5ULL);
  long num = static_cast<long>(a % 4097) - 2048;
  long den = static_cast<long>(b % 64) + 1;
  c.base_ = make_rational(num, den);
  return c;
}

int Completion::sign(const RationalFunction& q) const {
  if (q.is_zero()) return 0;
  switch (kind_) {
    case Kind::GermPosInf:
      // Denominators are canonical with positive leading coefficient.
      return sign_of(q.num().leading()) * sign_of(q.den().leading());
    case Kind::GermZeroPlus:
      return q.num().sign_right_of(0) * q.den().sign_right_of(0);
    case Kind::SeededGeneric:
      return q.num().sign_right_of(base_) * q.den().sign_right_of(base_);
  }
  return 0;
}

std::string Completion::to_string() const {
  switch (kind_) {
    case Kind::GermPosInf:
      return "germ-pos-inf";
    case Kind::GermZeroPlus:
      return "germ-zero";
    case Kind::SeededGeneric:
      return "seeded:" + std::to_string(seed_);
  }
  return "";
}

Completion Completion::parse(const std::string& text) {
  if (text == "germ-pos-inf") return germ_pos_inf();
  if (text == "germ-zero" || text == "germ-zero-plus") return germ_zero_plus();
  if (text.rfind("seeded:", 0) == 0) {
    try {
      return seeded(std::stoull(text.substr(7)));
    } catch (const std::exception&) {
      throw ParseError("bad seed in completion: " + text, 1, 1);
    }
  }
  throw ParseError("unknown completion: " + text, 1, 1);
}

int completion_sign(const Completion& c, const RationalFunction& q) { return c.sign(q); }

}  // namespace densevec
