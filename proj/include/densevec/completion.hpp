#pragma once

#include <cstdint>
#include <string>

#include "densevec/qfield.hpp"

namespace densevec {

/// A computable completion of the type of 1: a total sign on Q(t) that is
/// Q-linear-consistent (zero exactly on 0) and order-compatible. Every kind is
/// the germ of q at a one-sided limit, so the induced positive cone is closed
/// under addition and positive rational scaling.
class Completion {
 public:
  enum class Kind { GermPosInf, GermZeroPlus, SeededGeneric };

  static Completion germ_pos_inf() { return Completion(Kind::GermPosInf, 0); }
  static Completion germ_zero_plus() { return Completion(Kind::GermZeroPlus, 0); }
  /// Germ at r + 0 for a seed-derived rational r.
  static Completion seeded(std::uint64_t seed);

  Kind kind() const { return kind_; }
  std::uint64_t seed() const { return seed_; }
  const Rational& base_point() const { return base_; }

  /// -1, 0 or +1; zero iff q = 0.
  int sign(const RationalFunction& q) const;

  std::string to_string() const;
  static Completion parse(const std::string& text);  // throws ParseError

  bool operator==(const Completion& o) const {
    return kind_ == o.kind_ && seed_ == o.seed_;
  }

 private:
  Completion(Kind kind, std::uint64_t seed) : kind_(kind), seed_(seed) {}
  Kind kind_;
  std::uint64_t seed_;
  Rational base_;
};

int completion_sign(const Completion& c, const RationalFunction& q);

}  // namespace densevec
