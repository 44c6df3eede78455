#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace specflow {

/// Closed interval with exact rational endpoints. All arithmetic rounds outward
/// only where the caller asks for it (round_outward), so containment is exact.
struct RationalInterval {
  mpq_class lo;
  mpq_class hi;

  static RationalInterval point(const mpq_class& q) { return {q, q}; }

  mpq_class width() const { return hi - lo; }
  mpq_class midpoint() const { return (lo + hi) / 2; }
  bool contains(const mpq_class& q) const { return lo <= q && q <= hi; }
  bool contains_zero() const { return sgn(lo) <= 0 && sgn(hi) >= 0; }
  /// True when the interval lies in (2^-bits)-width.
  bool narrower_than_bits(unsigned bits) const;
};

RationalInterval operator+(const RationalInterval& a, const RationalInterval& b);
RationalInterval operator-(const RationalInterval& a, const RationalInterval& b);
RationalInterval operator-(const RationalInterval& a);
RationalInterval operator*(const RationalInterval& a, const RationalInterval& b);
RationalInterval operator*(const mpq_class& k, const RationalInterval& a);
/// Throws Error(Precondition) if b contains zero.
RationalInterval operator/(const RationalInterval& a, const RationalInterval& b);

/// Widen to dyadic endpoints with denominator 2^bits (keeps numbers small).
RationalInterval round_outward(const RationalInterval& a, unsigned bits);

/// Enclosure of sqrt over a nonnegative interval, endpoints dyadic at `bits`.
RationalInterval sqrt_enclosure(const RationalInterval& a, unsigned bits);

mpz_class floor_q(const mpq_class& q);
mpz_class ceil_q(const mpq_class& q);
mpq_class abs_q(const mpq_class& q);
mpq_class pow2(int exponent);

/// Parses "p/q", "p", or a finite decimal like "-0.125" into an exact rational.
mpq_class parse_rational(const std::string& text);
std::string to_string(const mpq_class& q);

// Fixed-point circle: a point x in [0,1) stored as floor(x * 2^128), addition
// wraps modulo 2^128 which is addition on R/Z.
using Fixed = unsigned __int128;

/// Fixed-point image of the fractional part of the interval's midpoint.
Fixed to_fixed(const RationalInterval& value);
Fixed to_fixed(const mpq_class& value);
double fixed_to_double(Fixed x);
/// Guard band below which fixed-point comparisons defer to exact arithmetic.
inline constexpr Fixed kFixedGuard = Fixed(1) << 48;  // 2^-80 of the circle

}  // namespace specflow
