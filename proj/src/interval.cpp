#include "specflow/interval.hpp"

#include <algorithm>
#include <cstdlib>
#include <mutex>

#include "specflow/error.hpp"

namespace specflow {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid argument";
    case ErrorKind::Precondition: return "precondition violated";
    case ErrorKind::InsufficientStructure: return "insufficient structure";
    case ErrorKind::PrecisionExhausted: return "precision exhausted";
    case ErrorKind::DigitsExhausted: return "digits exhausted";
    case ErrorKind::NoReturn: return "no return";
    case ErrorKind::AssertionFailed: return "assertion failed";
  }
  return "unknown";
}

unsigned precision_cap_bits() {
  static const unsigned cap = [] {
    if (const char* env = std::getenv("SPECFLOW_PRECISION_CAP")) {
      char* end = nullptr;
      const unsigned long v = std::strtoul(env, &end, 10);
      if (end != env && v >= 64) return static_cast<unsigned>(v);
    }
    return 1u << 16;
  }();
  return cap;
}

bool RationalInterval::narrower_than_bits(unsigned bits) const { return width() <= pow2(-static_cast<int>(bits)); }

RationalInterval operator+(const RationalInterval& a, const RationalInterval& b) { return {a.lo + b.lo, a.hi + b.hi}; }

RationalInterval operator-(const RationalInterval& a, const RationalInterval& b) { return {a.lo - b.hi, a.hi - b.lo}; }

RationalInterval operator-(const RationalInterval& a) { return {-a.hi, -a.lo}; }

RationalInterval operator*(const RationalInterval& a, const RationalInterval& b) {
  const mpq_class p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
  return {std::min({p1, p2, p3, p4}), std::max({p1, p2, p3, p4})};
}

RationalInterval operator*(const mpq_class& k, const RationalInterval& a) {
  if (sgn(k) >= 0) return {k * a.lo, k * a.hi};
  return {k * a.hi, k * a.lo};
}

RationalInterval operator/(const RationalInterval& a, const RationalInterval& b) {
  if (b.contains_zero()) throw Error(ErrorKind::Precondition, "interval division by an interval containing zero");
  const RationalInterval inv{1 / b.hi, 1 / b.lo};
  return a * inv;
}

mpz_class floor_q(const mpq_class& q) {
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

mpz_class ceil_q(const mpq_class& q) {
  mpz_class r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

mpq_class abs_q(const mpq_class& q) { return sgn(q) < 0 ? mpq_class(-q) : q; }

mpq_class pow2(int exponent) {
  mpz_class p = 1;
  mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), static_cast<mp_bitcnt_t>(exponent < 0 ? -exponent : exponent));
  if (exponent >= 0) return mpq_class(p);
  mpq_class r(mpz_class(1), p);
  r.canonicalize();
  return r;
}

RationalInterval round_outward(const RationalInterval& a, unsigned bits) {
  const mpq_class scale = pow2(static_cast<int>(bits));
  mpq_class lo(floor_q(a.lo * scale), scale.get_num());
  mpq_class hi(ceil_q(a.hi * scale), scale.get_num());
  lo.canonicalize();
  hi.canonicalize();
  return {lo, hi};
}

namespace {

// floor(sqrt(q) * 2^bits) or the matching ceiling, as an integer.
mpz_class scaled_sqrt(const mpq_class& q, unsigned bits, bool up) {
  const mpq_class scaled = q * pow2(2 * static_cast<int>(bits));
  mpz_class t = up ? ceil_q(scaled) : floor_q(scaled);
  mpz_class s;
  mpz_sqrt(s.get_mpz_t(), t.get_mpz_t());
  if (up && s * s < t) s += 1;
  return s;
}

}  // namespace

RationalInterval sqrt_enclosure(const RationalInterval& a, unsigned bits) {
  if (sgn(a.lo) < 0) throw Error(ErrorKind::Precondition, "sqrt of an interval with negative part");
  const mpz_class den = pow2(static_cast<int>(bits)).get_num();
  mpq_class lo(scaled_sqrt(a.lo, bits, false), den);
  mpq_class hi(scaled_sqrt(a.hi, bits, true), den);
  lo.canonicalize();
  hi.canonicalize();
  return {lo, hi};
}

mpq_class parse_rational(const std::string& raw) {
  std::string text;
  for (char ch : raw)
    if (ch != ' ') text.push_back(ch);
  if (text.empty()) throw Error(ErrorKind::InvalidArgument, "empty rational literal");
  try {
    const auto dot = text.find('.');
    if (dot != std::string::npos) {
      if (text.find('/') != std::string::npos) throw Error(ErrorKind::InvalidArgument, "mixed decimal/fraction: " + raw);
      std::string digits = text.substr(0, dot) + text.substr(dot + 1);
      const auto decimals = static_cast<unsigned long>(text.size() - dot - 1);
      mpz_class num(digits, 10);
      mpz_class den;
      mpz_ui_pow_ui(den.get_mpz_t(), 10, decimals);
      mpq_class q(num, den);
      q.canonicalize();
      return q;
    }
    mpq_class q(text, 10);
    if (q.get_den() == 0) throw Error(ErrorKind::InvalidArgument, "zero denominator: " + raw);
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    throw Error(ErrorKind::InvalidArgument, "malformed rational literal: " + raw);
  }
}

std::string to_string(const mpq_class& q) { return q.get_str(10); }

Fixed to_fixed(const mpq_class& value) {
  mpq_class frac = value - mpq_class(floor_q(value));
  const mpz_class scaled = floor_q(frac * pow2(128));
  mpz_class low = scaled & mpz_class("18446744073709551615");
  mpz_class high = scaled >> 64;
  const Fixed hi = static_cast<Fixed>(mpz_get_ui(high.get_mpz_t()));
  const Fixed lo = static_cast<Fixed>(mpz_get_ui(low.get_mpz_t()));
  return (hi << 64) | lo;
}

Fixed to_fixed(const RationalInterval& value) { return to_fixed(value.midpoint()); }

double fixed_to_double(Fixed x) {
  return static_cast<double>(static_cast<std::uint64_t>(x >> 64)) * 0x1p-64 +
         static_cast<double>(static_cast<std::uint64_t>(x)) * 0x1p-128;
}

}  // namespace specflow
