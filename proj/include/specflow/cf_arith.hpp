#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "specflow/interval.hpp"

namespace specflow::cf {

struct Convergent {
  mpz_class p;
  mpz_class q;
};

/// An element r + s*alpha of Q + Q*alpha.
struct QAlpha {
  mpq_class r;
  mpq_class s;

  friend QAlpha operator+(const QAlpha& a, const QAlpha& b) { return {a.r + b.r, a.s + b.s}; }
  friend QAlpha operator-(const QAlpha& a, const QAlpha& b) { return {a.r - b.r, a.s - b.s}; }
  friend bool operator==(const QAlpha& a, const QAlpha& b) { return a.r == b.r && a.s == b.s; }
};

/// Continued-fraction description of an irrational alpha = [0; a1, a2, ...] with
/// bounded partial quotients. Digits come from a finite prefix followed by an
/// optional periodic tail, or from a generator with a declared bound.
///
/// Copies share the convergent cache; extension is serialized by a mutex so
/// concurrent readers are safe.
class CFContext {
 public:
  using DigitGenerator = std::function<long(std::size_t)>;

  /// prefix = (a1, ..., ak), period = repeating tail (may be empty: finite supply).
  static CFContext periodic(std::vector<long> prefix, std::vector<long> period);
  /// Digits a_n = generator(n) for n >= 1; every digit must be <= bound.
  static CFContext from_generator(DigitGenerator generator, long bound);
  /// "golden" = [0;1,1,...], "sqrt2m1" = [0;2,2,...].
  static CFContext preset(std::string_view name);

  /// Partial quotient a_n, n >= 1.
  long digit(std::size_t n) const;
  Convergent convergent(std::size_t n) const;
  std::vector<Convergent> convergents(std::size_t n) const;
  const mpz_class& q(std::size_t n) const;
  const mpz_class& p(std::size_t n) const;
  /// Number of convergents currently cached.
  std::size_t cached() const;

  /// sup a_n over the declared digit range.
  long quotient_bound() const;
  /// C = sup a_n + 1.
  long big_c() const { return quotient_bound() + 1; }

  /// Interval between two consecutive convergents, of width <= 2^-bits.
  RationalInterval alpha_enclosure(unsigned bits) const;
  Fixed alpha_fixed() const;
  double alpha_double() const;
  std::string describe() const;

 private:
  struct State;
  explicit CFContext(std::shared_ptr<State> state) : state_(std::move(state)) {}
  void extend_to(std::size_t n) const;

  std::shared_ptr<State> state_;
};

/// Exact sign of r + s*alpha. Zero only for r = s = 0.
int sign_linear(const CFContext& ctx, const mpq_class& r, const mpq_class& s);
inline int sign_linear(const CFContext& ctx, const QAlpha& x) { return sign_linear(ctx, x.r, x.s); }

/// Certified enclosure of r + s*alpha of width <= 2^-bits.
RationalInterval enclose_linear(const CFContext& ctx, const mpq_class& r, const mpq_class& s, unsigned bits);

/// Certified enclosure of ||r + s*alpha|| (distance to nearest integer); exact when s = 0.
RationalInterval dist_to_int(const CFContext& ctx, const mpq_class& r, const mpq_class& s, unsigned bits = 64);

/// floor(r + s*alpha), exact.
mpz_class floor_linear(const CFContext& ctx, const mpq_class& r, const mpq_class& s);

/// Representative of x modulo 1 in [0, 1).
QAlpha circle_normalize(const CFContext& ctx, const QAlpha& x);

struct BpqCertificate {
  std::string family;  // "distance" (||j alpha|| * j) or "ratio" (q_n / q_{n+1})
  long index;          // j or n
  mpq_class bound;     // certified lower bound of the constrained quantity
};

struct BpqConstant {
  mpq_class c;
  mpq_class distance_bound;  // certified lower bound of min_j j*||j alpha||
  mpq_class ratio_bound;     // min_n q_n / q_{n+1} over the checked n
  long j_max = 0;
  std::size_t n_checked = 0;
  std::vector<BpqCertificate> certificates;
};

/// Largest grid rational 0 < c < 1 with ||j alpha|| >= c/|j| for 0 < |j| <= j_max and
/// q_{n+1}/q_n <= 1/c for every convergent with q_n <= j_max. Grid step 2^-12,
/// refined until c > 0.
BpqConstant bpq_constant(const CFContext& ctx, long j_max);

struct GapStats {
  QAlpha min_gap;
  QAlpha max_gap;
  double min_gap_value = 0;
  double max_gap_value = 0;
  std::size_t distinct_lengths = 0;
  std::size_t point_count = 0;
};

/// Extreme gaps of the circle partition by {0, -alpha, ..., -(m-1)alpha}, plus
/// {beta - j alpha} when beta is given. Coincident points are merged.
GapStats orbit_partition_gaps(const CFContext& ctx, long m, const std::optional<QAlpha>& beta = std::nullopt);

}  // namespace specflow::cf
