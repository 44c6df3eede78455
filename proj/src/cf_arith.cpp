#include "specflow/cf_arith.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <sstream>

#include "specflow/error.hpp"

namespace specflow::cf {

struct CFContext::State {
  std::vector<long> prefix;
  std::vector<long> period;
  DigitGenerator generator;
  long bound = 0;
  std::string name;

  mutable std::mutex mutex;
  mutable std::deque<Convergent> cache;  // deque: references survive extension
  mutable std::once_flag fixed_once;
  mutable Fixed fixed = 0;
  mutable double as_double = 0;
};

CFContext CFContext::periodic(std::vector<long> prefix, std::vector<long> period) {
  auto state = std::make_shared<State>();
  for (long a : prefix)
    if (a < 1) throw Error(ErrorKind::InvalidArgument, "partial quotients must be >= 1");
  for (long a : period)
    if (a < 1) throw Error(ErrorKind::InvalidArgument, "partial quotients must be >= 1");
  if (prefix.empty() && period.empty()) throw Error(ErrorKind::InvalidArgument, "empty digit sequence");
  long bound = 0;
  for (long a : prefix) bound = std::max(bound, a);
  for (long a : period) bound = std::max(bound, a);
  state->prefix = std::move(prefix);
  state->period = std::move(period);
  state->bound = bound;
  return CFContext(std::move(state));
}

CFContext CFContext::from_generator(DigitGenerator generator, long bound) {
  if (!generator) throw Error(ErrorKind::InvalidArgument, "null digit generator");
  if (bound < 1) throw Error(ErrorKind::InvalidArgument, "declared quotient bound must be >= 1");
  auto state = std::make_shared<State>();
  state->generator = std::move(generator);
  state->bound = bound;
  return CFContext(std::move(state));
}

CFContext CFContext::preset(std::string_view name) {
  CFContext ctx = [&] {
    if (name == "golden") return periodic({}, {1});
    if (name == "sqrt2m1") return periodic({}, {2});
    throw Error(ErrorKind::InvalidArgument, "unknown alpha preset: " + std::string(name));
  }();
  ctx.state_->name = std::string(name);
  return ctx;
}

long CFContext::digit(std::size_t n) const {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "partial quotients are indexed from 1");
  const State& s = *state_;
  if (n <= s.prefix.size()) return s.prefix[n - 1];
  if (!s.period.empty()) return s.period[(n - 1 - s.prefix.size()) % s.period.size()];
  if (s.generator) {
    const long a = s.generator(n);
    if (a < 1 || a > s.bound)
      throw Error(ErrorKind::InvalidArgument, "generated digit a_" + std::to_string(n) + " violates declared bound");
    return a;
  }
  throw Error(ErrorKind::DigitsExhausted, "digit supply exhausted at index " + std::to_string(n));
}

void CFContext::extend_to(std::size_t n) const {
  std::lock_guard lock(state_->mutex);
  auto& cache = state_->cache;
  if (cache.empty()) cache.push_back({0, 1});
  while (cache.size() <= n) {
    const std::size_t k = cache.size();
    const long a = digit(k);
    if (k == 1) {
      cache.push_back({1, a});
    } else {
      const Convergent& c1 = cache[k - 1];
      const Convergent& c2 = cache[k - 2];
      cache.push_back({a * c1.p + c2.p, a * c1.q + c2.q});
    }
  }
}

Convergent CFContext::convergent(std::size_t n) const {
  extend_to(n);
  std::lock_guard lock(state_->mutex);
  return state_->cache[n];
}

std::vector<Convergent> CFContext::convergents(std::size_t n) const {
  extend_to(n);
  std::lock_guard lock(state_->mutex);
  return {state_->cache.begin(), state_->cache.begin() + static_cast<std::ptrdiff_t>(n + 1)};
}

const mpz_class& CFContext::q(std::size_t n) const {
  extend_to(n);
  std::lock_guard lock(state_->mutex);
  return state_->cache[n].q;
}

const mpz_class& CFContext::p(std::size_t n) const {
  extend_to(n);
  std::lock_guard lock(state_->mutex);
  return state_->cache[n].p;
}

std::size_t CFContext::cached() const {
  std::lock_guard lock(state_->mutex);
  return state_->cache.size();
}

long CFContext::quotient_bound() const { return state_->bound; }

RationalInterval CFContext::alpha_enclosure(unsigned bits) const {
  if (bits > precision_cap_bits())
    throw Error(ErrorKind::PrecisionExhausted, "requested " + std::to_string(bits) + " bits exceeds cap");
  const mpz_class target = pow2(static_cast<int>(bits)).get_num();
  for (std::size_t n = 0;; ++n) {
    const Convergent a = convergent(n);
    const Convergent b = convergent(n + 1);
    if (a.q * b.q >= target) {
      mpq_class x(a.p, a.q), y(b.p, b.q);
      x.canonicalize();
      y.canonicalize();
      return x < y ? RationalInterval{x, y} : RationalInterval{y, x};
    }
  }
}

Fixed CFContext::alpha_fixed() const {
  std::call_once(state_->fixed_once, [this] {
    state_->fixed = to_fixed(alpha_enclosure(160));
    state_->as_double = alpha_enclosure(80).midpoint().get_d();
  });
  return state_->fixed;
}

double CFContext::alpha_double() const {
  alpha_fixed();
  return state_->as_double;
}

std::string CFContext::describe() const {
  if (!state_->name.empty()) return state_->name;
  std::ostringstream out;
  out << "[0;";
  for (std::size_t i = 0; i < state_->prefix.size(); ++i) out << (i ? "," : "") << state_->prefix[i];
  if (!state_->period.empty()) {
    out << (state_->prefix.empty() ? "" : ",") << "(";
    for (std::size_t i = 0; i < state_->period.size(); ++i) out << (i ? "," : "") << state_->period[i];
    out << ")*";
  } else if (state_->generator) {
    out << "generated<=" << state_->bound;
  }
  out << "]";
  return out.str();
}

RationalInterval enclose_linear(const CFContext& ctx, const mpq_class& r, const mpq_class& s, unsigned bits) {
  if (s == 0) return RationalInterval::point(r);
  const auto extra = static_cast<unsigned>(mpz_sizeinbase(ceil_q(abs_q(s)).get_mpz_t(), 2)) + 1;
  return RationalInterval::point(r) + s * ctx.alpha_enclosure(bits + extra);
}

int sign_linear(const CFContext& ctx, const mpq_class& r, const mpq_class& s) {
  if (s == 0) return sgn(r);
  for (unsigned bits = 64; bits <= precision_cap_bits(); bits *= 2) {
    const RationalInterval v = enclose_linear(ctx, r, s, bits);
    if (sgn(v.lo) > 0) return 1;
    if (sgn(v.hi) < 0) return -1;
  }
  throw Error(ErrorKind::PrecisionExhausted,
              "sign of r + s*alpha unresolved within " + std::to_string(precision_cap_bits()) + " bits");
}

mpz_class floor_linear(const CFContext& ctx, const mpq_class& r, const mpq_class& s) {
  if (s == 0) return floor_q(r);
  const RationalInterval v = enclose_linear(ctx, r, s, 64);
  mpz_class k = floor_q(v.lo);
  // r + s alpha is irrational, so the candidate is checked against both neighbours.
  while (sign_linear(ctx, r - mpq_class(k + 1), s) >= 0) k += 1;
  while (sign_linear(ctx, r - mpq_class(k), s) < 0) k -= 1;
  return k;
}

QAlpha circle_normalize(const CFContext& ctx, const QAlpha& x) {
  return {x.r - mpq_class(floor_linear(ctx, x.r, x.s)), x.s};
}

namespace {

// ||v|| over all v in the interval.
RationalInterval distance_range(const RationalInterval& v) {
  auto dist = [](const mpq_class& x) {
    const mpq_class f = x - mpq_class(floor_q(x));
    return f <= mpq_class(1, 2) ? f : mpq_class(1 - f);
  };
  const mpz_class k_lo = floor_q(v.lo);
  const mpz_class k_hi = floor_q(v.hi);
  const mpq_class d_lo = dist(v.lo), d_hi = dist(v.hi);
  mpq_class lo = std::min(d_lo, d_hi);
  mpq_class hi = std::max(d_lo, d_hi);
  // an integer inside forces 0; a half-integer inside forces 1/2
  if (k_lo != k_hi && mpq_class(k_hi) > v.lo) lo = 0;
  const mpz_class h_lo = floor_q(v.lo - mpq_class(1, 2));
  const mpz_class h_hi = floor_q(v.hi - mpq_class(1, 2));
  if (h_lo != h_hi) hi = mpq_class(1, 2);
  return {lo, hi};
}

}  // namespace

RationalInterval dist_to_int(const CFContext& ctx, const mpq_class& r, const mpq_class& s, unsigned bits) {
  if (s == 0) {
    const mpq_class f = r - mpq_class(floor_q(r));
    const mpq_class d = f <= mpq_class(1, 2) ? f : mpq_class(1 - f);
    return RationalInterval::point(d);
  }
  return distance_range(enclose_linear(ctx, r, s, bits));
}

BpqConstant bpq_constant(const CFContext& ctx, long j_max) {
  if (j_max < 1) throw Error(ErrorKind::InvalidArgument, "bpq_constant: j_max must be >= 1");
  BpqConstant out;
  out.j_max = j_max;

  const auto jbits = static_cast<unsigned>(mpz_sizeinbase(mpz_class(j_max).get_mpz_t(), 2));
  const RationalInterval alpha = ctx.alpha_enclosure(96 + jbits);

  bool first = true;
  long best_j = 1;
  for (long j = 1; j <= j_max; ++j) {
    const RationalInterval d = distance_range(mpq_class(j) * alpha);
    const mpq_class scaled = d.lo * j;
    if (first || scaled < out.distance_bound) {
      out.distance_bound = scaled;
      best_j = j;
      first = false;
    }
  }
  out.certificates.push_back({"distance", best_j, out.distance_bound});

  // q_{n+1}/q_n <= 1/c for the convergents in range
  out.ratio_bound = 1;
  for (std::size_t n = 0;; ++n) {
    const mpz_class qn = ctx.q(n);
    const mpz_class qn1 = ctx.q(n + 1);
    mpq_class ratio(qn, qn1);
    ratio.canonicalize();
    out.certificates.push_back({"ratio", static_cast<long>(n), ratio});
    out.ratio_bound = std::min(out.ratio_bound, ratio);
    out.n_checked = n + 1;
    if (qn > j_max) break;
  }

  const mpq_class limit = std::min(out.distance_bound, out.ratio_bound);
  for (int grid_bits = 12; grid_bits <= 64; grid_bits += 4) {
    const mpq_class step = pow2(-grid_bits);
    mpq_class c = mpq_class(floor_q(limit / step)) * step;
    if (c >= 1) c = 1 - step;
    if (sgn(c) > 0) {
      c.canonicalize();
      out.c = c;
      return out;
    }
  }
  throw Error(ErrorKind::Precondition, "bpq_constant: no positive grid constant (alpha not badly approximable in range)");
}

GapStats orbit_partition_gaps(const CFContext& ctx, long m, const std::optional<QAlpha>& beta) {
  if (m < 1) throw Error(ErrorKind::InvalidArgument, "orbit_partition_gaps: m must be >= 1");
  struct Point {
    QAlpha value;  // normalized into [0, 1)
    Fixed key;
  };
  std::vector<Point> points;
  points.reserve(static_cast<std::size_t>(beta ? 2 * m : m));
  const RationalInterval alpha = ctx.alpha_enclosure(192);
  auto add = [&](const QAlpha& raw) {
    const QAlpha v = circle_normalize(ctx, raw);
    const RationalInterval enc = RationalInterval::point(v.r) + v.s * alpha;
    points.push_back({v, to_fixed(enc)});
  };
  for (long j = 0; j < m; ++j) add({0, mpq_class(-j)});
  if (beta)
    for (long j = 0; j < m; ++j) add({beta->r, beta->s - j});

  auto less = [&](const Point& a, const Point& b) {
    const Fixed diff = a.key - b.key;
    const bool close = diff < kFixedGuard || diff > ~Fixed(0) - kFixedGuard;
    if (!close) return a.key < b.key;
    return sign_linear(ctx, a.value - b.value) < 0;
  };
  std::sort(points.begin(), points.end(), less);
  points.erase(std::unique(points.begin(), points.end(), [](const Point& a, const Point& b) { return a.value == b.value; }),
               points.end());

  GapStats out;
  out.point_count = points.size();
  std::vector<QAlpha> gaps;
  gaps.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i + 1 < points.size()) {
      gaps.push_back(points[i + 1].value - points[i].value);
    } else {
      gaps.push_back(QAlpha{1, 0} + points.front().value - points[i].value);
    }
  }
  out.min_gap = gaps.front();
  out.max_gap = gaps.front();
  for (const QAlpha& g : gaps) {
    if (sign_linear(ctx, g - out.min_gap) < 0) out.min_gap = g;
    if (sign_linear(ctx, g - out.max_gap) > 0) out.max_gap = g;
  }
  std::vector<QAlpha> distinct;
  for (const QAlpha& g : gaps)
    if (std::find(distinct.begin(), distinct.end(), g) == distinct.end()) distinct.push_back(g);
  out.distinct_lengths = distinct.size();
  const double a = alpha.midpoint().get_d();
  out.min_gap_value = out.min_gap.r.get_d() + out.min_gap.s.get_d() * a;
  out.max_gap_value = out.max_gap.r.get_d() + out.max_gap.s.get_d() * a;
  return out;
}

}  // namespace specflow::cf
