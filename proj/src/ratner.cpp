#include "specflow/ratner.hpp"

#include <cmath>
#include <map>
#include <random>

#include "specflow/error.hpp"
#include "specflow/flowlab.hpp"

namespace specflow {

namespace {

mpq_class qpow(const mpq_class& x, int e) {
  mpq_class r = 1;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

SymReal delta_value(const RoofPC& f, const std::vector<long>& r) {
  SymReal s = SymReal::zero(f.basis());
  for (std::size_t i = 0; i < r.size(); ++i)
    if (r[i] != 0) s += mpq_class(r[i]) * f.d()[i];
  return s;
}

// Shortest-arc distance between two fixed-point circle positions.
double circle_gap(Fixed a, Fixed b) {
  const double d = fixed_to_double(a - b);
  return std::min(d, 1.0 - d);
}

// Flow for a long positive time, summing roof values from integer visit counts
// so the height does not accumulate rounding from a million subtractions.
FlowPointF flow_far(const RoofPC& f, Fixed x, double s, double t) {
  const Fixed alpha = f.ctx().alpha_fixed();
  const double target = s + t;
  std::vector<long> counts(f.p(), 0);
  auto total = [&] {
    double acc = 0;
    for (std::size_t i = 0; i < f.p(); ++i) acc += static_cast<double>(counts[i]) * f.values_double()[i];
    return acc;
  };
  double sum = 0;
  Fixed pos = x;
  for (;;) {
    const auto& b = f.xi_fixed();
    const auto it = std::upper_bound(b.begin(), b.end(), pos);
    const std::size_t idx = it == b.begin() ? f.p() - 1 : static_cast<std::size_t>(it - b.begin()) - 1;
    if (sum + f.values_double()[idx] > target) break;
    ++counts[idx];
    pos += alpha;
    if ((counts[0] & 1023) == 0) sum = total();
    else sum += f.values_double()[idx];
  }
  sum = total();
  return {pos, target - sum};
}

}  // namespace

mpq_class RatnerConstants::delta(long n) const {
  if (n <= 0) throw Error(ErrorKind::InvalidArgument, "delta(N) needs N > 0");
  const mpq_class c5 = qpow(c, 5);
  mpq_class out = qpow(c, 7) / (mpq_class(2 * static_cast<long>(p) * h * h) * (1 + c5) * n);
  out.canonicalize();
  return out;
}

RatnerConstants ratner_constants(const RoofPC& f, long j_max) {
  const P1Verdict p1 = check_p1(f);
  if (!p1.holds) throw Error(ErrorKind::Precondition, "Ratner constants need (P1), which fails for this roof");
  RatnerConstants k;
  const cf::BpqConstant bpq = cf::bpq_constant(f.ctx(), j_max);
  k.c = bpq.c;
  k.big_c = f.ctx().big_c();
  k.p = f.p();
  for (std::size_t i = 0; i < f.p(); ++i) {
    for (std::size_t j = i + 1; j < f.p(); ++j) {
      const SymReal diff = f.xi()[j] - f.xi()[i];
      if (!membership(diff, Target::q_plus_q_alpha()).member) continue;
      if (membership(diff, Target::z_plus_z_alpha_mod1()).member) continue;
      mpz_class h;
      mpz_lcm(h.get_mpz_t(), diff.coord(0).get_den_mpz_t(), diff.coord(1).get_den_mpz_t());
      const mpz_class m2 = abs(mpq_class(diff.coord(1) * h).get_num());
      k.h = std::max({k.h, h.get_si(), m2.get_si()});
    }
  }
  const mpq_class c5 = qpow(k.c, 5);
  k.r = 2 / c5 + 1;
  k.r.canonicalize();
  k.r_int = floor_q(k.r).get_si();
  k.kappa = qpow(k.c, 10) / (mpq_class(4 * static_cast<long>(k.p) * k.h * k.h) * (1 + c5));
  k.kappa.canonicalize();
  k.lattice = p1.lattice;
  return k;
}

bool in_v(const RatnerConstants& k, const std::vector<long>& r) {
  auto bounded = [&](const std::vector<mpz_class>& v) {
    for (const auto& x : v)
      if (abs(x) > k.r_int) return false;
    return true;
  };
  std::vector<mpz_class> base(r.begin(), r.end());
  if (bounded(base)) return true;
  // shift along one lattice direction at a time
  for (const auto& w : k.lattice) {
    mpz_class lo = -mpz_class(1) << 62, hi = mpz_class(1) << 62;
    bool ok = true;
    for (std::size_t i = 0; i < base.size() && ok; ++i) {
      if (w[i] == 0) {
        ok = abs(base[i]) <= k.r_int;
        continue;
      }
      mpq_class a((-k.r_int - base[i]), w[i]), b((k.r_int - base[i]), w[i]);
      a.canonicalize();
      b.canonicalize();
      if (a > b) std::swap(a, b);
      lo = std::max(lo, ceil_q(a));
      hi = std::min(hi, floor_q(b));
    }
    if (ok && lo <= hi) return true;
  }
  return false;
}

WitnessReport find_witness(const RoofPC& f, const RatnerConstants& k, const SymReal& x, const SymReal& y, long n_min) {
  const BasisPtr& basis = f.basis();
  const SymReal arc = circle_sub(y, x);
  if (arc.is_zero()) throw Error(ErrorKind::Precondition, "find_witness needs x != y");
  const bool forward = compare(arc, SymReal::rational(basis, mpq_class(1, 2))) <= 0;
  const SymReal dist = forward ? arc : SymReal::rational(basis, 1) - arc;
  if (compare(dist, SymReal::rational(basis, k.delta(n_min))) >= 0)
    throw Error(ErrorKind::Precondition, "||x - y|| = " + std::to_string(dist.to_double()) + " is not below delta(N)");

  WitnessReport w;
  const cf::CFContext& ctx = f.ctx();
  while (compare(dist, SymReal::rational(basis, mpq_class(2, ctx.q(static_cast<std::size_t>(w.s + 1))))) < 0) ++w.s;
  w.q_s = ctx.q(static_cast<std::size_t>(w.s));
  w.q_s4 = ctx.q(static_cast<std::size_t>(w.s + 4));
  const long lo_n = w.q_s.get_si(), hi_n = w.q_s4.get_si();  // window [lo_n, hi_n)

  const ArcCounter counter(f, forward ? x : y, forward ? y : x);
  const long sign = forward ? 1 : -1;
  std::vector<long> counts(f.p(), 0);
  std::vector<std::size_t> buf;
  std::map<std::vector<long>, SymReal> value_cache;
  auto value_of = [&](const std::vector<long>& r) -> const SymReal& {
    auto it = value_cache.find(r);
    if (it == value_cache.end()) it = value_cache.emplace(r, delta_value(f, r)).first;
    return it->second;
  };
  std::vector<long> signed_counts(f.p(), 0);
  for (long j = 0; j < hi_n; ++j) {
    buf.clear();
    counter.hits(j, buf);
    bool changed = false;
    for (auto i : buf) {
      ++counts[i];
      changed = true;
    }
    const long n = j + 1;
    if (n < lo_n || n >= hi_n) continue;
    for (std::size_t i = 0; i < f.p(); ++i) signed_counts[i] = sign * counts[i];
    if (!w.trace.empty() && (!changed || value_of(signed_counts) == value_of(w.trace.back().r))) {
      w.trace.back().n_end = n;
    } else {
      w.trace.push_back({n, n, signed_counts});
    }
  }
  for (std::size_t i = 0; i < f.p(); ++i) w.disc_in_arc += counts[i];

  w.all_in_v = true;
  long best = -1;
  std::size_t best_idx = 0;
  long stretch = 0;
  for (std::size_t t = 0; t < w.trace.size(); ++t) {
    const auto& seg = w.trace[t];
    if (!in_v(k, seg.r)) w.all_in_v = false;
    if (value_of(seg.r).is_zero()) {
      stretch = 0;
      continue;
    }
    stretch += seg.n_end - seg.n_begin + 1;
    w.j_length = std::max(w.j_length, stretch);
    if (seg.n_end - seg.n_begin > best) {
      best = seg.n_end - seg.n_begin;
      best_idx = t;
    }
  }
  if (best < 0) throw Error(ErrorKind::AssertionFailed, "no window with a nonzero constant difference");
  const RunSegment& run = w.trace[best_idx];
  w.m = run.n_begin;
  w.l = run.n_end - run.n_begin;
  w.rho = value_of(run.r);
  w.rho_coeffs = run.r;
  w.rho_in_f = !w.rho.is_zero() && in_v(k, run.r);
  w.kappa_ok = mpq_class(w.l, w.m) >= k.kappa;
  w.n_ok = w.m >= n_min && w.l >= n_min;
  w.split_ok = mpq_class(w.l + 1) * (k.r * static_cast<long>(k.p) + 1) >= w.j_length;
  w.start_maximal = w.m == lo_n || best_idx == 0 || value_of(w.trace[best_idx - 1].r) != w.rho;
  if (!w.rho_in_f) throw Error(ErrorKind::AssertionFailed, "witness rho " + w.rho.to_string() + " is not in F");
  if (!w.kappa_ok)
    throw Error(ErrorKind::AssertionFailed, "L/M = " + std::to_string(w.l) + "/" + std::to_string(w.m) + " is below kappa");
  if (!w.n_ok) throw Error(ErrorKind::AssertionFailed, "M or L is below N");
  return w;
}

bool recheck_witness(const RoofPC& f, const SymReal& x, const SymReal& y, const WitnessReport& w) {
  std::vector<long> cx = interval_counts(f, x, 0, w.m);
  const std::vector<long> cy = interval_counts(f, y, 0, w.m);
  for (std::size_t i = 0; i < f.p(); ++i) cx[i] -= cy[i];
  std::map<std::vector<long>, bool> verdict;
  auto matches = [&](const std::vector<long>& diff) {
    auto it = verdict.find(diff);
    if (it != verdict.end()) return it->second;
    SymReal s = SymReal::zero(f.basis());
    for (std::size_t i = 0; i < f.p(); ++i)
      if (diff[i] != 0) s += mpq_class(diff[i]) * f.values()[i];
    const bool ok = s == w.rho;
    verdict.emplace(diff, ok);
    return ok;
  };
  const Fixed step = f.ctx().alpha_fixed();
  const Fixed fx = to_fixed(x), fy = to_fixed(y);
  auto index_at = [&](const SymReal& base, Fixed fbase, long j) {
    const Fixed pos = fbase + static_cast<Fixed>(static_cast<__int128>(j)) * step;
    if (auto idx = f.locate_fixed(pos)) return *idx;
    return f.locate(orbit_point(base, j));
  };
  for (long n = w.m;; ++n) {
    if (!matches(cx)) return false;
    if (n == w.m + w.l) break;
    ++cx[index_at(x, fx, n)];
    --cx[index_at(y, fy, n)];
  }
  return true;
}

std::vector<ClosePair> sample_close_pairs(const RoofPC& f, const RatnerConstants& k, long n_min, std::size_t count,
                                          std::uint64_t seed) {
  const BasisPtr& basis = f.basis();
  const mpq_class delta = k.delta(n_min);
  std::mt19937_64 rng(seed);
  const bool extra = basis->size() > 2;
  std::vector<ClosePair> out;
  for (std::size_t i = 0; i < count; ++i) {
    const mpq_class xq(mpz_class(static_cast<unsigned long>(rng() >> 24)), mpz_class(1) << 40);
    const mpq_class tilt(mpz_class(static_cast<unsigned long>(rng() >> 44)), mpz_class(1) << 30);
    const mpq_class frac(mpz_class(static_cast<unsigned long>((rng() >> 33) | (1ULL << 26))), mpz_class(1) << 31);
    ClosePair cp;
    cp.gap = delta * frac;
    cp.gap.canonicalize();
    SymReal x = SymReal::rational(basis, xq);
    if (extra) x = x + SymReal::symbol(basis, basis->name(2)) * tilt;
    cp.x = circle_normalize(x);
    cp.y = circle_normalize(cp.x + SymReal::rational(basis, cp.gap));
    out.push_back(std::move(cp));
  }
  return out;
}

RPropertyStats verify_r_property(const RoofPC& f, const RatnerConstants& k, const RPropertyOptions& opt) {
  if (opt.p_set.empty()) throw Error(ErrorKind::InvalidArgument, "R-property check needs a nonempty set P");
  if (!(opt.t0 > 0)) throw Error(ErrorKind::Precondition, "R-property check supports t0 > 0 only");
  if (opt.trials == 0) throw Error(ErrorKind::InvalidArgument, "R-property check needs trials > 0");
  const BasisPtr& basis = f.basis();
  std::mt19937_64 rng(opt.seed);
  const mpq_class delta = k.delta(opt.n_min);
  RPropertyStats stats;
  for (std::size_t trial = 0; trial < opt.trials; ++trial) {
    const mpq_class xq(mpz_class(static_cast<unsigned long>(rng() >> 24)), mpz_class(1) << 40);
    const mpq_class frac(mpz_class(static_cast<unsigned long>((rng() >> 33) | (1ULL << 26))), mpz_class(1) << 31);
    mpq_class gap = delta * frac;
    gap.canonicalize();
    const SymReal x = SymReal::rational(basis, xq);
    const SymReal y = circle_normalize(SymReal::rational(basis, xq + gap));
    const double lowest = std::min(value_at(f, x).to_double(), value_at(f, y).to_double());
    const double s = std::uniform_real_distribution<double>(0.0, lowest)(rng);

    RPairResult pr;
    pr.distance = gap.get_d();
    const WitnessReport w = find_witness(f, k, x, y, opt.n_min);
    pr.base_m = w.m;
    pr.base_l = w.l;
    const double natural = -w.rho.to_double();
    double shift = natural;
    for (double cand : opt.p_set) {
      if (std::abs(cand - natural) <= 1e-9 * std::max(1.0, std::abs(natural))) {
        shift = cand;
        pr.shift_in_p = true;
        break;
      }
    }
    shift += opt.rho_offset;
    pr.shift = shift;

    // flow-time window whose base index stays inside [M', M' + L']
    const double fx_m = birkhoff(f, x, w.m).to_double();
    const double fx_end = birkhoff(f, x, w.m + w.l + 1).to_double();
    pr.m = static_cast<long>(std::ceil(fx_m / opt.t0));
    const long last = static_cast<long>(std::floor((fx_end - s) / opt.t0 - 1e-9));
    pr.l = last - pr.m;
    if (pr.l < 0) {
      stats.pairs.push_back(pr);
      continue;
    }
    FlowPointF px = flow_far(f, to_fixed(x), s, static_cast<double>(pr.m) * opt.t0);
    FlowPointF py = flow_far(f, to_fixed(y), s, static_cast<double>(pr.m) * opt.t0 + shift);
    long close = 0;
    for (long n = pr.m; n <= last; ++n) {
      const double dist = circle_gap(px.x, py.x) + std::abs(px.s - py.s);
      if (dist < opt.eps) ++close;
      px = flow_map(f, px, opt.t0);
      py = flow_map(f, py, opt.t0);
    }
    pr.fraction = static_cast<double>(close) / static_cast<double>(pr.l + 1);
    pr.pass = pr.shift_in_p && pr.fraction > 1 - opt.eps;
    if (pr.pass) ++stats.passing;
    stats.pairs.push_back(pr);
  }
  stats.pass_rate = static_cast<double>(stats.passing) / static_cast<double>(opt.trials);
  stats.verdict = static_cast<double>(stats.passing) >= (1 - opt.eps) * static_cast<double>(opt.trials);
  return stats;
}

}  // namespace specflow
