#include "specflow/flowlab.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <thread>

#include "specflow/error.hpp"

namespace specflow {

namespace {

std::size_t locate_raw(const RoofPC& f, Fixed x) {
  const auto& b = f.xi_fixed();
  const auto it = std::upper_bound(b.begin(), b.end(), x);
  return it == b.begin() ? f.p() - 1 : static_cast<std::size_t>(it - b.begin()) - 1;
}

template <class Fn>
void parallel_chunks(std::size_t n, Fn fn) {
  const unsigned hw = std::max(1u, std::min(16u, std::thread::hardware_concurrency()));
  const std::size_t workers = std::min<std::size_t>(hw, std::max<std::size_t>(1, n / 64));
  if (workers <= 1) {
    fn(std::size_t{0}, n, std::size_t{0});
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back(fn, lo, hi, w);
  }
  for (auto& t : pool) t.join();
}

SymReal alpha_of(const BasisPtr& b) { return SymReal::symbol(b, "alpha"); }

}  // namespace

double roof_value(const RoofPC& f, Fixed x) { return f.values_double()[locate_raw(f, x)]; }

FlowPoint flow_map(const RoofPC& f, const FlowPoint& pt, const SymReal& t) {
  const SymReal x0 = circle_normalize(pt.x);
  if (pt.s.sign() < 0 || compare(pt.s, value_at(f, x0)) >= 0)
    throw Error(ErrorKind::Precondition, "flow point is not under the roof");
  const SymReal alpha = alpha_of(f.basis());
  SymReal x = x0;
  SymReal u = pt.s + t;
  if (u.sign() >= 0) {
    for (;;) {
      const SymReal v = value_at(f, x);
      if (compare(u, v) < 0) break;
      u -= v;
      x = circle_normalize(x + alpha);
    }
  } else {
    while (u.sign() < 0) {
      x = circle_normalize(x - alpha);
      u += value_at(f, x);
    }
  }
  return {x, u};
}

FlowPointF flow_map(const RoofPC& f, const FlowPointF& pt, double t) {
  const Fixed alpha = f.ctx().alpha_fixed();
  Fixed x = pt.x;
  double u = pt.s + t;
  if (u >= 0) {
    for (double v = roof_value(f, x); u >= v; v = roof_value(f, x)) {
      u -= v;
      x += alpha;
    }
  } else {
    while (u < 0) {
      x -= alpha;
      u += roof_value(f, x);
    }
  }
  return {x, u};
}

bool Rect::contains(const FlowPointF& p) const {
  const double x = fixed_to_double(p.x);
  return x >= dx0 && x < dx1 && p.s >= ds0 && p.s < ds1;
}

Rect make_rect(const RoofPC& f, SymReal x0, SymReal x1, SymReal s0, SymReal s1) {
  const SymReal zero = SymReal::zero(f.basis()), one = SymReal::rational(f.basis(), 1);
  if (compare(x0, zero) < 0 || compare(x1, one) > 0 || compare(x0, x1) >= 0)
    throw Error(ErrorKind::Precondition, "rectangle base must satisfy 0 <= x0 < x1 <= 1");
  if (s0.sign() < 0 || compare(s0, s1) >= 0) throw Error(ErrorKind::Precondition, "rectangle needs 0 <= s0 < s1");
  SymReal lowest = value_at(f, x0);
  for (std::size_t i = 0; i < f.p(); ++i)
    if (compare(f.xi()[i], x0) > 0 && compare(f.xi()[i], x1) < 0 && compare(f.values()[i], lowest) < 0)
      lowest = f.values()[i];
  if (compare(s1, lowest) > 0) throw Error(ErrorKind::Precondition, "rectangle protrudes above the roof");
  Rect r{std::move(x0), std::move(x1), std::move(s0), std::move(s1)};
  r.dx0 = r.x0.to_double();
  r.dx1 = r.x1.to_double();
  r.ds0 = r.s0.to_double();
  r.ds1 = r.s1.to_double();
  return r;
}

PhaseMeasure phase_measure(const RoofPC& f, const std::vector<Rect>& rects) {
  PhaseMeasure m{SymReal::zero(f.basis()), f.integral(), 0};
  for (const auto& r : rects) m.area += multiply(r.x1 - r.x0, r.s1 - r.s0);
  const RationalInterval a = m.area.eval(80), i = m.integral.eval(80);
  m.ratio = mpq_class(a.midpoint() / i.midpoint()).get_d();
  return m;
}

bool in_union(const std::vector<Rect>& rects, const FlowPointF& p) {
  for (const auto& r : rects)
    if (r.contains(p)) return true;
  return false;
}

std::vector<FlowPointF> sample_phase(const RoofPC& f, std::size_t n, std::uint64_t seed, unsigned shards) {
  if (shards == 0) shards = 1;
  const double top = f.max_value().to_double();
  std::vector<std::vector<FlowPointF>> parts(shards);
  std::vector<std::thread> pool;
  for (unsigned k = 0; k < shards; ++k) {
    const std::size_t want = n / shards + (k < n % shards ? 1 : 0);
    pool.emplace_back([&, k, want] {
      std::seed_seq seq{seed, static_cast<std::uint64_t>(k)};
      std::mt19937_64 rng(seq);
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      auto& out = parts[k];
      out.reserve(want);
      while (out.size() < want) {
        const Fixed x = static_cast<Fixed>(rng()) << 64 | static_cast<Fixed>(rng());
        const double s = unit(rng) * top;
        if (s < roof_value(f, x)) out.push_back({x, s});
      }
    });
  }
  for (auto& t : pool) t.join();
  std::vector<FlowPointF> all;
  all.reserve(n);
  for (auto& part : parts) all.insert(all.end(), part.begin(), part.end());
  return all;
}

CorrelationEstimate correlation(const RoofPC& f, const std::vector<Rect>& a, const std::vector<Rect>& b, double t,
                                std::size_t n_samples, std::uint64_t seed) {
  if (n_samples < 1000) throw Error(ErrorKind::Precondition, "correlation needs at least 1000 samples");
  const auto pts = sample_phase(f, n_samples, seed);
  std::vector<std::size_t> hits(16, 0);
  parallel_chunks(pts.size(), [&](std::size_t lo, std::size_t hi, std::size_t w) {
    std::size_t h = 0;
    for (std::size_t k = lo; k < hi; ++k)
      if (in_union(b, pts[k]) && in_union(a, flow_map(f, pts[k], t))) ++h;
    hits[w] = h;
  });
  std::size_t total = 0;
  for (auto h : hits) total += h;
  CorrelationEstimate est;
  est.t = t;
  est.n_samples = n_samples;
  est.seed = seed;
  est.estimate = static_cast<double>(total) / static_cast<double>(n_samples);
  est.radius = 1.96 * std::sqrt(est.estimate * (1 - est.estimate) / static_cast<double>(n_samples));
  return est;
}

RigidityReport qn_distribution(const RoofPC& f, long n, std::size_t grid) {
  if (grid < 1000) throw Error(ErrorKind::Precondition, "qn_distribution needs a grid of at least 1000 points");
  RigidityReport rep;
  rep.n = n;
  rep.q_n = f.ctx().q(static_cast<std::size_t>(n));
  rep.grid = grid;
  const long q = rep.q_n.get_si();
  const SymReal shift = mpq_class(rep.q_n) * f.integral();
  rep.t_n = shift.to_double();
  const BasisPtr& basis = f.basis();

  const auto counts = grid_interval_counts(f, q, grid);
  auto value_of = [&](const std::vector<long>& c) {
    SymReal s = -shift;
    for (std::size_t i = 0; i < f.p(); ++i) s += mpq_class(c[i]) * f.values()[i];
    return s;
  };
  rep.gamma = value_of(counts[0]);

  std::map<SymReal, int, SymRealKeyLess> d_set;
  std::vector<int> coef(f.p(), -2);
  for (;;) {
    SymReal s = SymReal::zero(basis);
    for (std::size_t i = 0; i < f.p(); ++i) s += mpq_class(coef[i]) * f.d()[i];
    d_set.emplace(std::move(s), 0);
    std::size_t i = 0;
    while (i < f.p() && ++coef[i] > 2) coef[i++] = -2;
    if (i == f.p()) break;
  }
  for (const auto& [s, unused] : d_set) rep.d_set.push_back(s);

  std::map<std::vector<long>, std::size_t> by_counts;
  for (const auto& c : counts) ++by_counts[c];
  std::map<SymReal, std::size_t, SymRealKeyLess> atoms;
  for (const auto& [c, m] : by_counts) atoms[value_of(c)] += m;
  rep.all_in_predicted = true;
  for (const auto& [v, m] : atoms) {
    if (!d_set.count(v - rep.gamma)) rep.all_in_predicted = false;
    rep.atoms.push_back({v, v.to_double(), mpq_class(static_cast<long>(m), static_cast<long>(grid))});
  }
  for (auto& a : rep.atoms) a.mass.canonicalize();
  std::stable_sort(rep.atoms.begin(), rep.atoms.end(), [](const Atom& x, const Atom& y) { return x.mass > y.mass; });
  rep.u = rep.atoms.empty() ? mpq_class(0) : rep.atoms.front().mass;
  return rep;
}

DkAudit dk_audit(const RoofPC& f, long n_max, std::size_t grid, double float_tol) {
  if (grid == 0) throw Error(ErrorKind::InvalidArgument, "dk_audit needs a nonempty grid");
  DkAudit audit;
  audit.variation = f.variation();
  audit.all_within = true;
  audit.float_agrees = true;
  const SymReal integral = f.integral();
  const double integral_d = integral.to_double();
  const double alpha_d = f.ctx().alpha_double();
  std::vector<double> xi_d;
  for (const auto& s : f.xi()) xi_d.push_back(s.to_double());
  auto value_float = [&](double x) {
    std::size_t idx = f.p() - 1;
    for (std::size_t i = 0; i < f.p(); ++i) {
      if (x >= xi_d[i]) idx = i;
      else break;
    }
    return f.values_double()[idx];
  };

  for (long n = 1; n <= n_max; ++n) {
    DkRow row;
    row.n = n;
    row.q_n = f.ctx().q(static_cast<std::size_t>(n));
    const long q = row.q_n.get_si();
    const auto counts = grid_interval_counts(f, q, grid);
    std::vector<double> floats(grid);
    parallel_chunks(grid, [&](std::size_t lo, std::size_t hi, std::size_t) {
      for (std::size_t k = lo; k < hi; ++k) {
        const double xd = static_cast<double>(k) / static_cast<double>(grid);
        // Neumaier summation of f(x + j alpha) - integral
        double sum = 0, comp = 0;
        for (long j = 0; j < q; ++j) {
          double y = xd + static_cast<double>(j) * alpha_d;
          y -= std::floor(y);
          const double term = value_float(y) - integral_d;
          const double t = sum + term;
          comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
          sum = t;
        }
        floats[k] = sum + comp;
      }
    });
    const SymReal shift = mpq_class(row.q_n) * integral;
    std::map<std::vector<long>, std::pair<SymReal, double>> cache;
    bool first = true;
    for (std::size_t k = 0; k < grid; ++k) {
      auto it = cache.find(counts[k]);
      if (it == cache.end()) {
        SymReal s = -shift;
        for (std::size_t i = 0; i < f.p(); ++i) s += mpq_class(counts[k][i]) * f.values()[i];
        const double sd = s.to_double();
        it = cache.emplace(counts[k], std::make_pair(abs(s), sd)).first;
      }
      const auto& [dev, signed_d] = it->second;
      if (first || compare(dev, row.max_deviation) > 0) row.max_deviation = dev;
      first = false;
      row.max_float_gap = std::max(row.max_float_gap, std::abs(signed_d - floats[k]));
    }
    row.max_deviation_double = row.max_deviation.to_double();
    row.within_variation = compare(row.max_deviation, audit.variation) <= 0;
    audit.all_within = audit.all_within && row.within_variation;
    audit.float_agrees = audit.float_agrees && row.max_float_gap <= float_tol;
    audit.rows.push_back(std::move(row));
  }
  return audit;
}

}  // namespace specflow
