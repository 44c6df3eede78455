#include "specflow/roof.hpp"

#include <algorithm>
#include <map>

#include "specflow/error.hpp"

namespace specflow {

namespace {

Fixed fixed_of(long j) { return static_cast<Fixed>(static_cast<__int128>(j)); }

SymReal residual_of(const RoofPC& f, const SymReal& integral) {
  SymReal r = integral - f.a();
  for (std::size_t i = 0; i < f.p(); ++i) r -= multiply(f.d()[i], f.xi()[i]);
  return r;
}

}  // namespace

RoofPC RoofPC::make(std::vector<SymReal> xi, std::vector<SymReal> d, SymReal v1) {
  const std::size_t p = xi.size();
  if (p < 2) throw Error(ErrorKind::Precondition, "roof needs at least two discontinuities");
  if (d.size() != p) throw Error(ErrorKind::Precondition, "roof: xi and d differ in length");
  if (!v1.valid()) throw Error(ErrorKind::InvalidArgument, "roof: v1 missing");
  for (const auto& s : xi)
    if (s.basis() != v1.basis()) throw Error(ErrorKind::InvalidArgument, "roof: mixed bases");
  for (const auto& s : d)
    if (s.basis() != v1.basis()) throw Error(ErrorKind::InvalidArgument, "roof: mixed bases");

  RoofPC f;
  for (auto& s : xi) f.xi_.push_back(circle_normalize(s));
  for (std::size_t i = 0; i + 1 < p; ++i)
    if (compare(f.xi_[i], f.xi_[i + 1]) >= 0)
      throw Error(ErrorKind::Precondition, "roof: xi must be strictly increasing in [0,1)");
  SymReal sum = SymReal::zero(v1.basis());
  for (std::size_t i = 0; i < p; ++i) {
    if (d[i].is_zero()) throw Error(ErrorKind::Precondition, "roof: jump d_" + std::to_string(i + 1) + " is zero");
    sum += d[i];
  }
  if (!sum.is_zero()) throw Error(ErrorKind::Precondition, "roof: jump sum is " + sum.to_string() + ", not 0");
  f.d_ = std::move(d);
  f.v_.push_back(std::move(v1));
  for (std::size_t i = 1; i < p; ++i) f.v_.push_back(f.v_[i - 1] - f.d_[i]);
  for (std::size_t i = 0; i < p; ++i)
    if (f.v_[i].sign() <= 0)
      throw Error(ErrorKind::Precondition, "roof: value " + f.v_[i].to_string() + " is not positive");
  for (std::size_t i = 1; i < p; ++i) {
    if (compare(f.v_[i], f.v_[f.min_index_]) < 0) f.min_index_ = i;
    if (compare(f.v_[i], f.v_[f.max_index_]) > 0) f.max_index_ = i;
  }
  f.variation_ = SymReal::zero(f.v_[0].basis());
  for (const auto& s : f.d_) f.variation_ += abs(s);
  f.variation_double_ = f.variation_.to_double();
  for (std::size_t i = 0; i < p; ++i) {
    f.xi_fixed_.push_back(to_fixed(f.xi_[i]));
    f.v_double_.push_back(f.v_[i].to_double());
  }
  for (std::size_t i = 0; i < p; ++i) {
    const double lo = f.xi_[i].to_double();
    const double hi = i + 1 < p ? f.xi_[i + 1].to_double() : f.xi_[0].to_double() + 1.0;
    f.integral_double_ += f.v_double_[i] * (hi - lo);
  }
  return f;
}

SymReal RoofPC::integral() const {
  SymReal total = SymReal::zero(basis());
  for (std::size_t i = 0; i < p(); ++i) {
    SymReal len = (i + 1 < p() ? xi_[i + 1] : xi_[0] + SymReal::rational(basis(), 1)) - xi_[i];
    total += multiply(v_[i], len);
  }
  if (!integer_combination(d_, residual_of(*this, total)))
    throw Error(ErrorKind::AssertionFailed, "integral - a - sum d_i xi_i is not an integer combination of the jumps");
  return total;
}

std::size_t RoofPC::locate(const SymReal& x) const {
  const SymReal y = circle_normalize(x);
  std::size_t idx = p() - 1;
  for (std::size_t i = 0; i < p(); ++i) {
    if (compare(y, xi_[i]) >= 0) idx = i;
    else break;
  }
  return idx;
}

std::optional<std::size_t> RoofPC::locate_fixed(Fixed x) const {
  const auto it = std::upper_bound(xi_fixed_.begin(), xi_fixed_.end(), x);
  const std::size_t k = static_cast<std::size_t>(it - xi_fixed_.begin());
  const std::size_t prev = k == 0 ? p() - 1 : k - 1;
  const std::size_t next = k == p() ? 0 : k;
  if (Fixed(x - xi_fixed_[prev]) < kFixedGuard) return std::nullopt;
  if (Fixed(xi_fixed_[next] - x) < kFixedGuard) return std::nullopt;
  return prev;
}

SymReal value_at(const RoofPC& f, const SymReal& x) { return f.values()[f.locate(x)]; }

SymReal orbit_point(const SymReal& x, long j) {
  SymReal y = x;
  if (j != 0) y += mpq_class(j) * SymReal::symbol(x.basis(), "alpha");
  return circle_normalize(y);
}

std::vector<long> interval_counts(const RoofPC& f, const SymReal& x, long j0, long n) {
  std::vector<long> counts(f.p(), 0);
  const Fixed base = to_fixed(x);
  const Fixed step = f.ctx().alpha_fixed();
  for (long j = j0; j < j0 + n; ++j) {
    const Fixed pos = base + fixed_of(j) * step;
    if (auto idx = f.locate_fixed(pos)) ++counts[*idx];
    else ++counts[f.locate(orbit_point(x, j))];
  }
  return counts;
}

std::vector<std::vector<long>> grid_interval_counts(const RoofPC& f, long q, std::size_t grid) {
  if (grid == 0 || q < 0) throw Error(ErrorKind::InvalidArgument, "grid_interval_counts needs grid > 0 and q >= 0");
  const std::size_t p = f.p();
  const BasisPtr& basis = f.basis();
  const Fixed step = f.ctx().alpha_fixed();
  struct Event {
    Fixed z;
    std::size_t i;
    long j;
  };
  std::vector<Event> events;
  events.reserve(p * static_cast<std::size_t>(q));
  for (long j = 0; j < q; ++j) {
    for (std::size_t i = 0; i < p; ++i) {
      Fixed z = f.xi_fixed()[i] - fixed_of(j) * step;
      if (z < kFixedGuard || Fixed(-z) < kFixedGuard) {
        const SymReal exact = orbit_point(f.xi()[i], -j);
        if (exact.is_zero()) continue;  // already in the state at x = 0
        z = compare(exact, SymReal::rational(basis, mpq_class(1, 2))) < 0 ? Fixed(0) : ~Fixed(0);
      }
      events.push_back({z, i, j});
    }
  }
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.z < b.z; });

  std::vector<std::vector<long>> out(grid);
  std::vector<long> state = interval_counts(f, SymReal::zero(basis), 0, q);
  std::vector<bool> applied(events.size(), false);
  auto apply = [&](std::size_t e) {
    applied[e] = true;
    const std::size_t i = events[e].i;
    --state[i == 0 ? p - 1 : i - 1];
    ++state[i];
  };
  std::size_t next = 0;
  for (std::size_t k = 0; k < grid; ++k) {
    const mpq_class xk(static_cast<long>(k), static_cast<long>(grid));
    const Fixed g = to_fixed(xk);
    while (next < events.size() && (applied[next] || events[next].z < g)) {
      if (!applied[next] && g - events[next].z < kFixedGuard) break;
      if (!applied[next]) apply(next);
      ++next;
    }
    // exact decisions inside the guard band around the grid point
    const SymReal xs = SymReal::rational(basis, xk);
    for (std::size_t e = next; e < events.size(); ++e) {
      const Fixed gap = events[e].z > g ? Fixed(events[e].z - g) : Fixed(g - events[e].z);
      if (gap >= kFixedGuard) {
        if (events[e].z > g) break;
        continue;
      }
      if (!applied[e] && compare(orbit_point(f.xi()[events[e].i], -events[e].j), xs) <= 0) apply(e);
    }
    out[k] = state;
  }
  return out;
}

SymReal birkhoff(const RoofPC& f, const SymReal& x, long n) {
  SymReal out = SymReal::zero(f.basis());
  if (n == 0) return out;
  const auto counts = n > 0 ? interval_counts(f, x, 0, n) : interval_counts(f, x, n, -n);
  for (std::size_t i = 0; i < f.p(); ++i)
    if (counts[i] != 0) out += mpq_class(counts[i]) * f.values()[i];
  return n > 0 ? out : -out;
}

ArcCounter::ArcCounter(const RoofPC& f, const SymReal& x, const SymReal& y)
    : f_(f), x_(circle_normalize(x)), arc_(circle_sub(y, x)) {
  if (arc_.is_zero()) throw Error(ErrorKind::Precondition, "x and y coincide on the circle");
  x_fixed_ = to_fixed(x_);
  arc_fixed_ = to_fixed(arc_);
  alpha_fixed_ = f.ctx().alpha_fixed();
}

bool ArcCounter::exact_hit(std::size_t i, long j) const {
  ++fallbacks_;
  const SymReal t = circle_sub(orbit_point(f_.xi()[i], -j), x_);
  return !t.is_zero() && compare(t, arc_) <= 0;
}

void ArcCounter::hits(long j, std::vector<std::size_t>& out) const {
  const Fixed u = x_fixed_ + fixed_of(j) * alpha_fixed_;
  for (std::size_t i = 0; i < f_.p(); ++i) {
    const Fixed t = f_.xi_fixed()[i] - u;
    const Fixed to_end = t > arc_fixed_ ? Fixed(t - arc_fixed_) : Fixed(arc_fixed_ - t);
    if (t < kFixedGuard || Fixed(-t) < kFixedGuard || to_end < kFixedGuard) {
      if (exact_hit(i, j)) out.push_back(i);
    } else if (t <= arc_fixed_) {
      out.push_back(i);
    }
  }
}

std::vector<long> ArcCounter::counts(long n) const {
  std::vector<long> c(f_.p(), 0);
  std::vector<std::size_t> buf;
  for (long j = 0; j < n; ++j) {
    buf.clear();
    hits(j, buf);
    for (auto i : buf) ++c[i];
  }
  return c;
}

SymReal birkhoff_diff(const RoofPC& f, const SymReal& x, const SymReal& y, long n) {
  if (n < 0) throw Error(ErrorKind::InvalidArgument, "birkhoff_diff needs n >= 0");
  const ArcCounter arc(f, x, y);
  const auto c = arc.counts(n);
  SymReal out = SymReal::zero(f.basis());
  for (std::size_t i = 0; i < f.p(); ++i)
    if (c[i] != 0) out += mpq_class(c[i]) * f.d()[i];
  return out;
}

DiscontinuityAudit discontinuities(const RoofPC& f, long n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "discontinuities needs n >= 1");
  DiscontinuityAudit audit;
  std::map<SymReal, std::size_t, SymRealKeyLess> where;
  for (long j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < f.p(); ++i) {
      SymReal z = orbit_point(f.xi()[i], -j);
      audit.multiset.push_back(z);
      auto [it, fresh] = where.emplace(z, audit.distinct.size());
      if (fresh) audit.distinct.push_back({z, {}, SymReal::zero(f.basis())});
      auto& entry = audit.distinct[it->second];
      entry.src.emplace_back(i, j);
      entry.jump += f.d()[i];
    }
  }
  for (const auto& e : audit.distinct)
    if (e.genuine()) ++audit.genuine_count;
  return audit;
}

EquivalenceStructure equivalence_structure(const RoofPC& f) {
  EquivalenceStructure es;
  const std::size_t p = f.p();
  es.sim_of.assign(p, 0);
  es.q_of.assign(p, 0);
  for (std::size_t i = 0; i < p; ++i) {
    bool placed_sim = false, placed_q = false;
    for (std::size_t c = 0; c < es.classes_sim.size() && !placed_sim; ++c) {
      const SymReal diff = f.xi()[i] - f.xi()[es.classes_sim[c].front()];
      if (membership(diff, Target::z_plus_z_alpha_mod1()).member) {
        es.classes_sim[c].push_back(i);
        es.sim_of[i] = c;
        placed_sim = true;
      }
    }
    if (!placed_sim) {
      es.sim_of[i] = es.classes_sim.size();
      es.classes_sim.push_back({i});
    }
    for (std::size_t c = 0; c < es.classes_q.size() && !placed_q; ++c) {
      const SymReal diff = f.xi()[i] - f.xi()[es.classes_q[c].front()];
      if (membership(diff, Target::q_plus_q_alpha()).member) {
        es.classes_q[c].push_back(i);
        es.q_of[i] = c;
        placed_q = true;
      }
    }
    if (!placed_q) {
      es.q_of[i] = es.classes_q.size();
      es.classes_q.push_back({i});
    }
  }
  for (const auto& cls : es.classes_sim) {
    SymReal s = SymReal::zero(f.basis());
    for (auto i : cls) s += f.d()[i];
    es.class_sums.push_back(std::move(s));
  }
  return es;
}

P1Verdict check_p1(const RoofPC& f) {
  P1Verdict v;
  v.lattice = relation_lattice(f.d());
  if (v.lattice.empty()) {
    v.holds = true;
    return v;
  }
  const EquivalenceStructure es = equivalence_structure(f);
  // sim classes grouped by their Q + Q alpha class
  std::vector<std::vector<std::size_t>> options(es.classes_q.size());
  for (std::size_t c = 0; c < es.classes_sim.size(); ++c) options[es.q_of[es.classes_sim[c].front()]].push_back(c);
  std::vector<std::size_t> choice(options.size(), 0);
  for (;;) {
    std::vector<std::size_t> sel;
    for (std::size_t k = 0; k < options.size(); ++k)
      for (auto i : es.classes_sim[options[k][choice[k]]]) sel.push_back(i);
    std::sort(sel.begin(), sel.end());
    ++v.selections_checked;
    std::vector<SymReal> sub;
    for (auto i : sel) sub.push_back(f.d()[i]);
    const auto lat = relation_lattice(sub);
    if (!lat.empty()) {
      linalg::IntVector w(f.p(), 0);
      for (std::size_t k = 0; k < sel.size(); ++k) w[sel[k]] = lat.front()[k];
      v.witness = std::move(w);
      v.witness_selection = std::move(sel);
      return v;
    }
    std::size_t k = 0;
    while (k < options.size() && ++choice[k] == options[k].size()) choice[k++] = 0;
    if (k == options.size()) break;
  }
  v.holds = true;
  return v;
}

SymReal remnien_residual(const RoofPC& f) { return residual_of(f, f.integral()); }

P2Verdict check_p2(const RoofPC& f) {
  P2Verdict v;
  v.qalpha_span = membership(f.a(), Target::q_alpha_span(f.d()));
  v.rational_span_member = membership(f.a(), Target::q_span(f.d())).member;
  v.holds = !v.qalpha_span.member;
  if (v.rational_span_member && !v.qalpha_span.member)
    throw Error(ErrorKind::AssertionFailed, "a lies in the rational span of the jumps but not in the Q+Q alpha span");
  try {
    v.identity_coefficients = integer_combination(f.d(), remnien_residual(f));
    v.identity_note = "integral - a - sum d_i xi_i is an integer combination of the jumps";
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::InsufficientStructure) throw;
    v.identity_note = std::string("integral not representable: ") + e.what();
  }
  return v;
}

EigenReport eigenvalue_criterion(const RoofPC& f, const SymReal& r) {
  if (r.is_zero()) throw Error(ErrorKind::Precondition, "r = 0 is degenerate: the constant function is always a solution");
  EigenReport rep;
  const EquivalenceStructure es = equivalence_structure(f);
  rep.clause_classes = true;
  for (const auto& s : es.class_sums) {
    const SymReal rs = multiply(r, s);
    const bool ok = rs.is_rational() && rs.coord(0).get_den() == 1;
    rep.class_sums.push_back(s);
    rep.class_ok.push_back(ok);
    rep.clause_classes = rep.clause_classes && ok;
  }
  rep.scaled_integral = multiply(r, f.integral());
  rep.clause_integral = membership(rep.scaled_integral, Target::z_plus_z_alpha_mod1()).member;
  rep.solvable = rep.clause_classes && rep.clause_integral;
  return rep;
}

WeakMixingVerdict weak_mixing_verdict(const RoofPC& f) {
  WeakMixingVerdict w;
  if (!check_p1(f).holds) {
    w.reason = "P1 fails";
    return w;
  }
  try {
    if (!check_p2(f).holds) {
      w.reason = "P2 fails";
      return w;
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::InsufficientStructure) throw;
    w.reason = std::string("P2 undecided: ") + e.what();
    return w;
  }
  w.weakly_mixing = true;
  w.reason = "P1 and P2 hold";
  return w;
}

}  // namespace specflow
