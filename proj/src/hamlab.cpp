#include "specflow/hamlab.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <thread>

#include "specflow/error.hpp"

namespace specflow {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

std::string fmt_point(double x, double y) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "(%.12g, %.12g)", x, y);
  return buf;
}

double wrap_dist(double a) { return std::abs(a - std::round(a)); }

bool near_vertex(const HamiltonianSystem& sys, double x, double y, double r) {
  for (const auto& v : sys.vertices) {
    double dx = wrap_dist(x - v[0]), dy = wrap_dist(y - v[1]);
    if (dx * dx + dy * dy < r * r) return true;
  }
  return false;
}

// X_H / g without throwing; false when g is not positive.
bool field(const HamiltonianSystem& sys, double x, double y, std::array<double, 2>& out) {
  const auto hp = sys.p.value_gradient(x, y);
  const double g = sys.g.value(x, y);
  if (!(g > 0) || !std::isfinite(g)) return false;
  out = {(sys.alpha2 + hp[2]) / g, -(sys.alpha1 + hp[1]) / g};
  return std::isfinite(out[0]) && std::isfinite(out[1]);
}

template <class Fn>
void parallel_for(std::size_t n, Fn fn) {
  const unsigned hw = std::max(1u, std::min(16u, std::thread::hardware_concurrency()));
  const std::size_t workers = std::min<std::size_t>(hw, std::max<std::size_t>(1, n / 16));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) fn(i);
    });
  for (auto& t : pool) t.join();
}

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

struct Stepper {
  const HamiltonianSystem& sys;
  double tol;
  double t = 0, x = 0, y = 0, h = 0;
  std::array<double, 2> k1{};
  double pt = 0, px = 0, py = 0;
  std::array<double, 2> pk1{};
  std::size_t steps = 0, rejected = 0;

  Stepper(const HamiltonianSystem& s, double tolerance) : sys(s), tol(tolerance) {}

  bool start(double x0, double y0) {
    t = 0;
    x = x0;
    y = y0;
    if (!field(sys, x, y, k1))
      throw Error(ErrorKind::Precondition, "vector field undefined at " + fmt_point(x, y));
    const double speed = std::hypot(k1[0], k1[1]);
    if (speed < 1e-12) return false;
    h = std::min(0.01 / speed, 0.01);
    save();
    return true;
  }

  void save() {
    pt = t;
    px = x;
    py = y;
    pk1 = k1;
  }

  // One DP step of size hh from the saved state.
  bool trial(double hh, double& xn, double& yn, double& err, std::array<double, 2>& k7) const {
    std::array<double, 2> k2, k3, k4, k5, k6;
    const auto& k = pk1;
    if (!field(sys, px + hh * a21 * k[0], py + hh * a21 * k[1], k2)) return false;
    if (!field(sys, px + hh * (a31 * k[0] + a32 * k2[0]), py + hh * (a31 * k[1] + a32 * k2[1]), k3)) return false;
    if (!field(sys, px + hh * (a41 * k[0] + a42 * k2[0] + a43 * k3[0]),
               py + hh * (a41 * k[1] + a42 * k2[1] + a43 * k3[1]), k4))
      return false;
    if (!field(sys, px + hh * (a51 * k[0] + a52 * k2[0] + a53 * k3[0] + a54 * k4[0]),
               py + hh * (a51 * k[1] + a52 * k2[1] + a53 * k3[1] + a54 * k4[1]), k5))
      return false;
    if (!field(sys, px + hh * (a61 * k[0] + a62 * k2[0] + a63 * k3[0] + a64 * k4[0] + a65 * k5[0]),
               py + hh * (a61 * k[1] + a62 * k2[1] + a63 * k3[1] + a64 * k4[1] + a65 * k5[1]), k6))
      return false;
    xn = px + hh * (b1 * k[0] + b3 * k3[0] + b4 * k4[0] + b5 * k5[0] + b6 * k6[0]);
    yn = py + hh * (b1 * k[1] + b3 * k3[1] + b4 * k4[1] + b5 * k5[1] + b6 * k6[1]);
    if (!field(sys, xn, yn, k7)) return false;
    double ex = hh * (e1 * k[0] + e3 * k3[0] + e4 * k4[0] + e5 * k5[0] + e6 * k6[0] + e7 * k7[0]);
    double ey = hh * (e1 * k[1] + e3 * k3[1] + e4 * k4[1] + e5 * k5[1] + e6 * k6[1] + e7 * k7[1]);
    err = std::max(std::abs(ex), std::abs(ey)) / tol;
    return std::isfinite(xn) && std::isfinite(yn);
  }

  // Advances by one accepted step of size at most hmax.
  void advance(double hmax) {
    save();
    double hh = std::min(h, hmax);
    for (;;) {
      if (hh < 1e-15 * std::max(1.0, std::abs(t)))
        throw Error(ErrorKind::NoReturn, "step size collapsed near " + fmt_point(x, y));
      double xn, yn, err;
      std::array<double, 2> k7;
      if (!trial(hh, xn, yn, err, k7)) {
        ++rejected;
        hh *= 0.25;
        continue;
      }
      if (err > 1.0) {
        ++rejected;
        hh *= std::max(0.1, 0.9 * std::pow(err, -0.2));
        continue;
      }
      t = pt + hh;
      x = xn;
      y = yn;
      k1 = k7;
      ++steps;
      const double grow = err > 0 ? std::min(5.0, 0.9 * std::pow(err, -0.2)) : 5.0;
      h = hh * grow;
      // keep spatial steps short so crossings and turning are tracked
      const double speed = std::hypot(k1[0], k1[1]);
      if (speed > 0) h = std::min(h, 0.05 / speed);
      return;
    }
  }

  // State after a step of size hh from the saved state (hh below the accepted size).
  bool at(double hh, double& xn, double& yn) const {
    double err;
    std::array<double, 2> k7;
    return trial(hh, xn, yn, err, k7);
  }
};

double turn_angle(const std::array<double, 2>& a, const std::array<double, 2>& b) {
  return std::atan2(a[0] * b[1] - a[1] * b[0], a[0] * b[0] + a[1] * b[1]);
}

constexpr double kMaxTurns = 8;

double mod_pos(double v, double m) {
  double r = std::fmod(v, m);
  if (r < 0) r += m;
  if (r >= m) r = 0;
  return r;
}

}  // namespace

double HamiltonianSystem::h(double x, double y) const { return alpha1 * x + alpha2 * y + p.value(x, y); }

std::array<double, 2> HamiltonianSystem::grad_h(double x, double y) const {
  auto gp = p.gradient(x, y);
  return {alpha1 + gp[0], alpha2 + gp[1]};
}

void HamiltonianSystem::validate() const {
  if (!std::isfinite(alpha1) || !std::isfinite(alpha2) || alpha2 <= 0)
    throw Error(ErrorKind::InvalidArgument, "alpha2 must be positive and both alphas finite");
  for (const auto& v : vertices)
    if (std::abs(g.value(v[0], v[1])) > 1e-9)
      throw Error(ErrorKind::InvalidArgument, "declared vertex " + fmt_point(v[0], v[1]) + " is not a zero of g");
  const int n = 64;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double x = (i + 0.5) / n, y = (j + 0.5) / n;
      if (near_vertex(*this, x, y, 1e-3)) continue;
      if (!(g.value(x, y) > 0))
        throw Error(ErrorKind::InvalidArgument, "g is not positive at " + fmt_point(x, y));
    }
}

std::array<double, 2> vector_field(const HamiltonianSystem& sys, double x, double y) {
  if (near_vertex(sys, x, y, 1e-12))
    throw Error(ErrorKind::Precondition, "vector field evaluated at a vertex " + fmt_point(x, y));
  std::array<double, 2> v;
  if (!field(sys, x, y, v)) throw Error(ErrorKind::Precondition, "g vanishes at " + fmt_point(x, y));
  return v;
}

Trajectory integrate(const HamiltonianSystem& sys, double x, double y, double duration, double tol) {
  if (!(tol > 0) || !(duration >= 0)) throw Error(ErrorKind::InvalidArgument, "integrate: bad duration or tol");
  Trajectory out;
  Stepper st(sys, tol);
  const double h0 = sys.h(x, y);
  out.points.push_back({0, x, y});
  if (!st.start(x, y)) {
    out.fixed_point = true;
    return out;
  }
  while (st.t < duration) {
    st.advance(duration - st.t);
    if (duration - st.t < 1e-14 * std::max(1.0, duration)) st.t = duration;
    out.points.push_back({st.t, st.x, st.y});
    out.h_drift = std::max(out.h_drift, std::abs(sys.h(st.x, st.y) - h0));
  }
  out.steps = st.steps;
  out.rejected = st.rejected;
  return out;
}

Transversal make_transversal(const HamiltonianSystem& sys, double x0, std::size_t samples) {
  Transversal tr;
  tr.x0 = x0;
  int sign = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    double y = (i + 0.5) / static_cast<double>(samples);
    if (near_vertex(sys, x0, y, 1e-6))
      throw Error(ErrorKind::Precondition, "transversal passes through a vertex near " + fmt_point(x0, y));
    double hy = sys.grad_h(x0, y)[1];
    int sg = hy > 1e-9 ? 1 : (hy < -1e-9 ? -1 : 0);
    if (sg == 0 || (sign != 0 && sg != sign))
      throw Error(ErrorKind::Precondition, "field is not transversal at " + fmt_point(x0, y));
    sign = sg;
  }
  tr.orientation = sign;
  return tr;
}

double induced_coordinate(const HamiltonianSystem& sys, const Transversal& tr, double y) {
  return mod_pos(sys.h(tr.x0, y) - sys.h(tr.x0, 0), sys.alpha2);
}

double curve_parameter(const HamiltonianSystem& sys, const Transversal& tr, double s) {
  s = mod_pos(s, sys.alpha2);
  const double base = sys.h(tr.x0, 0);
  auto phi = [&](double y) { return sys.h(tr.x0, y) - base; };
  double lo = 0, hi = 1;
  double y = s / sys.alpha2;
  for (int it = 0; it < 200; ++it) {
    double v = phi(y) - s;
    if (std::abs(v) <= 1e-16 * std::max(1.0, std::abs(s))) break;
    if (v < 0)
      lo = y;
    else
      hi = y;
    double d = sys.grad_h(tr.x0, y)[1];
    double yn = y - v / d;
    if (!(yn > lo && yn < hi)) yn = 0.5 * (lo + hi);
    if (hi - lo < 1e-17) break;
    y = yn;
  }
  return y;
}

ReturnResult return_map(const HamiltonianSystem& sys, const Transversal& tr, double s, double tol) {
  ReturnResult r;
  r.s = mod_pos(s, sys.alpha2);
  r.y_start = curve_parameter(sys, tr, r.s);
  const double target = tr.x0 + tr.orientation;
  const double cap = 100.0 / sys.alpha2;
  const double h0 = sys.h(tr.x0, r.y_start);
  Stepper st(sys, tol);
  if (!st.start(tr.x0, r.y_start)) throw Error(ErrorKind::NoReturn, "fixed point on the transversal");
  double turning = 0;
  for (;;) {
    auto prev_v = st.k1;
    st.advance(cap);
    turning += turn_angle(prev_v, st.k1);
    if ((st.x - target) * tr.orientation >= 0) break;
    if (std::abs(turning) > 2 * kPi * kMaxTurns)
      throw Error(ErrorKind::NoReturn, "orbit closes up before returning, s = " + std::to_string(r.s));
    if (st.t > cap) throw Error(ErrorKind::NoReturn, "no return within the time cap, s = " + std::to_string(r.s));
  }
  // bisection on the step size from the last accepted state
  double lo = 0, hi = st.t - st.pt;
  double xe = st.x, ye = st.y, te = st.t;
  for (int it = 0; it < 200; ++it) {
    if (std::abs(xe - target) <= tol * 1e-2 || hi - lo <= 1e-16 * std::max(1.0, st.pt)) break;
    double mid = 0.5 * (lo + hi), xm, ym;
    if (!st.at(mid, xm, ym)) break;
    if ((xm - target) * tr.orientation >= 0) {
      hi = mid;
      xe = xm;
      ye = ym;
      te = st.pt + mid;
    } else {
      lo = mid;
      if (std::abs(xm - target) < std::abs(xe - target)) {
        xe = xm;
        ye = ym;
        te = st.pt + mid;
      }
    }
  }
  r.y_return = ye - std::floor(ye);
  r.time = te;
  r.s_return = induced_coordinate(sys, tr, r.y_return);
  r.h_drift = std::abs(sys.h(xe, ye) - h0);
  return r;
}

bool reaches_transversal(const HamiltonianSystem& sys, const Transversal& tr, double x, double y, double tol) {
  const double cap = 100.0 / sys.alpha2;
  Stepper st(sys, tol);
  if (!st.start(x, y)) return false;
  const double start_cell = std::floor((x - tr.x0) * tr.orientation);
  double turning = 0;
  try {
    for (;;) {
      auto prev_v = st.k1;
      st.advance(cap);
      turning += turn_angle(prev_v, st.k1);
      if (std::floor((st.x - tr.x0) * tr.orientation) > start_cell) return true;
      if (std::abs(turning) > 2 * kPi * kMaxTurns || st.t > cap) return false;
    }
  } catch (const Error&) {
    return false;
  }
}

SectionProfile section_profile(const HamiltonianSystem& sys, const Transversal& tr, std::size_t grid, double tol) {
  if (grid < 8) throw Error(ErrorKind::InvalidArgument, "section_profile: grid too small");
  SectionProfile prof;
  prof.transversal = tr;
  prof.alpha2 = sys.alpha2;
  prof.tol = tol;
  const double a2 = sys.alpha2, cell = a2 / static_cast<double>(grid);
  prof.samples.resize(grid);
  parallel_for(grid, [&](std::size_t k) {
    auto& smp = prof.samples[k];
    smp.s = (static_cast<double>(k) + 0.5) * cell;
    try {
      auto r = return_map(sys, tr, smp.s, tol);
      smp.s_return = r.s_return;
      smp.return_time = r.time;
      smp.ok = true;
    } catch (const Error& e) {
      smp.error = e.what();
    }
  });
  std::vector<std::size_t> ok;
  for (std::size_t k = 0; k < grid; ++k) {
    if (prof.samples[k].ok)
      ok.push_back(k);
    else
      ++prof.failures;
  }
  prof.rotation_expected = mod_pos(-tr.orientation * sys.alpha1, a2);
  if (ok.empty()) return prof;

  // rotation: circular mean, then least squares on the unwrapped residuals
  double cs = 0, sn = 0;
  for (auto k : ok) {
    double r = mod_pos(prof.samples[k].s_return - prof.samples[k].s, a2);
    cs += std::cos(2 * kPi * r / a2);
    sn += std::sin(2 * kPi * r / a2);
  }
  const double c0 = mod_pos(std::atan2(sn, cs) / (2 * kPi) * a2, a2);
  double sum = 0;
  std::vector<double> res;
  for (auto k : ok) {
    double r = mod_pos(prof.samples[k].s_return - prof.samples[k].s, a2);
    r -= a2 * std::round((r - c0) / a2);
    res.push_back(r);
    sum += r;
  }
  const double mean = sum / static_cast<double>(res.size());
  for (double r : res) prof.rotation_spread = std::max(prof.rotation_spread, std::abs(r - mean));
  prof.rotation = mod_pos(mean, a2);

  double total = 0;
  for (auto k : ok) total += prof.samples[k].return_time;
  prof.integral = total * cell;

  // jumps: outlying discrete differences, refined by bisection
  const std::size_t m = ok.size();
  if (m < 8) return prof;
  std::vector<double> diff(m), mag(m);
  double fmax = 0;
  for (std::size_t i = 0; i < m; ++i) {
    diff[i] = prof.samples[ok[(i + 1) % m]].return_time - prof.samples[ok[i]].return_time;
    mag[i] = std::abs(diff[i]);
    fmax = std::max(fmax, std::abs(prof.samples[ok[i]].return_time));
  }
  std::vector<double> sorted = mag;
  std::nth_element(sorted.begin(), sorted.begin() + m / 2, sorted.end());
  const double thr = std::max(20.0 * sorted[m / 2], 1e-6 * (1.0 + fmax));
  std::vector<std::size_t> picks;
  for (std::size_t i = 0; i < m; ++i) {
    if (mag[i] <= thr) continue;
    const double lm = mag[(i + m - 1) % m], rm = mag[(i + 1) % m];
    if (mag[i] >= lm && mag[i] > rm) picks.push_back(i);
  }
  auto f_at = [&](double s, double& out) {
    try {
      out = return_map(sys, tr, s, tol).time;
      return true;
    } catch (const Error&) {
      return false;
    }
  };
  prof.jumps.resize(picks.size());
  parallel_for(picks.size(), [&](std::size_t jdx) {
    const std::size_t i = picks[jdx];
    const auto& left = prof.samples[ok[i]];
    const auto& right = prof.samples[ok[(i + 1) % m]];
    double a = left.s, b = right.s, fa = left.return_time, fb = right.return_time;
    if (b <= a) b += a2;
    for (int it = 0; it < 60 && b - a > 1e-11 * a2; ++it) {
      double mid = 0.5 * (a + b), fm;
      if (!f_at(mid, fm)) break;
      if (std::abs(fm - fa) <= std::abs(fm - fb)) {
        a = mid;
        fa = fm;
      } else {
        b = mid;
        fb = fm;
      }
    }
    JumpEstimate je;
    je.cell = ok[i];
    je.beta = mod_pos(0.5 * (a + b), a2);
    const double h = std::max(1e-6 * a2, 16 * (b - a));
    double l1, l2, r1, r2;
    bool good = f_at(a - h, l1) && f_at(a - 2 * h, l2) && f_at(b + h, r1) && f_at(b + 2 * h, r2);
    if (good) {
      je.left_limit = 2 * l1 - l2;
      je.right_limit = 2 * r1 - r2;
    } else {
      je.left_limit = fa;
      je.right_limit = fb;
    }
    je.d = je.left_limit - je.right_limit;
    prof.jumps[jdx] = je;
  });
  std::sort(prof.jumps.begin(), prof.jumps.end(),
            [](const JumpEstimate& u, const JumpEstimate& v) { return u.beta < v.beta; });
  for (const auto& je : prof.jumps) {
    prof.jump_sum += je.d;
    prof.max_abs_jump = std::max(prof.max_abs_jump, std::abs(je.d));
  }
  return prof;
}

AreaReport area_identity_check(const HamiltonianSystem& sys, const Transversal& tr, const SectionProfile& profile,
                               std::size_t mc_samples, std::uint64_t seed, double tol) {
  if (mc_samples == 0) throw Error(ErrorKind::InvalidArgument, "area_identity_check: no samples");
  AreaReport rep;
  rep.samples = mc_samples;
  rep.seed = seed;
  rep.profile_integral = profile.integral;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::array<double, 2>> pts(mc_samples);
  for (auto& p : pts) {
    p[0] = u(rng);
    p[1] = u(rng);
  }
  std::vector<double> val(mc_samples, 0.0);
  std::vector<char> in(mc_samples, 0);
  parallel_for(mc_samples, [&](std::size_t i) {
    const auto& p = pts[i];
    if (near_vertex(sys, p[0], p[1], 1e-12)) return;
    if (reaches_transversal(sys, tr, p[0], p[1], tol)) {
      in[i] = 1;
      val[i] = sys.g.value(p[0], p[1]);
    }
  });
  double s1 = 0, s2 = 0;
  std::size_t cnt = 0;
  for (std::size_t i = 0; i < mc_samples; ++i) {
    s1 += val[i];
    s2 += val[i] * val[i];
    cnt += in[i];
  }
  const double n = static_cast<double>(mc_samples);
  rep.mc_integral = s1 / n;
  const double var = std::max(0.0, s2 / n - rep.mc_integral * rep.mc_integral);
  rep.mc_radius = 1.96 * std::sqrt(var / n);
  rep.ec_fraction = static_cast<double>(cnt) / n;
  rep.discrepancy = std::abs(rep.mc_integral - rep.profile_integral) / std::max(1e-300, std::abs(rep.profile_integral));
  return rep;
}

std::string phase_portrait_svg(const HamiltonianSystem& sys, const Transversal& tr, std::size_t orbits, double tol) {
  const double size = 400;
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
     << "\" viewBox=\"0 0 " << size << ' ' << size << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\" stroke=\"black\"/>\n";
  const double xt = mod_pos(tr.x0, 1.0) * size;
  os << "<line x1=\"" << xt << "\" y1=\"0\" x2=\"" << xt << "\" y2=\"" << size
     << "\" stroke=\"red\" stroke-width=\"1.5\"/>\n";
  for (std::size_t k = 0; k < orbits; ++k) {
    double x = (static_cast<double>(k) + 0.5) / static_cast<double>(orbits);
    double y = std::fmod(0.618033988749895 * static_cast<double>(k) + 0.25, 1.0);
    Trajectory tj;
    try {
      tj = integrate(sys, x, y, 3.0 / sys.alpha2, tol);
    } catch (const Error&) {
      continue;
    }
    std::string path;
    double pxw = 0, pyw = 0;
    bool first = true;
    for (const auto& p : tj.points) {
      double xw = mod_pos(p.x, 1.0), yw = mod_pos(p.y, 1.0);
      bool jump = !first && (std::abs(xw - pxw) > 0.5 || std::abs(yw - pyw) > 0.5);
      char buf[64];
      std::snprintf(buf, sizeof buf, "%s%.2f %.2f ", (first || jump) ? "M" : "L", xw * size, (1 - yw) * size);
      path += buf;
      pxw = xw;
      pyw = yw;
      first = false;
    }
    if (!path.empty())
      os << "<path d=\"" << path << "\" fill=\"none\" stroke=\"steelblue\" stroke-width=\"0.7\"/>\n";
  }
  for (const auto& v : sys.vertices)
    os << "<circle cx=\"" << mod_pos(v[0], 1.0) * size << "\" cy=\"" << (1 - mod_pos(v[1], 1.0)) * size
       << "\" r=\"3\" fill=\"black\"/>\n";
  os << "</svg>\n";
  return os.str();
}

std::string profile_csv(const SectionProfile& profile) {
  std::string out = "s,s_return,return_time,ok\n";
  char buf[160];
  for (const auto& s : profile.samples) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%d\n", s.s, s.s_return, s.return_time, s.ok ? 1 : 0);
    out += buf;
  }
  return out;
}

namespace hamfix {

namespace {
const double kGolden = (std::sqrt(5.0) - 1) / 2;
}

HamiltonianSystem free_flow(double alpha1, double alpha2) {
  HamiltonianSystem s;
  s.name = "free";
  s.alpha1 = alpha1;
  s.alpha2 = alpha2;
  return s;
}

HamiltonianSystem g_cos(double alpha1, double alpha2) {
  HamiltonianSystem s = free_flow(alpha1, alpha2);
  s.name = "g_cos";
  s.g = TrigPoly({TrigTerm{0, 0, 1.0, 0}, TrigTerm{0, 1, 0.5, 0}});
  return s;
}

std::vector<std::array<double, 2>> saddles(const HamiltonianSystem& sys) {
  std::vector<std::array<double, 2>> out;
  const int n = 24;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double x = (i + 0.5) / n, y = (j + 0.5) / n;
      bool conv = false;
      for (int it = 0; it < 60; ++it) {
        auto g = sys.grad_h(x, y);
        auto hs = sys.p.hessian(x, y);
        double det = hs[0] * hs[2] - hs[1] * hs[1];
        if (std::abs(det) < 1e-14) break;
        double dx = (hs[2] * g[0] - hs[1] * g[1]) / det;
        double dy = (-hs[1] * g[0] + hs[0] * g[1]) / det;
        x -= dx;
        y -= dy;
        if (std::hypot(dx, dy) < 1e-15) {
          conv = true;
          break;
        }
      }
      if (!conv) continue;
      auto g = sys.grad_h(x, y);
      if (std::hypot(g[0], g[1]) > 1e-12) continue;
      auto hs = sys.p.hessian(x, y);
      if (hs[0] * hs[2] - hs[1] * hs[1] >= 0) continue;
      x = mod_pos(x, 1.0);
      y = mod_pos(y, 1.0);
      bool dup = false;
      for (const auto& v : out)
        if (wrap_dist(v[0] - x) < 1e-9 && wrap_dist(v[1] - y) < 1e-9) dup = true;
      if (!dup) out.push_back({x, y});
    }
  std::sort(out.begin(), out.end());
  return out;
}

HamiltonianSystem trap() {
  HamiltonianSystem s;
  s.name = "trap";
  s.alpha1 = kGolden;
  s.alpha2 = 1.0;
  const double amp = 2.5 / (2 * kPi);
  // A sin(2 pi x) cos(2 pi y) = A/2 [sin 2pi(x+y) + sin 2pi(x-y)]
  s.p = TrigPoly({TrigTerm{1, 1, 0, amp / 2}, TrigTerm{1, -1, 0, amp / 2}});
  auto sad = saddles(s);
  if (sad.empty()) throw Error(ErrorKind::AssertionFailed, "trap fixture has no saddles");
  // 2 - cos 2pi(wx+wy) - cos 2pi(wx-wy) vanishes exactly on Z^2 and Z^2 + (1/2, 1/2)
  const TrigPoly g2({TrigTerm{0, 0, 2, 0}, TrigTerm{1, 1, -1, 0}, TrigTerm{1, -1, -1, 0}});
  const auto z = sad.front();
  s.g = g2.shifted(z[0], z[1]) * g2.shifted(-z[0], -z[1]);
  s.vertices = sad;
  s.validate();
  return s;
}

HamiltonianSystem by_name(const std::string& name) {
  if (name == "free") return free_flow(kGolden, 1.0);
  if (name == "g_cos") return g_cos(kGolden, 1.0);
  if (name == "trap") return trap();
  throw Error(ErrorKind::InvalidArgument, "unknown hamiltonian fixture: " + name);
}

std::vector<std::string> names() { return {"free", "g_cos", "trap"}; }

}  // namespace hamfix

}  // namespace specflow
