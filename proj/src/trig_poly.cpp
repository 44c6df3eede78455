#include "specflow/trig_poly.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <utility>

namespace specflow {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Canonical mode: first nonzero of (kx, ky) positive.
bool canonical(int kx, int ky) { return kx > 0 || (kx == 0 && ky >= 0); }

}  // namespace

TrigPoly::TrigPoly(std::vector<TrigTerm> terms) : terms_(std::move(terms)) { normalize(); }

TrigPoly TrigPoly::constant(double c) { return TrigPoly({TrigTerm{0, 0, c, 0}}); }

void TrigPoly::normalize() {
  std::map<std::pair<int, int>, std::pair<double, double>> acc;
  for (const auto& t : terms_) {
    int kx = t.kx, ky = t.ky;
    double c = t.c, s = t.s;
    if (!canonical(kx, ky)) {
      kx = -kx;
      ky = -ky;
      s = -s;
    }
    if (kx == 0 && ky == 0) s = 0;
    auto& slot = acc[{kx, ky}];
    slot.first += c;
    slot.second += s;
  }
  terms_.clear();
  for (const auto& [k, cs] : acc) {
    if (std::abs(cs.first) < 1e-300 && std::abs(cs.second) < 1e-300) continue;
    terms_.push_back(TrigTerm{k.first, k.second, cs.first, cs.second});
  }
}

double TrigPoly::value(double x, double y) const {
  double v = 0;
  for (const auto& t : terms_) {
    double ph = kTwoPi * (t.kx * x + t.ky * y);
    v += t.c * std::cos(ph) + t.s * std::sin(ph);
  }
  return v;
}

std::array<double, 2> TrigPoly::gradient(double x, double y) const {
  double gx = 0, gy = 0;
  for (const auto& t : terms_) {
    double ph = kTwoPi * (t.kx * x + t.ky * y);
    double d = kTwoPi * (-t.c * std::sin(ph) + t.s * std::cos(ph));
    gx += t.kx * d;
    gy += t.ky * d;
  }
  return {gx, gy};
}

std::array<double, 3> TrigPoly::hessian(double x, double y) const {
  double hxx = 0, hxy = 0, hyy = 0;
  for (const auto& t : terms_) {
    double ph = kTwoPi * (t.kx * x + t.ky * y);
    double d2 = -kTwoPi * kTwoPi * (t.c * std::cos(ph) + t.s * std::sin(ph));
    hxx += t.kx * t.kx * d2;
    hxy += t.kx * t.ky * d2;
    hyy += t.ky * t.ky * d2;
  }
  return {hxx, hxy, hyy};
}

std::array<double, 3> TrigPoly::value_gradient(double x, double y) const {
  int kxm = 0, kym = 0;
  for (const auto& t : terms_) {
    kxm = std::max(kxm, t.kx);
    kym = std::max(kym, std::abs(t.ky));
  }
  if (kxm > 8 || kym > 8) {
    auto g = gradient(x, y);
    return {value(x, y), g[0], g[1]};
  }
  std::complex<double> ex[9], ey[9];
  ex[0] = ey[0] = 1.0;
  if (kxm > 0) ex[1] = std::polar(1.0, kTwoPi * x);
  if (kym > 0) ey[1] = std::polar(1.0, kTwoPi * y);
  for (int k = 2; k <= kxm; ++k) ex[k] = ex[k - 1] * ex[1];
  for (int k = 2; k <= kym; ++k) ey[k] = ey[k - 1] * ey[1];
  double v = 0, gx = 0, gy = 0;
  for (const auto& t : terms_) {
    std::complex<double> e = ex[t.kx] * (t.ky >= 0 ? ey[t.ky] : std::conj(ey[-t.ky]));
    double cp = e.real(), sp = e.imag();
    v += t.c * cp + t.s * sp;
    double d = kTwoPi * (-t.c * sp + t.s * cp);
    gx += t.kx * d;
    gy += t.ky * d;
  }
  return {v, gx, gy};
}

double TrigPoly::mean() const {
  for (const auto& t : terms_)
    if (t.kx == 0 && t.ky == 0) return t.c;
  return 0;
}

TrigPoly TrigPoly::shifted(double zx, double zy) const {
  std::vector<TrigTerm> out;
  for (const auto& t : terms_) {
    // cos(ph - w) = cos ph cos w + sin ph sin w; sin(ph - w) = sin ph cos w - cos ph sin w
    double w = kTwoPi * (t.kx * zx + t.ky * zy);
    double cw = std::cos(w), sw = std::sin(w);
    out.push_back(TrigTerm{t.kx, t.ky, t.c * cw - t.s * sw, t.c * sw + t.s * cw});
  }
  return TrigPoly(std::move(out));
}

TrigPoly operator+(const TrigPoly& a, const TrigPoly& b) {
  std::vector<TrigTerm> out = a.terms_;
  out.insert(out.end(), b.terms_.begin(), b.terms_.end());
  return TrigPoly(std::move(out));
}

TrigPoly operator*(double k, const TrigPoly& a) {
  std::vector<TrigTerm> out = a.terms_;
  for (auto& t : out) {
    t.c *= k;
    t.s *= k;
  }
  return TrigPoly(std::move(out));
}

TrigPoly operator*(const TrigPoly& a, const TrigPoly& b) {
  std::vector<TrigTerm> out;
  for (const auto& u : a.terms_) {
    for (const auto& v : b.terms_) {
      // (uc cos A + us sin A)(vc cos B + vs sin B)
      double cc = u.c * v.c, ss = u.s * v.s, cs = u.c * v.s, sc = u.s * v.c;
      // sum mode A+B
      out.push_back(TrigTerm{u.kx + v.kx, u.ky + v.ky, 0.5 * (cc - ss), 0.5 * (cs + sc)});
      // difference mode A-B
      out.push_back(TrigTerm{u.kx - v.kx, u.ky - v.ky, 0.5 * (cc + ss), 0.5 * (sc - cs)});
    }
  }
  return TrigPoly(std::move(out));
}

}  // namespace specflow
