#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "support.hpp"
#include "specflow/error.hpp"
#include "specflow/fixtures.hpp"
#include "specflow/roof.hpp"

using namespace specflow;

namespace {

struct NamedRoof {
  std::string name, preset;
};

std::vector<NamedRoof> all_roofs() {
  std::vector<NamedRoof> out;
  for (const auto& n : fixtures::roof_names())
    for (const char* p : {"golden", "sqrt2m1"}) out.push_back({n, p});
  return out;
}

// Direct Birkhoff sum in long double, stepping the orbit.
long double birkhoff_ld(const RoofPC& f, long double x, long n) {
  const long double a = f.ctx().alpha_double();
  std::vector<long double> xi;
  for (const auto& v : f.xi()) xi.push_back(v.to_double());
  long double s = 0;
  for (long j = 0; j < n; ++j) {
    long double y = x + j * a;
    y -= std::floor(y);
    std::size_t idx = xi.size() - 1;
    for (std::size_t i = 0; i < xi.size(); ++i)
      if (y >= xi[i]) idx = i;
    s += f.values_double()[idx];
  }
  return s;
}

// (P1) by exhaustive search over ||n||_inf <= 5, straight from the definition.
bool p1_brute(const RoofPC& f) {
  const std::size_t p = f.p();
  std::vector<long> n(p, -5);
  for (;;) {
    bool nonzero = false;
    for (long v : n) nonzero = nonzero || v != 0;
    if (nonzero && combine(f.d(), n).is_zero()) {
      bool rescued = false;
      for (std::size_t i = 0; i < p; ++i)
        for (std::size_t k = i + 1; k < p; ++k) {
          if (n[i] == 0 || n[k] == 0) continue;
          const SymReal diff = f.xi()[i] - f.xi()[k];
          const bool in_qa = diff.in_q_alpha();
          const bool in_za = in_qa && diff.coord(0).get_den() == 1 && diff.coord(1).get_den() == 1;
          if (in_qa && !in_za) rescued = true;
        }
      if (!rescued) return false;
    }
    std::size_t i = 0;
    while (i < p && n[i] == 5) n[i++] = -5;
    if (i == p) break;
    ++n[i];
  }
  return true;
}

}  // namespace

TEST_CASE("value_at and integral of the Example-1 roof") {
  auto f = fixtures::roof("example1");
  auto b = f.basis();
  CHECK(value_at(f, SymReal::parse(b, "0")) == SymReal::parse(b, "1 + b"));
  CHECK(value_at(f, SymReal::parse(b, "1/2")) == SymReal::parse(b, "1"));
  CHECK(value_at(f, SymReal::parse(b, "1/3")) == SymReal::parse(b, "1"));
  CHECK(f.integral() == SymReal::parse(b, "1 + b/3"));
  auto tv = fixtures::roof("two_values");
  CHECK(tv.integral() == SymReal::parse(tv.basis(), "3/2*b"));
  CHECK(f.variation() == SymReal::parse(b, "2*b"));
}

TEST_CASE("remnien residual is an integer combination of the jumps") {
  for (const auto& r : all_roofs()) {
    auto f = fixtures::roof(r.name, r.preset);
    SymReal res;
    try {
      res = remnien_residual(f);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::InsufficientStructure);
      CHECK(r.name == "fresh_symbol");
      continue;
    }
    CAPTURE(r.name);
    CHECK(integer_combination(f.d(), res).has_value());
  }
}

TEST_CASE("construction rejects degenerate roofs") {
  auto b = fixtures::sqrt3_basis("golden");
  auto s = [&](const char* t) { return SymReal::parse(b, t); };
  CHECK_THROWS_AS(RoofPC::make({s("0")}, {s("0")}, s("1")), Error);
  CHECK_THROWS_AS(RoofPC::make({s("0"), s("1/2")}, {s("1"), s("1")}, s("3")), Error);
  CHECK_THROWS_AS(RoofPC::make({s("0"), s("1/2")}, {s("-2"), s("2")}, s("1")), Error);
  CHECK_THROWS_AS(RoofPC::make({s("1/2"), s("0")}, {s("-1"), s("1")}, s("2")), Error);
}

TEST_CASE("Birkhoff sums against a direct long double oracle") {
  for (const char* preset : {"golden", "sqrt2m1"}) {
    auto f = fixtures::roof("example1", preset);
    auto b = f.basis();
    CHECK(birkhoff(f, SymReal::parse(b, "1/5"), 0).is_zero());
    CHECK(birkhoff(f, SymReal::parse(b, "1/5"), 1) == value_at(f, SymReal::parse(b, "1/5")));
    std::mt19937_64 rng(21);
    for (int t = 0; t < 40; ++t) {
      const long k = static_cast<long>(rng() % 9973);
      const long n = 1 + static_cast<long>(rng() % 300);
      auto x = SymReal::rational(b, rat(k, 9973));
      CHECK(birkhoff(f, x, n).to_double() == doctest::Approx(static_cast<double>(birkhoff_ld(f, k / 9973.0L, n))).epsilon(1e-12));
    }
  }
}

TEST_CASE("cocycle identity") {
  auto f = fixtures::roof("example1", "golden");
  auto b = f.basis();
  std::mt19937_64 rng(3);
  for (int t = 0; t < 60; ++t) {
    const long m = static_cast<long>(rng() % 201), n = static_cast<long>(rng() % 201);
    auto x = SymReal::rational(b, rat(static_cast<long>(rng() % 1000), 1000));
    CHECK(birkhoff(f, x, m + n) == birkhoff(f, x, m) + birkhoff(f, orbit_point(x, m), n));
  }
  // negative lengths: f^(-n)(x) = -f^(n)(x - n alpha)
  auto x = SymReal::parse(b, "2/7");
  CHECK(birkhoff(f, x, -5) == -birkhoff(f, orbit_point(x, -5), 5));
}

TEST_CASE("birkhoff_diff matches the difference of sums") {
  auto f = fixtures::roof("example1", "golden");
  auto b = f.basis();
  auto x = SymReal::parse(b, "0.26"), y = SymReal::parse(b, "0.25");
  const long q6 = f.ctx().q(6).get_si();
  CHECK(birkhoff_diff(f, x, y, q6) == birkhoff(f, x, q6) - birkhoff(f, y, q6));
  CHECK_THROWS_AS(birkhoff_diff(f, x, x, 3), Error);
  CHECK(birkhoff_diff(f, SymReal::parse(b, "0.5"), SymReal::parse(b, "0.51"), 1).is_zero());
  std::mt19937_64 rng(8);
  for (int t = 0; t < 40; ++t) {
    auto u = SymReal::rational(b, rat(static_cast<long>(rng() % 997), 997)) + SymReal::parse(b, "b/1000");
    auto v = circle_normalize(u + SymReal::rational(b, rat(1 + static_cast<long>(rng() % 50), 1000)));
    u = circle_normalize(u);
    const long n = 1 + static_cast<long>(rng() % 400);
    auto dd = birkhoff_diff(f, u, v, n);
    CHECK(dd == birkhoff(f, u, n) - birkhoff(f, v, n));
    CHECK(integer_combination(f.d(), dd).has_value());
  }
}

TEST_CASE("grid sweep agrees with per-point interval counts") {
  for (const char* preset : {"golden", "sqrt2m1"}) {
    auto f = fixtures::roof("example1", preset);
    for (long q : {1L, 5L, 29L, 144L}) {
      auto grid = grid_interval_counts(f, q, 300);
      for (std::size_t k = 0; k < 300; k += 7)
        CHECK(grid[k] == interval_counts(f, SymReal::rational(f.basis(), rat(static_cast<long>(k), 300)), 0, q));
    }
  }
}

TEST_CASE("discontinuities") {
  auto f = fixtures::roof("example1");
  auto b = f.basis();
  auto d1 = discontinuities(f, 1);
  CHECK(d1.multiset.size() == 2);
  CHECK(d1.multiset[0] == f.xi()[0]);
  CHECK(d1.multiset[1] == f.xi()[1]);
  auto d2 = discontinuities(f, 2);
  std::set<SymReal, SymRealKeyLess> expect{SymReal::parse(b, "0"), SymReal::parse(b, "1/3"),
                                           circle_normalize(SymReal::parse(b, "-alpha")),
                                           circle_normalize(SymReal::parse(b, "1/3 - alpha"))};
  std::set<SymReal, SymRealKeyLess> got;
  for (const auto& x : d2.multiset) got.insert(circle_normalize(x));
  CHECK(got == expect);
  CHECK(d2.distinct.size() == 4);

  auto bad = fixtures::roof("p1_fail_orbit");
  auto audit = discontinuities(bad, 2);
  bool cancelled = false;
  for (const auto& pt : audit.distinct)
    if (pt.src.size() == 2 && pt.jump.is_zero()) cancelled = true;
  CHECK(cancelled);

  for (const char* preset : {"golden", "sqrt2m1"}) {
    auto g = fixtures::roof("example1", preset);
    for (long n : {1L, 7L, 23L, 50L}) CHECK(discontinuities(g, n).genuine_count == g.p() * static_cast<std::size_t>(n));
  }
}

TEST_CASE("P1 and P2 verdicts on the fixtures") {
  auto e = fixtures::roof("example1");
  CHECK(check_p1(e).holds);
  CHECK(check_p2(e).holds);
  CHECK(weak_mixing_verdict(e).weakly_mixing);

  for (const char* name : {"p1_fail_orbit", "fresh_symbol"}) {
    auto f = fixtures::roof(name);
    auto v = check_p1(f);
    CHECK_FALSE(v.holds);
    REQUIRE(v.witness.has_value());
    CHECK(abs((*v.witness)[0]) == 1);
    CHECK((*v.witness)[0] == (*v.witness)[1]);
    CHECK(combine(f.d(), *v.witness).is_zero());
    auto wm = weak_mixing_verdict(f);
    CHECK_FALSE(wm.weakly_mixing);
  }
  auto tv = check_p2(fixtures::roof("two_values"));
  CHECK_FALSE(tv.holds);
  CHECK(tv.qalpha_span.member);
  auto rj = check_p2(fixtures::roof("rational_jumps"));
  CHECK_FALSE(rj.holds);
  CHECK(rj.rational_span_member);
}

TEST_CASE("P1 agrees with brute force on every fixture") {
  for (const auto& r : all_roofs()) {
    auto f = fixtures::roof(r.name, r.preset);
    CAPTURE(r.name);
    CAPTURE(r.preset);
    CHECK(check_p1(f).holds == p1_brute(f));
  }
}

TEST_CASE("eigenvalue criterion") {
  auto s = fixtures::roof("solvable_eigen");
  auto rep = eigenvalue_criterion(s, SymReal::parse(s.basis(), "1"));
  CHECK(rep.solvable);
  CHECK(s.integral() == SymReal::parse(s.basis(), "1 + alpha"));
  for (long k : {-3L, -1L, 2L, 5L}) {
    auto rk = eigenvalue_criterion(s, SymReal::rational(s.basis(), k));
    CHECK(rk.clause_classes);
  }
  CHECK_THROWS_AS(eigenvalue_criterion(s, SymReal::zero(s.basis())), Error);
  auto e = fixtures::roof("example1");
  for (long q = 1; q <= 5; ++q)
    for (long p = -5; p <= 5; ++p)
      if (p != 0) CHECK_FALSE(eigenvalue_criterion(e, SymReal::rational(e.basis(), rat(p, q))).solvable);
}

TEST_CASE("coboundary reduction") {
  auto ctx = cf::CFContext::preset("golden");
  auto zero = coboundary_reduce({}, ctx, 3, 1000, 1e-10);
  CHECK(zero.residual == 0);
  auto cos1 = coboundary_reduce({{1, {0.5, 0}}, {-1, {0.5, 0}}}, ctx, 1, 1000, 1e-10);
  CHECK(cos1.residual < 1e-10);
  CHECK(cos1.within_tolerance);
  // independent residual check on an offset grid
  double worst = 0;
  const double a = ctx.alpha_double();
  for (int k = 0; k < 777; ++k) {
    const double x = (k + 0.37) / 777.0;
    const double lhs = (eval_trig(cos1.u, x + a) - eval_trig(cos1.u, x)).real();
    worst = std::max(worst, std::abs(lhs - std::cos(2 * M_PI * x)));
  }
  CHECK(worst < 1e-10);
  CHECK_THROWS_AS(coboundary_reduce({{0, {0.1, 0}}}, ctx, 1, 1000, 1e-10), Error);
}
