#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "specflow/cf_arith.hpp"

using namespace specflow;
using namespace specflow::cf;

namespace {

long double golden_ld() { return (std::sqrt(5.0L) - 1.0L) / 2.0L; }
long double sqrt2m1_ld() { return std::sqrt(2.0L) - 1.0L; }

long double dist_ld(long double v) { return std::fabs(v - std::nearbyint(v)); }

// q_n by the recurrence, computed here independently of the library.
std::vector<long> q_oracle(long digit, int n) {
  std::vector<long> q{1, digit};
  while (static_cast<int>(q.size()) <= n) q.push_back(digit * q.back() + q[q.size() - 2]);
  return q;
}

}  // namespace

TEST_CASE("convergent denominators follow the recurrence") {
  auto g = CFContext::preset("golden");
  auto s = CFContext::preset("sqrt2m1");
  const auto qg = q_oracle(1, 4);
  const auto qs = q_oracle(2, 4);
  for (int n = 0; n <= 4; ++n) {
    CHECK(g.q(n) == qg[n]);
    CHECK(s.q(n) == qs[n]);
  }
  CHECK(g.p(0) == 0);
  CHECK(g.q(0) == 1);
  CHECK(s.q(12) == 33461);
}

TEST_CASE("recurrence and sandwich hold on every cached index") {
  for (const char* name : {"golden", "sqrt2m1"}) {
    auto ctx = CFContext::preset(name);
    for (std::size_t n = 1; n < 40; ++n) {
      const long a = ctx.digit(n + 1);
      CHECK(ctx.q(n + 1) == a * ctx.q(n) + ctx.q(n - 1));
      CHECK(ctx.p(n + 1) == a * ctx.p(n) + ctx.p(n - 1));
      mpz_class det = ctx.p(n) * ctx.q(n - 1) - ctx.p(n - 1) * ctx.q(n);
      CHECK(abs(det) == 1);
      // alpha lies strictly between p_{n-1}/q_{n-1} and p_n/q_n
      mpq_class lo(ctx.p(n - 1), ctx.q(n - 1)), hi(ctx.p(n), ctx.q(n));
      lo.canonicalize();
      hi.canonicalize();
      const int s1 = sign_linear(ctx, -lo, 1), s2 = sign_linear(ctx, -hi, 1);
      CHECK(s1 * s2 == -1);
    }
  }
}

TEST_CASE("sign_linear examples and consistency") {
  auto g = CFContext::preset("golden");
  auto s = CFContext::preset("sqrt2m1");
  CHECK(sign_linear(s, 0, 0) == 0);
  CHECK(sign_linear(s, 1, -2) == 1);
  CHECK(sign_linear(g, -2, 5) == 1);
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> u(-40, 40);
  for (int t = 0; t < 2000; ++t) {
    mpq_class r(u(rng), 1 + std::abs(u(rng))), q(u(rng), 1 + std::abs(u(rng)));
    r.canonicalize();
    q.canonicalize();
    const int sg = sign_linear(g, r, q);
    CHECK((sg == 0) == (r == 0 && q == 0));
    const long double v = static_cast<long double>(r.get_d()) + static_cast<long double>(q.get_d()) * golden_ld();
    if (std::fabs(v) > 1e-12L) CHECK(sg == (v > 0 ? 1 : -1));
  }
}

TEST_CASE("dist_to_int") {
  auto g = CFContext::preset("golden");
  auto z = dist_to_int(g, 0, 0);
  CHECK(z.lo == 0);
  CHECK(z.hi == 0);
  auto d = dist_to_int(g, 0, 1, 60);
  CHECK(std::abs(d.lo.get_d() - static_cast<double>(1 - golden_ld())) < 1e-12);
  for (const char* name : {"golden", "sqrt2m1"}) {
    auto ctx = CFContext::preset(name);
    const long c = ctx.big_c();
    for (std::size_t n = 1; n <= 12; ++n) {
      auto e = dist_to_int(ctx, 0, mpq_class(ctx.q(n)), 96);
      CHECK(e.lo > mpq_class(1, 2 * c * ctx.q(n)));
      CHECK(e.hi < mpq_class(1, ctx.q(n + 1)));
    }
  }
}

TEST_CASE("bpq_constant passes an exhaustive scan") {
  auto g = CFContext::preset("golden");
  auto bc = bpq_constant(g, 100);
  const double c = bc.c.get_d();
  CHECK(c > 0);
  for (long j = 1; j <= 100; ++j) CHECK(static_cast<double>(j * dist_ld(j * golden_ld())) >= c);
  for (std::size_t n = 1; g.q(n + 1) <= 100; ++n) CHECK(mpq_class(g.q(n), g.q(n + 1)) >= bc.c);

  auto s = CFContext::preset("sqrt2m1");
  auto bs = bpq_constant(s, 100);
  for (std::size_t n = 1; s.q(n + 1) <= 100; ++n) CHECK(bs.c <= mpq_class(s.q(n), s.q(n + 1)));
  for (long j = 1; j <= 100; ++j) CHECK(static_cast<double>(j * dist_ld(j * sqrt2m1_ld())) >= bs.c.get_d());

  auto b1 = bpq_constant(g, 1);
  CHECK(b1.c.get_d() <= static_cast<double>(1 - golden_ld()));
}

TEST_CASE("orbit partition gaps") {
  auto g = CFContext::preset("golden");
  auto one = orbit_partition_gaps(g, 1);
  CHECK(one.min_gap_value == doctest::Approx(1.0));
  CHECK(one.max_gap_value == doctest::Approx(1.0));

  auto oracle = [](long double a, long m, std::vector<long double> extra) {
    std::vector<long double> pts;
    for (long j = 0; j < m; ++j) {
      long double v = -j * a;
      pts.push_back(v - std::floor(v));
    }
    for (auto& v : extra) pts.push_back(v);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end(), [](long double x, long double y) { return std::fabs(x - y) < 1e-15L; }),
              pts.end());
    long double mn = 2, mx = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      long double gap = (i + 1 < pts.size() ? pts[i + 1] : pts[0] + 1) - pts[i];
      mn = std::min(mn, gap);
      mx = std::max(mx, gap);
    }
    return std::pair<double, double>(static_cast<double>(mn), static_cast<double>(mx));
  };

  auto g8 = orbit_partition_gaps(g, 8);
  CHECK(g8.distinct_lengths <= 3);
  auto o8 = oracle(golden_ld(), 8, {});
  CHECK(g8.min_gap_value == doctest::Approx(o8.first).epsilon(1e-12));
  CHECK(g8.max_gap_value == doctest::Approx(o8.second).epsilon(1e-12));

  auto gb = orbit_partition_gaps(g, 2, QAlpha{mpq_class(1, 3), 0});
  std::vector<long double> beta{1.0L / 3, 1.0L / 3 - golden_ld() + 1};
  auto ob = oracle(golden_ld(), 2, beta);
  CHECK(gb.point_count == 4);
  CHECK(gb.min_gap_value == doctest::Approx(ob.first).epsilon(1e-12));
  CHECK(gb.max_gap_value == doctest::Approx(ob.second).epsilon(1e-12));

  // three-distance bounds stay in a fixed band for bounded quotients
  for (const char* name : {"golden", "sqrt2m1"}) {
    auto ctx = CFContext::preset(name);
    double lo = 1e9, hi = 0;
    std::vector<long> ms;
    for (long m = 1; m <= 60; ++m) ms.push_back(m);
    for (long m : {100L, 377L, 985L, 2584L, 5741L, 10000L}) ms.push_back(m);
    for (long m : ms) {
      auto st = orbit_partition_gaps(ctx, m);
      CHECK(st.distinct_lengths <= 3);
      lo = std::min(lo, st.min_gap_value * m);
      hi = std::max(hi, st.max_gap_value * m);
    }
    CHECK(lo > 0.25);
    CHECK(hi < 4.0);
  }
}
