#include <cmath>

#include "doctest.h"
#include "support.hpp"
#include "specflow/error.hpp"
#include "specflow/fixtures.hpp"
#include "specflow/ratner.hpp"

using namespace specflow;

namespace {

// f^{(n)}(x) - f^{(n)}(y) by direct summation of the two orbits.
SymReal diff_direct(const RoofPC& f, const SymReal& x, const SymReal& y, long n) {
  SymReal s = SymReal::zero(f.basis());
  for (long j = 0; j < n; ++j) s += value_at(f, orbit_point(x, j)) - value_at(f, orbit_point(y, j));
  return s;
}

}  // namespace

TEST_CASE("constants for the golden Example-1 roof") {
  auto f = fixtures::roof("example1", "golden");
  auto k = ratner_constants(f);
  CHECK(k.h == 3);
  CHECK(k.p == 2);
  CHECK(k.c.get_d() == doctest::Approx(0.381836).epsilon(1e-5));
  CHECK(k.r.get_d() == doctest::Approx(2 / std::pow(k.c.get_d(), 5) + 1).epsilon(1e-12));
  CHECK(k.kappa > 0);
  CHECK(k.kappa < 1);
  for (long n : {1L, 5L, 13L, 1000L}) CHECK(k.delta(2 * n) == k.delta(n) / 2);
  CHECK(k.delta(6) < k.delta(5));
  CHECK(in_v(k, {1, 0}));
  CHECK(in_v(k, {k.r_int, -k.r_int}));
  // other representations differ by the relation (1, 1)
  CHECK(in_v(k, {k.r_int + 1, 0}));
  CHECK_FALSE(in_v(k, {2 * k.r_int + 1, 0}));
}

TEST_CASE("constants refuse roofs without (P1)") {
  for (const char* name : {"p1_fail_orbit", "fresh_symbol"}) {
    try {
      ratner_constants(fixtures::roof(name, "golden"));
      FAIL("expected Precondition");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Precondition);
    }
  }
}

TEST_CASE("witness invariants on sampled close pairs") {
  auto f = fixtures::roof("example1", "golden");
  auto k = ratner_constants(f);
  const long n_min = f.ctx().q(4).get_si();
  auto pairs = sample_close_pairs(f, k, n_min, 6, 42);
  REQUIRE(pairs.size() == 6);
  for (const auto& pr : pairs) {
    CHECK(pr.gap < k.delta(n_min));
    CHECK(pr.gap >= k.delta(n_min) / 32);
    auto w = find_witness(f, k, pr.x, pr.y, n_min);
    CHECK(w.l >= 1);
    CHECK(w.kappa_ok);
    CHECK(w.all_in_v);
    CHECK(w.rho_in_f);
    CHECK(w.split_ok);
    CHECK(w.start_maximal);
    CHECK(mpz_class(w.m) >= w.q_s);
    CHECK(mpz_class(w.m + w.l) < w.q_s4);
    // rho is nonzero and constant on the run
    CHECK_FALSE(w.rho.is_zero());
    const SymReal at_m = birkhoff_diff(f, pr.x, pr.y, w.m);
    CHECK(at_m == w.rho);
    CHECK(birkhoff_diff(f, pr.x, pr.y, w.m + w.l) == w.rho);
    CHECK(birkhoff_diff(f, pr.x, pr.y, w.m - 1) != w.rho);
    CHECK(mpq_class(w.l) >= k.kappa * w.m);
    CHECK(recheck_witness(f, pr.x, pr.y, w));
  }
}

TEST_CASE("run start agrees with direct summation") {
  auto f = fixtures::roof("example1", "golden");
  auto k = ratner_constants(f);
  auto pairs = sample_close_pairs(f, k, 5, 1, 7);
  auto w = find_witness(f, k, pairs[0].x, pairs[0].y, 5);
  if (w.m < 4000) CHECK(diff_direct(f, pairs[0].x, pairs[0].y, w.m) == w.rho);
}

TEST_CASE("same-orbit pair") {
  auto f = fixtures::roof("example1", "golden");
  auto k = ratner_constants(f);
  auto b = f.basis();
  // y = x + q_n alpha with ||q_n alpha|| < delta(5)
  std::size_t n = 1;
  while (cf::dist_to_int(f.ctx(), 0, mpq_class(f.ctx().q(n))).hi >= k.delta(5)) ++n;
  auto x = SymReal::parse(b, "0.123");
  auto y = orbit_point(x, f.ctx().q(n).get_si());
  auto w = find_witness(f, k, x, y, 5);
  CHECK(w.l >= 1);
  CHECK(recheck_witness(f, x, y, w));
  CHECK_THROWS_AS(find_witness(f, k, x, x, 5), Error);
}

TEST_CASE("far pairs are refused") {
  auto f = fixtures::roof("example1", "golden");
  auto k = ratner_constants(f);
  auto b = f.basis();
  try {
    find_witness(f, k, SymReal::parse(b, "0.1"), SymReal::parse(b, "0.2"), 5);
    FAIL("expected Precondition");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Precondition);
  }
}

TEST_CASE("R-property verifier and negative control") {
  auto f = fixtures::roof("example1", "golden");
  auto k = ratner_constants(f);
  RPropertyOptions opt;
  opt.t0 = 1.0;
  opt.eps = 0.2;
  opt.trials = 5;
  opt.seed = 3;
  opt.n_min = 5;
  for (const auto& d : f.d()) opt.p_set.push_back(d.to_double());
  for (const auto& d : f.d()) opt.p_set.push_back(2 * d.to_double());
  auto ok = verify_r_property(f, k, opt);
  CHECK(ok.verdict);
  CHECK(ok.pairs.size() == 5);

  opt.rho_offset = 0.5;
  auto bad = verify_r_property(f, k, opt);
  CHECK_FALSE(bad.verdict);

  opt.p_set.clear();
  CHECK_THROWS_AS(verify_r_property(f, k, opt), Error);
}
