#include <cmath>
#include <random>

#include "doctest.h"
#include "specflow/error.hpp"
#include "specflow/fixtures.hpp"
#include "specflow/symreal.hpp"

using namespace specflow;

namespace {

BasisPtr sqrt3() { return fixtures::sqrt3_basis("sqrt2m1"); }

}  // namespace

TEST_CASE("membership examples") {
  auto b = sqrt3();
  auto al = SymReal::symbol(b, "alpha");
  CHECK(membership(al, Target::z_plus_z_alpha_mod1()).member);
  auto third = SymReal::parse(b, "1/3");
  CHECK_FALSE(membership(third, Target::z_plus_z_alpha_mod1()).member);
  CHECK(membership(third, Target::q_plus_q_alpha()).member);
  auto one = SymReal::parse(b, "1");
  auto sb = SymReal::symbol(b, "b");
  auto m = membership(one, Target::q_alpha_span({sb}));
  CHECK_FALSE(m.member);
  CHECK_FALSE(m.separating.empty());
}

TEST_CASE("span certificates reconstruct the element") {
  auto b = sqrt3();
  auto sb = SymReal::symbol(b, "b");
  auto g = SymReal::symbol(b, "g");
  std::vector<SymReal> set{sb, g};
  auto x = SymReal::parse(b, "3/2*b - 7*g");
  auto m = membership(x, Target::q_span(set));
  REQUIRE(m.member);
  SymReal back = SymReal::zero(b);
  for (std::size_t i = 0; i < set.size(); ++i) back += set[i] * m.coefficients[i];
  CHECK(back == x);

  auto y = SymReal::parse(b, "2*b + 5*alpha_b");  // (2 + 5 alpha) b
  auto ma = membership(y, Target::q_alpha_span({sb}));
  REQUIRE(ma.member);
  CHECK(sb * ma.coefficients[0] + times_alpha(sb) * ma.coefficients[1] == y);
}

TEST_CASE("relation lattice") {
  auto b = sqrt3();
  auto sb = SymReal::symbol(b, "b");
  auto g = SymReal::symbol(b, "g");
  auto l1 = relation_lattice({sb, -sb});
  REQUIRE(l1.size() == 1);
  CHECK(abs(l1[0][0]) == 1);
  CHECK(l1[0][0] == l1[0][1]);
  auto l2 = relation_lattice({sb, sb * mpq_class(2), g});
  REQUIRE(l2.size() == 1);
  CHECK(combine({sb, sb * mpq_class(2), g}, l2[0]).is_zero());
  CHECK(abs(l2[0][0]) == 2);
  CHECK(abs(l2[0][1]) == 1);
  CHECK(l2[0][2] == 0);
  CHECK(relation_lattice({sb, g, SymReal::parse(b, "1")}).empty());

  // vectors off the lattice give nonzero sums
  std::vector<SymReal> vals{sb, -sb, g, sb * mpq_class(3)};
  auto lat = relation_lattice(vals);
  for (const auto& v : lat) CHECK(combine(vals, v).is_zero());
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> u(-6, 6);
  for (int t = 0; t < 300; ++t) {
    std::vector<long> n{u(rng), u(rng), u(rng), u(rng)};
    const bool in_lattice = n[2] == 0 && n[0] - n[1] + 3 * n[3] == 0;
    auto s = combine(vals, n);
    CHECK(s.is_zero() == in_lattice);
    if (!in_lattice) CHECK(s.eval(128).lo * s.eval(128).hi > 0);
  }
}

TEST_CASE("certified evaluation") {
  auto b = sqrt3();
  auto z = SymReal::zero(b).eval(64);
  CHECK(z.lo == 0);
  CHECK(z.hi == 0);
  auto golden = Basis::create(cf::CFContext::preset("golden"));
  auto a = SymReal::symbol(golden, "alpha").eval(40);
  CHECK(a.hi - a.lo <= pow2(-40));
  CHECK(a.lo.get_d() <= 0.6180339887498949);
  CHECK(a.hi.get_d() >= 0.6180339887498947);
  auto x = SymReal::parse(b, "1 + b/3").eval(30);
  CHECK(x.lo.get_d() == doctest::Approx(1.0 + std::sqrt(3.0) / 3).epsilon(1e-8));

  // nested under precision increase and contains the weighted symbol sum
  auto y = SymReal::parse(b, "2/7 - 3*alpha + 5/11*b - alpha_b + 4*g");
  RationalInterval prev = y.eval(16);
  for (unsigned bits : {32u, 64u, 128u, 256u}) {
    auto cur = y.eval(bits);
    CHECK(cur.lo >= prev.lo);
    CHECK(cur.hi <= prev.hi);
    RationalInterval sum{0, 0};
    for (std::size_t i = 0; i < b->size(); ++i)
      if (y.coord(i) != 0) sum = sum + y.coord(i) * b->symbol_enclosure(i, bits + 8);
    CHECK(sum.lo <= cur.hi);
    CHECK(sum.hi >= cur.lo);
    prev = cur;
  }
  const double ref = 2.0 / 7 - 3 * (std::sqrt(2.0) - 1) + 5.0 / 11 * std::sqrt(3.0) -
                     (std::sqrt(2.0) - 1) * std::sqrt(3.0) + 4 * (std::sqrt(5.0) - 2);
  CHECK(y.to_double() == doctest::Approx(ref).epsilon(1e-12));
}

TEST_CASE("floor and circle normalization agree with floating point") {
  auto b = sqrt3();
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<long> u(-50, 50);
  for (int t = 0; t < 300; ++t) {
    auto x = SymReal::parse(b, std::to_string(u(rng)) + "/7 + " + std::to_string(u(rng)) + "/5*b + " +
                                   std::to_string(u(rng)) + "*alpha");
    const double v = x.to_double();
    CHECK(floor_exact(x) == static_cast<long>(std::floor(v)));
    auto c = circle_normalize(x);
    CHECK(c.sign() >= 0);
    CHECK(compare(c, SymReal::parse(b, "1")) < 0);
    CHECK((x - c).is_rational());
  }
}

TEST_CASE("multiply needs a factor in Q + Q alpha") {
  auto b = sqrt3();
  auto sb = SymReal::symbol(b, "b");
  auto r = multiply(SymReal::parse(b, "2 + alpha"), sb);
  CHECK(r == SymReal::parse(b, "2*b + alpha_b"));
  try {
    multiply(sb, sb);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InsufficientStructure);
  }
}
