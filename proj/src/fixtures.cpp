#include "specflow/fixtures.hpp"

#include "specflow/error.hpp"

namespace specflow::fixtures {

namespace {

std::string alpha_square(const std::string& preset) {
  if (preset == "golden") return "1 - alpha";
  if (preset == "sqrt2m1") return "1 - 2*alpha";
  throw Error(ErrorKind::InvalidArgument, "unknown alpha preset '" + preset + "'");
}

}  // namespace

BasisPtr sqrt3_basis(const std::string& alpha_preset) {
  const std::string sq = alpha_square(alpha_preset);
  return Basis::create(cf::CFContext::preset(alpha_preset),
                       {{"b", "sqrt(3)"}, {"alpha_b", "alpha*sqrt(3)"}, {"g", alpha_preset == "golden" ? "sqrt(7) - 2" : "sqrt(5) - 2"}},
                       {{"alpha", sq}, {"b", "alpha_b"}, {"alpha_b", alpha_preset == "golden" ? "b - alpha_b" : "b - 2*alpha_b"}});
}

RoofPC roof(const std::string& name, const std::string& alpha_preset) {
  const bool sqrt3_family = name == "example1" || name == "p1_fail_orbit" || name == "fresh_symbol";
  const std::string preset = alpha_preset.empty() ? (sqrt3_family ? "sqrt2m1" : "golden") : alpha_preset;
  BasisPtr basis;
  if (name == "rational_jumps" || name == "solvable_eigen") {
    basis = Basis::create(cf::CFContext::preset(preset), {}, {{"alpha", alpha_square(preset)}});
  } else {
    basis = sqrt3_basis(preset);
  }
  auto s = [&](const std::string& t) { return SymReal::parse(basis, t); };
  if (name == "example1") return RoofPC::make({s("0"), s("1/3")}, {s("-b"), s("b")}, s("1 + b"));
  if (name == "p1_fail_orbit") return RoofPC::make({s("0"), s("alpha")}, {s("-b"), s("b")}, s("1 + b"));
  if (name == "fresh_symbol") return RoofPC::make({s("0"), s("g")}, {s("-b"), s("b")}, s("1 + b"));
  if (name == "two_values") return RoofPC::make({s("0"), s("1/2")}, {s("-b"), s("b")}, s("2*b"));
  if (name == "rational_jumps") return RoofPC::make({s("0"), s("1/2")}, {s("-1"), s("1")}, s("2"));
  if (name == "solvable_eigen") return RoofPC::make({s("0"), s("alpha")}, {s("-1"), s("1")}, s("2"));
  throw Error(ErrorKind::InvalidArgument, "unknown roof preset '" + name + "'");
}

std::vector<std::string> roof_names() {
  return {"example1", "p1_fail_orbit", "fresh_symbol", "two_values", "rational_jumps", "solvable_eigen"};
}

}  // namespace specflow::fixtures
