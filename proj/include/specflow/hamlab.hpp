#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "specflow/trig_poly.hpp"

namespace specflow {

/// H(x, y) = alpha1 x + alpha2 y + P(x, y); the flow is X_H / g.
struct HamiltonianSystem {
  std::string name;
  double alpha1 = 0;
  double alpha2 = 1;
  TrigPoly p;
  TrigPoly g = TrigPoly::constant(1.0);
  std::vector<std::array<double, 2>> vertices;  // declared zeros of g

  double h(double x, double y) const;
  std::array<double, 2> grad_h(double x, double y) const;
  void validate() const;
};

std::array<double, 2> vector_field(const HamiltonianSystem& sys, double x, double y);

struct TrajectoryPoint {
  double t, x, y;
};

struct Trajectory {
  std::vector<TrajectoryPoint> points;  // unwrapped coordinates
  double h_drift = 0;                   // max |H(pt) - H(start)|
  bool fixed_point = false;
  std::size_t steps = 0;
  std::size_t rejected = 0;
};

/// Dormand-Prince 5(4) with per-step error control.
Trajectory integrate(const HamiltonianSystem& sys, double x, double y, double duration, double tol);

/// Vertical circle {x = x0} parameterized by y in [0, 1).
struct Transversal {
  double x0 = 0;
  int orientation = 1;  // sign of the x-velocity along the circle
};

/// Checks X . e_x has constant sign on the circle; throws Precondition otherwise.
Transversal make_transversal(const HamiltonianSystem& sys, double x0, std::size_t samples = 512);

/// H(x0, y) - H(x0, 0) reduced to [0, alpha2).
double induced_coordinate(const HamiltonianSystem& sys, const Transversal& tr, double y);
/// Inverse of induced_coordinate.
double curve_parameter(const HamiltonianSystem& sys, const Transversal& tr, double s);

struct ReturnResult {
  double s = 0;
  double s_return = 0;
  double time = 0;
  double y_start = 0;
  double y_return = 0;
  double h_drift = 0;
};

/// Throws NoReturn when the orbit is trapped or exceeds the time cap 100 / alpha2.
ReturnResult return_map(const HamiltonianSystem& sys, const Transversal& tr, double s, double tol);

/// Forward orbit reaches the transversal before the cap and before closing up.
bool reaches_transversal(const HamiltonianSystem& sys, const Transversal& tr, double x, double y, double tol);

struct ProfileSample {
  double s = 0;
  double s_return = 0;
  double return_time = 0;
  bool ok = false;
  std::string error;
};

struct JumpEstimate {
  double beta = 0;
  double d = 0;  // left limit minus right limit
  double left_limit = 0;
  double right_limit = 0;
  std::size_t cell = 0;
};

struct SectionProfile {
  Transversal transversal;
  double alpha2 = 1;
  double tol = 0;
  std::vector<ProfileSample> samples;
  std::vector<JumpEstimate> jumps;
  std::size_t failures = 0;
  double rotation = 0;           // fitted s' - s mod alpha2
  double rotation_expected = 0;  // -orientation * alpha1 mod alpha2
  double rotation_spread = 0;    // max residual of the fit
  double jump_sum = 0;
  double max_abs_jump = 0;
  double integral = 0;  // periodic trapezoid of the return time
};

SectionProfile section_profile(const HamiltonianSystem& sys, const Transversal& tr, std::size_t grid, double tol);

struct AreaReport {
  double mc_integral = 0;
  double mc_radius = 0;  // 1.96 standard errors
  double profile_integral = 0;
  double discrepancy = 0;  // relative
  double ec_fraction = 0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

AreaReport area_identity_check(const HamiltonianSystem& sys, const Transversal& tr, const SectionProfile& profile,
                               std::size_t mc_samples, std::uint64_t seed, double tol = 1e-7);

/// Static SVG of a few orbits, the transversal, and the declared vertices.
std::string phase_portrait_svg(const HamiltonianSystem& sys, const Transversal& tr, std::size_t orbits, double tol);

std::string profile_csv(const SectionProfile& profile);

namespace hamfix {

/// P = 0, g = 1.
HamiltonianSystem free_flow(double alpha1, double alpha2);
/// P = 0, g = 1 + cos(2 pi y) / 2.
HamiltonianSystem g_cos(double alpha1, double alpha2);
/// P = A sin(2 pi x) cos(2 pi y) with 2 pi A = 2.5; g vanishes at the four saddles.
HamiltonianSystem trap();
/// Saddles of H located by Newton from a coarse grid.
std::vector<std::array<double, 2>> saddles(const HamiltonianSystem& sys);

HamiltonianSystem by_name(const std::string& name);
std::vector<std::string> names();

}  // namespace hamfix

}  // namespace specflow
