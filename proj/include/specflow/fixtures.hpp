#pragma once

#include <string>
#include <vector>

#include "specflow/roof.hpp"

namespace specflow::fixtures {

/// Basis {1, alpha, b = sqrt(3), alpha_b = alpha*sqrt(3), g} with the alpha
/// action filled in for the named alpha preset ("golden" or "sqrt2m1"). g is
/// sqrt(5) - 2 for sqrt2m1 and sqrt(7) - 2 for golden (sqrt(5) is rational in
/// the golden field).
BasisPtr sqrt3_basis(const std::string& alpha_preset);

/// Named roofs:
///   example1       f = 1 + b on [0, 1/3), 1 on [1/3, 1)
///   p1_fail_orbit  same values, second jump moved to alpha
///   fresh_symbol   same values, second jump at g
///   two_values     2b on [0, 1/2), b on [1/2, 1)
///   rational_jumps 2 on [0, 1/2), 1 on [1/2, 1)
///   solvable_eigen 2 on [0, alpha), 1 on [alpha, 1)
/// alpha_preset empty selects the default (sqrt2m1 for example1 and its
/// mutations, golden otherwise).
RoofPC roof(const std::string& name, const std::string& alpha_preset = "");

std::vector<std::string> roof_names();

}  // namespace specflow::fixtures
