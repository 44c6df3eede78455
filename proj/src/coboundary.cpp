#include <cmath>
#include <numbers>

#include "specflow/error.hpp"
#include "specflow/roof.hpp"

namespace specflow {

std::complex<double> eval_trig(const std::vector<TrigMode>& modes, double x) {
  std::complex<double> s = 0;
  for (const auto& m : modes) s += m.c * std::polar(1.0, 2 * std::numbers::pi * static_cast<double>(m.n) * x);
  return s;
}

CoboundaryResult coboundary_reduce(const std::vector<TrigMode>& zeta, const cf::CFContext& ctx, long n_modes,
                                   std::size_t grid, double tolerance) {
  for (const auto& m : zeta)
    if (m.n == 0 && std::abs(m.c) > 1e-15)
      throw Error(ErrorKind::Precondition, "coboundary_reduce needs a zero-mean function");
  if (grid == 0) throw Error(ErrorKind::InvalidArgument, "coboundary_reduce needs a nonempty grid");
  const double alpha = ctx.alpha_double();
  CoboundaryResult out;
  for (const auto& m : zeta) {
    if (m.n == 0 || std::labs(m.n) > n_modes) continue;
    const double phase = 2 * std::numbers::pi * fixed_to_double(static_cast<Fixed>(static_cast<__int128>(m.n)) * ctx.alpha_fixed());
    out.u.push_back({m.n, m.c / (std::polar(1.0, phase) - 1.0)});
  }
  for (std::size_t k = 0; k < grid; ++k) {
    const double x = static_cast<double>(k) / static_cast<double>(grid);
    const auto r = eval_trig(out.u, x + alpha) - eval_trig(out.u, x) - eval_trig(zeta, x);
    out.residual = std::max(out.residual, std::abs(r));
  }
  out.grid_points = grid;
  out.within_tolerance = out.residual <= tolerance;
  return out;
}

}  // namespace specflow
